//! Characteristic-class calculus on formal (possibly virtual) bundles whose
//! Chern classes live in a truncated graded ring.

use crate::error::{Error, Result};
use crate::graded::{constant, one, Ring, RingElt};
use crate::scalar::{Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct SheafClass<F: Field> {
    pub rank: i64,
    /// Total Chern class, constant term 1.
    pub chern: RingElt<F>,
}

impl<F: Field> SheafClass<F> {
    pub fn new(rank: i64, chern: RingElt<F>) -> Result<Self> {
        if chern.constant_term() != F::one() {
            return Err(Error::Invalid("total Chern class must start with 1".into()));
        }
        Ok(SheafClass { rank, chern })
    }

    pub fn trivial(ring: &Ring<F>, rank: i64) -> Self {
        SheafClass { rank, chern: one(ring) }
    }

    /// The line bundle with first Chern class `c1`.
    pub fn line(c1: &RingElt<F>) -> Self {
        SheafClass { rank: 1, chern: &one(c1.ring()) + c1 }
    }

    pub fn ring(&self) -> &Ring<F> {
        self.chern.ring()
    }

    /// `c_i`; zero for `i` beyond the cap.
    pub fn c(&self, i: u32) -> RingElt<F> {
        self.chern.component(i)
    }
}

fn ensure_same<F: Field>(a: &SheafClass<F>, b: &SheafClass<F>) -> Result<()> {
    if a.chern.same_ring(&b.chern) {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

/// Inverse of a truncated series with constant term 1.
pub fn series_inverse<F: Field>(x: &RingElt<F>) -> Result<RingElt<F>> {
    let c0 = x.constant_term();
    if c0.is_zero() {
        return Err(Error::Invalid("series with zero constant term is not invertible".into()));
    }
    let ring = x.ring();
    let inv0 = c0.inv();
    let u = &x.scale(&inv0) - &one(ring);
    let neg_u = -&u;
    let mut acc = one(ring);
    let mut power = one(ring);
    for _ in 0..ring.cap() {
        power = &power * &neg_u;
        acc = &acc + &power;
    }
    Ok(acc.scale(&inv0))
}

pub fn whitney_sum<F: Field>(a: &SheafClass<F>, b: &SheafClass<F>) -> Result<SheafClass<F>> {
    ensure_same(a, b)?;
    Ok(SheafClass { rank: a.rank + b.rank, chern: &a.chern * &b.chern })
}

/// The class `Q` in `0 → sub → total → Q → 0`.
pub fn whitney_quotient<F: Field>(total: &SheafClass<F>, sub: &SheafClass<F>) -> Result<SheafClass<F>> {
    ensure_same(total, sub)?;
    Ok(SheafClass { rank: total.rank - sub.rank, chern: &total.chern * &series_inverse(&sub.chern)? })
}

pub fn dual<F: Field>(e: &SheafClass<F>) -> SheafClass<F> {
    let ring = e.ring();
    let mut chern = one(ring);
    for i in 1..=ring.cap() {
        let ci = e.c(i);
        chern = if i % 2 == 1 { &chern - &ci } else { &chern + &ci };
    }
    SheafClass { rank: e.rank, chern }
}

/// Generalised binomial coefficient `n choose j` for any integer `n`.
pub fn binomial(n: i64, j: u32) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for i in 0..j as i64 {
        acc *= Rational::new((n - i).into(), (i + 1).into());
    }
    acc
}

fn lift<F: Field>(q: &Rational) -> F {
    F::from_rational(q).expect("denominator invertible in the coefficient field")
}

/// `E ⊗ L` with `c1(L) = t`: `c_k = Σ_i binom(r − i, k − i)·c_i·t^{k−i}`,
/// valid for virtual ranks too.
pub fn twist_by_line<F: Field>(e: &SheafClass<F>, t: &RingElt<F>) -> Result<SheafClass<F>> {
    if !e.chern.same_ring(t) {
        return Err(Error::RingMismatch);
    }
    if !t.is_zero() && t.homogeneous_degree() != Some(1) {
        return Err(Error::Invalid("twisting class must be homogeneous of degree 1".into()));
    }
    let ring = e.ring();
    let cap = ring.cap();
    let powers: Vec<RingElt<F>> = (0..=cap).map(|j| t.pow(j)).collect();
    let mut chern = constant(ring, F::zero());
    for k in 0..=cap {
        for i in 0..=k {
            let b: F = lift(&binomial(e.rank - i as i64, k - i));
            if b.is_zero() {
                continue;
            }
            chern = &chern + &(&e.c(i) * &powers[(k - i) as usize]).scale(&b);
        }
    }
    Ok(SheafClass { rank: e.rank, chern })
}

fn factorial<F: Field>(k: u32) -> F {
    (1..=k as i64).fold(F::one(), |a, i| a * F::from_i64(i))
}

/// `ch(E) = rank + Σ_k p_k/k!` through degree `cap`, with the power sums `p_k`
/// obtained from the Chern classes by Newton's identities.
pub fn chern_character<F: Field>(e: &SheafClass<F>, cap: u32) -> Result<RingElt<F>> {
    let ring = e.ring();
    if cap > ring.cap() {
        return Err(Error::BeyondCap { degree: cap, cap: ring.cap() });
    }
    let c: Vec<RingElt<F>> = (0..=cap).map(|i| e.c(i)).collect();
    let mut p: Vec<RingElt<F>> = vec![constant(ring, F::from_i64(e.rank))];
    let mut ch = p[0].clone();
    for k in 1..=cap as usize {
        let mut pk = c[k].scale(&F::from_i64(k as i64 * if k % 2 == 1 { 1 } else { -1 }));
        for i in 1..k {
            let term = &c[i] * &p[k - i];
            pk = if i % 2 == 1 { &pk + &term } else { &pk - &term };
        }
        ch = &ch + &pk.scale(&factorial::<F>(k as u32).inv());
        p.push(pk);
    }
    Ok(ch)
}

/// Inverse of [`chern_character`]: rank from degree 0, then
/// `e_k = (1/k)·Σ_{i=1..k} (−1)^{i−1} e_{k−i} p_i` with `p_i = i!·ch_i`.
pub fn from_chern_character<F: Field>(ch: &RingElt<F>) -> Result<SheafClass<F>> {
    let ring = ch.ring();
    let rank = ch
        .constant_term()
        .as_i64()
        .ok_or_else(|| Error::Rank("degree-0 part of a Chern character must be an integer".into()))?;
    let p: Vec<RingElt<F>> = (0..=ring.cap()).map(|i| ch.component(i).scale(&factorial::<F>(i))).collect();
    let mut e = vec![one(ring)];
    for k in 1..=ring.cap() as usize {
        let mut acc = constant(ring, F::zero());
        for i in 1..=k {
            let term = &e[k - i] * &p[i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&F::from_i64(k as i64).inv()));
    }
    let chern = e.iter().skip(1).fold(one(ring), |a, x| &a + x);
    Ok(SheafClass { rank, chern })
}

/// Coefficients of `t / (1 − e^{−t})` through degree `cap`.
pub fn todd_series(cap: u32) -> Vec<Rational> {
    let n = cap as usize + 1;
    // (1 − e^{−t})/t = Σ (−1)^j t^j / (j+1)!
    let mut d = Vec::with_capacity(n);
    let mut fact = Rational::from_integer(1.into());
    for j in 0..n {
        fact *= Rational::from_integer(((j + 1) as i64).into());
        let sign = if j % 2 == 0 { 1 } else { -1 };
        d.push(Rational::from_integer(sign.into()) / fact.clone());
    }
    let mut out: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = if k == 0 { Rational::from_integer(1.into()) } else { Rational::from_integer(0.into()) };
        for j in 1..=k {
            s -= d[j].clone() * out[k - j].clone();
        }
        out.push(s / d[0].clone());
    }
    out
}

/// Todd class of a line bundle with first Chern class `t`.
pub fn todd_line<F: Field>(t: &RingElt<F>) -> RingElt<F> {
    let ring = t.ring();
    let coeffs = todd_series(ring.cap());
    let mut acc = constant(ring, F::zero());
    let mut power = one(ring);
    for c in coeffs {
        acc = &acc + &power.scale(&lift(&c));
        power = &power * t;
    }
    acc
}

/// Total Segre class `1/c(E)`.
pub fn segre<F: Field>(e: &SheafClass<F>) -> RingElt<F> {
    series_inverse(&e.chern).expect("Chern class starts with 1")
}

/// `c2 − c1²/4`, the characteristic class unchanged by line-bundle twists.
pub fn pgl_normalized_c2<F: Field>(w: &SheafClass<F>) -> Result<RingElt<F>> {
    if w.rank != 2 {
        return Err(Error::Rank(format!("expected rank 2, got {}", w.rank)));
    }
    let c1 = w.c(1);
    Ok(&w.c(2) - &(&c1 * &c1).scale(&F::from_i64(4).inv()))
}
