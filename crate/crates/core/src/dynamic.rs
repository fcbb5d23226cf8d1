//! Dynamic evaluation: polynomial gcds over `F[x]/(d)` for a squarefree
//! `d`, splitting `d` whenever a leading coefficient turns out to be a zero
//! divisor. Each output component is a factor of `d` over which the result
//! is uniform, so statements about "some root of `d`" become exact.

use crate::poly::UPoly;
use crate::scalar::Field;

/// A polynomial in `y` over `F[x]/(d)`, coefficients lowest power first.
pub type ModPoly<F> = Vec<UPoly<F>>;

/// One piece of a split: the factor of the modulus and the value computed
/// over it.
#[derive(Clone, Debug, PartialEq)]
pub struct Component<F: Field> {
    pub modulus: UPoly<F>,
    pub value: ModPoly<F>,
}

impl<F: Field> Component<F> {
    /// Degree in `y`, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.value.len().checked_sub(1)
    }
}

fn inverse_mod<F: Field>(a: &UPoly<F>, d: &UPoly<F>) -> Option<UPoly<F>> {
    let (g, s, _) = a.ext_gcd(d);
    (g.degree() == Some(0)).then(|| s.rem(d))
}

fn reduce<F: Field>(p: &ModPoly<F>, d: &UPoly<F>) -> ModPoly<F> {
    p.iter().map(|c| c.rem(d)).collect()
}

/// Strips leading coefficients that vanish modulo the current factor,
/// splitting the modulus where they vanish on part of it. Each returned
/// polynomial is zero or has an invertible leading coefficient.
pub fn normalize<F: Field>(d: &UPoly<F>, p: &ModPoly<F>) -> Vec<Component<F>> {
    let mut out = Vec::new();
    let mut work = vec![(d.monic(), reduce(p, d))];
    while let Some((d, mut p)) = work.pop() {
        if d.degree() == Some(0) {
            continue;
        }
        loop {
            match p.last() {
                None => {
                    out.push(Component { modulus: d, value: p });
                    break;
                }
                Some(lc) if lc.is_zero() => {
                    p.pop();
                }
                Some(lc) => {
                    let h = lc.gcd(&d);
                    if h.degree() == Some(0) {
                        out.push(Component { modulus: d, value: p });
                        break;
                    }
                    let rest = d.div_exact(&h).expect("gcd divides");
                    // On h the leading coefficient vanishes; on the cofactor
                    // it is invertible.
                    let mut ph = reduce(&p, &h);
                    ph.pop();
                    work.push((h, ph));
                    work.push((rest.clone(), reduce(&p, &rest)));
                    break;
                }
            }
        }
    }
    out
}

fn make_monic<F: Field>(d: &UPoly<F>, p: &ModPoly<F>) -> ModPoly<F> {
    match p.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = inverse_mod(lc, d).expect("normalized leading coefficient");
            p.iter().map(|c| (c * &inv).rem(d)).collect()
        }
    }
}

/// Remainder of `a` by `b`, where `b`'s leading coefficient is invertible.
fn rem_mod<F: Field>(d: &UPoly<F>, a: &ModPoly<F>, b: &ModPoly<F>) -> ModPoly<F> {
    let mut a = a.clone();
    let inv = inverse_mod(b.last().unwrap(), d).expect("invertible");
    while a.len() >= b.len() {
        let lc = a.last().unwrap().clone();
        if !lc.is_zero() {
            let q = (&lc * &inv).rem(d);
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[i + shift] = (&a[i + shift] - &(&q * bc)).rem(d);
            }
        }
        a.pop();
    }
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Monic gcd of `a` and `b` over every component of `d`.
pub fn gcd2<F: Field>(d: &UPoly<F>, a: &ModPoly<F>, b: &ModPoly<F>) -> Vec<Component<F>> {
    let mut out = Vec::new();
    for ca in normalize(d, a) {
        for cb in normalize(&ca.modulus, b) {
            let m = cb.modulus;
            let a = reduce(&ca.value, &m);
            if cb.value.is_empty() {
                out.extend(normalize(&m, &a).into_iter().map(|c| Component { value: make_monic(&c.modulus, &c.value), ..c }));
                continue;
            }
            let r = rem_mod(&m, &a, &cb.value);
            out.extend(gcd2(&m, &cb.value, &r));
        }
    }
    out
}

/// Monic gcd of several polynomials over every component of `d`.
pub fn gcd_many<F: Field>(d: &UPoly<F>, polys: &[ModPoly<F>]) -> Vec<Component<F>> {
    let mut acc = vec![Component { modulus: d.monic(), value: Vec::new() }];
    for p in polys {
        acc = acc.into_iter().flat_map(|c| gcd2(&c.modulus, &c.value, p)).collect();
    }
    acc
}

pub fn derivative<F: Field>(p: &ModPoly<F>) -> ModPoly<F> {
    let mut out: ModPoly<F> = p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&F::from_i64(i as i64))).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn det_bareiss<F: Field>(mut m: Vec<Vec<UPoly<F>>>) -> UPoly<F> {
    let n = m.len();
    let mut sign = false;
    let mut prev = UPoly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return UPoly::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    match m.last().and_then(|r| r.last()) {
        None => UPoly::one(),
        Some(d) if sign => -d,
        Some(d) => d.clone(),
    }
}

/// Coefficients `[s_j0, …, s_jj]` of the `j`-th subresultant in `y` of two
/// polynomials with coefficients in `F[x]`, for formal degrees `df`, `dg`.
/// `j = 0` gives the resultant.
pub fn subresultant<F: Field>(f: &ModPoly<F>, g: &ModPoly<F>, df: usize, dg: usize, j: usize) -> Vec<UPoly<F>> {
    assert!(j == 0 || j < df.min(dg), "subresultant index too large");
    assert!(f.len() <= df + 1 && g.len() <= dg + 1, "formal degree below actual degree");
    let coeff = |c: &ModPoly<F>, k: i64| if k < 0 { UPoly::zero() } else { c.get(k as usize).cloned().unwrap_or_else(UPoly::zero) };
    let (dfi, dgi, ji) = (df as i64, dg as i64, j as i64);
    let width = dfi + dgi - ji;
    let mut rows = Vec::new();
    for r in 0..dgi - ji {
        let shift = dgi - ji - 1 - r;
        rows.push((0..width).map(|c| coeff(f, width - 1 - c - shift)).collect::<Vec<_>>());
    }
    for r in 0..dfi - ji {
        let shift = dfi - ji - 1 - r;
        rows.push((0..width).map(|c| coeff(g, width - 1 - c - shift)).collect::<Vec<_>>());
    }
    let lead = (width - ji - 1) as usize;
    (0..=j)
        .map(|i| {
            let col = (width - 1 - i as i64) as usize;
            det_bareiss(rows.iter().map(|r| r[..lead].iter().cloned().chain([r[col].clone()]).collect()).collect())
        })
        .collect()
}
