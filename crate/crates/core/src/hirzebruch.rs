//! The Hirzebruch surface `F_m`: intersection ring `Q[f, s]/(f², s² + m·fs)`
//! with `f` a ruling line and `s` the directrix, `s² = −m`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{build_ring, gen, Ring, RingElt, RingPresentation};
use crate::poly::Poly;
use crate::scalar::{rint, Rational};

#[derive(Clone, Debug)]
pub struct FmRing {
    pub m: u32,
    pub ring: Ring<Rational>,
}

/// Presentation of `A*(F_m)` with the given cap (2 is enough for the
/// surface itself; bundle rings reuse the relations with a larger cap).
pub fn fm_relations(m: u32) -> Vec<Poly<Rational>> {
    let f = Poly::var("f");
    let s = Poly::var("s");
    vec![&f * &f, &(&s * &s) + &(&f * &s).scale(&rint(m as i64))]
}

impl FmRing {
    pub fn new(m: u32) -> Self {
        let p = RingPresentation::new(&[("f", 1), ("s", 1)], fm_relations(m), 2);
        FmRing { m, ring: build_ring(p).expect("valid presentation") }
    }

    pub fn f(&self) -> RingElt<Rational> {
        gen(&self.ring, "f").unwrap()
    }

    pub fn s(&self) -> RingElt<Rational> {
        gen(&self.ring, "s").unwrap()
    }

    pub fn divisor(&self, d: &FmDivisor) -> RingElt<Rational> {
        &self.f().scale(&d.a) + &self.s().scale(&d.b)
    }

    /// Degree of a class of degree 2: its coefficient on `f·s`.
    pub fn integrate(&self, x: &RingElt<Rational>) -> Result<Rational> {
        if x.is_zero() {
            return Ok(Rational::zero());
        }
        if x.homogeneous_degree() != Some(2) {
            return Err(Error::Inhomogeneous(format!("integrand {x} is not of pure degree 2")));
        }
        Ok(x.coeff(&[1, 1]))
    }

    pub fn intersect(&self, d1: &FmDivisor, d2: &FmDivisor) -> Rational {
        self.integrate(&(&self.divisor(d1) * &self.divisor(d2))).expect("degree 2")
    }
}

/// The divisor class `a·f + b·s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmDivisor {
    pub a: Rational,
    pub b: Rational,
}

impl FmDivisor {
    pub fn new(a: i64, b: i64) -> Self {
        FmDivisor { a: rint(a), b: rint(b) }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FmDivisor { a: &self.a * c, b: &self.b * c }
    }

    /// Reads the class off a degree-1 ring element.
    pub fn from_elt(x: &RingElt<Rational>) -> Result<Self> {
        if !x.is_zero() && x.homogeneous_degree() != Some(1) {
            return Err(Error::Inhomogeneous(format!("{x} is not a divisor class")));
        }
        let names = x.ring().generator_names();
        let pos = |n: &str| names.iter().position(|g| g == n);
        let unit = |i: Option<usize>| {
            let mut e = vec![0; names.len()];
            if let Some(i) = i {
                e[i] = 1;
            }
            e
        };
        let a = pos("f").map(|_| x.coeff(&unit(pos("f")))).unwrap_or_else(Rational::zero);
        let b = pos("s").map(|_| x.coeff(&unit(pos("s")))).unwrap_or_else(Rational::zero);
        Ok(FmDivisor { a, b })
    }
}

impl fmt::Display for FmDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, b) = if self.b < Rational::zero() { ("-", -self.b.clone()) } else { ("+", self.b.clone()) };
        write!(f, "{}*f {} {}*s", self.a, sign, b)
    }
}

impl Add for &FmDivisor {
    type Output = FmDivisor;
    fn add(self, o: &FmDivisor) -> FmDivisor {
        FmDivisor { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &FmDivisor {
    type Output = FmDivisor;
    fn sub(self, o: &FmDivisor) -> FmDivisor {
        FmDivisor { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Neg for &FmDivisor {
    type Output = FmDivisor;
    fn neg(self) -> FmDivisor {
        FmDivisor { a: -self.a.clone(), b: -self.b.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureClasses {
    /// Canonical class.
    pub k: FmDivisor,
    /// Relative dualizing class of the ruling.
    pub omega_pi: FmDivisor,
    /// Pullback of the canonical class of the base line.
    pub pullback_omega_p1: FmDivisor,
}

pub fn structure_classes(m: u32) -> StructureClasses {
    let m = m as i64;
    StructureClasses {
        k: FmDivisor::new(-(m + 2), -2),
        omega_pi: FmDivisor::new(-m, -2),
        pullback_omega_p1: FmDivisor::new(-2, 0),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigonalClassData {
    pub m: u32,
    pub k: i64,
    /// `C = 3s + k·f`.
    pub c: FmDivisor,
}

/// Minimal-Maroni ambient surface and curve class of a trigonal curve of
/// genus `g`: `m = g mod 2`, `k = (g + 3m + 2)/2`, fixed by adjunction.
pub fn trigonal_class_data(g: i64) -> Result<TrigonalClassData> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let m = (g % 2) as u32;
    let k = (g + 3 * m as i64 + 2) / 2;
    Ok(TrigonalClassData { m, k, c: FmDivisor::new(k, 3) })
}

/// Integral of a degree-2 class on `F_m`.
pub fn integrate(fm: &FmRing, x: &RingElt<Rational>) -> Result<Rational> {
    fm.integrate(x)
}

/// `h⁰(F_m, O(a·f + b·s)) = Σ_{i=0..b} max(0, a − i·m + 1)`, zero for `b < 0`.
pub fn h0_line_bundle(m: u32, a: i64, b: i64) -> i64 {
    if b < 0 {
        return 0;
    }
    (0..=b).map(|i| (a - i * m as i64 + 1).max(0)).sum()
}

/// Whether two divisor classes are proportional.
pub fn proportionality_check(d1: &FmDivisor, d2: &FmDivisor) -> bool {
    (&d1.a * &d2.b - &d1.b * &d2.a).is_zero()
}

/// Maroni values allowed for genus `g`: same parity as `g`, at most
/// `⌊(g+2)/3⌋`.
pub fn admissible_maroni(g: i64) -> Vec<u32> {
    let top = (g + 2) / 3;
    (0..=top.max(0) as u32).filter(|&m| (m as i64 - g) % 2 == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::parse_elt;

    #[test]
    fn structure_examples() {
        assert_eq!(structure_classes(0).k, FmDivisor::new(-2, -2));
        assert_eq!(structure_classes(1).omega_pi, FmDivisor::new(-1, -2));
        for m in 0..4 {
            let fm = FmRing::new(m);
            let sc = structure_classes(m);
            let f = FmDivisor::new(1, 0);
            assert_eq!(fm.intersect(&sc.omega_pi, &f), rint(-2));
            assert_eq!(fm.intersect(&sc.pullback_omega_p1, &f), rint(0));
        }
    }

    #[test]
    fn trigonal_examples() {
        let d = |g| trigonal_class_data(g).unwrap();
        assert_eq!(d(2), TrigonalClassData { m: 0, k: 2, c: FmDivisor::new(2, 3) });
        assert_eq!(d(3), TrigonalClassData { m: 1, k: 4, c: FmDivisor::new(4, 3) });
        assert_eq!(d(5), TrigonalClassData { m: 1, k: 5, c: FmDivisor::new(5, 3) });
        assert_eq!(trigonal_class_data(1), Err(Error::GenusTooSmall(1)));
    }

    #[test]
    fn integration_examples() {
        let f0 = FmRing::new(0);
        let f1 = FmRing::new(1);
        assert_eq!(integrate(&f0, &parse_elt(&f0.ring, "f*s").unwrap()).unwrap(), rint(1));
        assert_eq!(integrate(&f1, &parse_elt(&f1.ring, "s^2").unwrap()).unwrap(), rint(-1));
        assert_eq!(integrate(&f0, &parse_elt(&f0.ring, "(3*s + 2*f)^2").unwrap()).unwrap(), rint(12));
        assert!(integrate(&f0, &parse_elt(&f0.ring, "s + f*s").unwrap()).is_err());
    }

    #[test]
    fn section_counts() {
        assert_eq!(h0_line_bundle(0, 2, 3), 12);
        assert_eq!(h0_line_bundle(1, 4, 3), 14);
        assert_eq!(h0_line_bundle(0, -1, 0), 0);
    }

    #[test]
    fn proportionality() {
        let sc = structure_classes(0);
        let c = trigonal_class_data(2).unwrap().c;
        let a = &(&c + &sc.omega_pi) + &sc.omega_pi;
        let b = &c + &sc.pullback_omega_p1;
        assert_eq!(a, FmDivisor::new(2, -1));
        assert_eq!(b, FmDivisor::new(0, 3));
        assert!(!proportionality_check(&a, &b));
        assert!(!proportionality_check(&(&a + &sc.omega_pi), &b));
        assert!(proportionality_check(&a, &a.scale(&rint(2))));
    }

    #[test]
    fn divisor_text() {
        assert_eq!(FmDivisor::new(2, -1).to_string(), "2*f - 1*s");
        assert_eq!(FmDivisor::new(0, 3).to_string(), "0*f + 3*s");
    }
}
