//! Dense univariate polynomials, the workhorse for gcds, squarefree parts and
//! the dynamic-evaluation arithmetic in the curve laboratory.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Field;

/// Coefficients lowest power first, never with a trailing zero.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F> {
    c: Vec<F>,
}

impl<F: Field> UPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(a: F) -> Self {
        Self::new(vec![a])
    }

    /// The monomial `a·x^n`.
    pub fn monomial(a: F, n: usize) -> Self {
        let mut c = vec![F::zero(); n + 1];
        c[n] = a;
        Self::new(c)
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> F {
        self.c.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, a: &F) -> Self {
        Self::new(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + a.clone();
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv = d.lc().inv();
        let mut r = self.c.clone();
        let mut q = vec![F::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let a = r[i + dd].clone() * inv.clone();
            if a.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                r[i + j] = r[i + j].clone() - a.clone() * dc.clone();
            }
            q[i] = a;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient, `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Yun's algorithm: monic squarefree pairwise coprime `a_i` with
    /// `self = lc · Π a_i^i`. Returns `(a_i, i)` for the nonconstant factors,
    /// highest multiplicity first. Valid in characteristic 0 or above the
    /// degree.
    pub fn squarefree(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.deg0() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.deg0() > 0 {
            let a = b.gcd(&d);
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            if a.deg0() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out.reverse();
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.squarefree().iter().fold(Self::one(), |acc, (a, _)| &acc * a)
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree().iter().all(|(_, i)| *i == 1)
    }

    /// Coefficients of `x^n·self(1/x)` viewed with formal degree `n`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c: Vec<F> = (0..=n).map(|i| self.coeff(i)).collect();
        c.reverse();
        Self::new(c)
    }
}

impl<F: Field> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = super::Poly::from_upoly("x", self);
        write!(f, "{p}")
    }
}

impl<'a, F: Field> Add<&'a UPoly<F>> for &'a UPoly<F> {
    type Output = UPoly<F>;
    fn add(self, o: &UPoly<F>) -> UPoly<F> {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a, F: Field> Sub<&'a UPoly<F>> for &'a UPoly<F> {
    type Output = UPoly<F>;
    fn sub(self, o: &UPoly<F>) -> UPoly<F> {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a, F: Field> Mul<&'a UPoly<F>> for &'a UPoly<F> {
    type Output = UPoly<F>;
    fn mul(self, o: &UPoly<F>) -> UPoly<F> {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(c)
    }
}

impl<F: Field> Neg for &UPoly<F> {
    type Output = UPoly<F>;
    fn neg(self) -> UPoly<F> {
        UPoly::new(self.c.iter().map(|x| -x.clone()).collect())
    }
}
