//! Rational functions over Q in named parameters.
//!
//! Used as a coefficient field wherever a constant is kept symbolic: the
//! branch count `b`, the unknown multiple `μ` of the discriminant divisor,
//! and the proportionality scalars between the base classes and `κ₁`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::scalar::{Field, Rational};

type QPoly = Poly<Rational>;

#[derive(Clone, Debug)]
pub struct RatFn {
    num: QPoly,
    den: QPoly,
}

impl RatFn {
    pub fn param(name: &str) -> Self {
        RatFn { num: Poly::var(name), den: Poly::one() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(q: Rational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    /// Builds `num/den` in lowest terms as far as cheaply possible.
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        if let Some(q) = num.div_exact(&den) {
            return Self::from_poly(q);
        }
        let (mut num, mut den) = (num, den);
        let mut used = num.used_vars();
        for v in den.used_vars() {
            if !used.contains(&v) {
                used.push(v);
            }
        }
        if used.len() == 1 {
            let v = &used[0];
            let a = num.to_upoly(v).expect("univariate");
            let b = den.to_upoly(v).expect("univariate");
            let g = a.gcd(&b);
            if g.deg0() > 0 {
                num = Poly::from_upoly(v, &a.div_exact(&g).unwrap());
                den = Poly::from_upoly(v, &b.div_exact(&g).unwrap());
            }
        }
        let lc = den.lex_leading().map(|(_, c)| c.clone()).unwrap();
        let inv = Rational::one() / lc;
        RatFn { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// Specialises parameters to rational values.
    pub fn eval(&self, values: &[(&str, Rational)]) -> Option<Rational> {
        let n = self.num.eval_all(values).ok()?;
        let d = self.den.eval_all(values).ok()?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }
}

/// Re-reads a polynomial over Q as a polynomial in `gens` whose
/// coefficients are polynomials in the remaining variables.
pub fn split_params(p: &QPoly, gens: &[&str]) -> Poly<RatFn> {
    let vars = p.vars().to_vec();
    let gi: Vec<Option<usize>> = vars.iter().map(|v| gens.iter().position(|g| g == v)).collect();
    let mut out = Poly::zero_in(gens);
    for (e, c) in p.terms() {
        let mut ge = vec![0; gens.len()];
        let mut coeff = Poly::constant(c.clone());
        for (i, &x) in e.iter().enumerate() {
            match gi[i] {
                Some(j) => ge[j] = x,
                None if x > 0 => coeff = coeff * Poly::var(&vars[i]).pow(x),
                None => {}
            }
        }
        out = out + Poly::from_terms(gens, [(ge, RatFn::from_poly(coeff))]);
    }
    out
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_one = self.den.as_constant().is_some_and(|c| c.is_one());
        if den_one {
            write!(f, "{}", self.num)
        } else {
            let wrap = |p: &QPoly| {
                if p.num_terms() > 1 || p.as_constant().is_none() && p.terms().next().is_some_and(|(_, c)| *c != Rational::one()) {
                    format!("({p})")
                } else {
                    p.to_string()
                }
            };
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl PartialEq for RatFn {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Zero for RatFn {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFn {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl Add for RatFn {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return RatFn::new(&self.num + &o.num, self.den);
        }
        RatFn::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for RatFn {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for RatFn {
    type Output = Self;
    fn neg(self) -> Self {
        RatFn { num: -self.num, den: self.den }
    }
}

impl Mul for RatFn {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for RatFn {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFn::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Field for RatFn {
    fn from_i64(n: i64) -> Self {
        Self::from_poly(Poly::from_i64(n))
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(Self::constant(q.clone()))
    }

    fn characteristic() -> u64 {
        0
    }

    fn as_i64(&self) -> Option<i64> {
        self.as_rational().and_then(|q| q.as_i64())
    }

    fn is_negative(&self) -> bool {
        let den_one = self.den.as_constant().is_some_and(|c| c.is_one());
        den_one && self.num.num_terms() == 1 && self.num.terms().next().is_some_and(|(_, c)| Field::is_negative(c))
    }

    fn needs_parens(&self) -> bool {
        let den_one = self.den.as_constant().is_some_and(|c| c.is_one());
        !den_one || self.num.num_terms() > 1
    }
}
