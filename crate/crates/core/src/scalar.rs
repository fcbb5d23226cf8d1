//! Coefficient fields.
//!
//! Everything in the crate is generic over [`Field`], a thin layer on top of
//! the `num-traits` arithmetic traits. Three families implement it:
//!
//! - [`Rational`]: arbitrary precision rationals (the default everywhere),
//! - [`Fp`]: prime fields with a compile-time modulus, used for fast
//!   experiments whose results must agree with the rational ones,
//! - [`crate::RatFn`]: rational functions over Q in named parameters, used
//!   when a constant of the theory is kept symbolic.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// An exact field of coefficients.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Image of a rational number, `None` when the denominator is not
    /// invertible in the field.
    fn from_rational(q: &Rational) -> Option<Self>;

    /// 0 for fields of characteristic zero.
    fn characteristic() -> u64;

    /// The value as a machine integer, when it is one.
    fn as_i64(&self) -> Option<i64>;

    /// Whether the printed form starts with a minus sign that can be pulled
    /// out of a sum.
    fn is_negative(&self) -> bool {
        false
    }

    /// Whether the printed form must be parenthesised when it multiplies a
    /// monomial.
    fn needs_parens(&self) -> bool {
        false
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Field for Rational {
    fn from_i64(n: i64) -> Self {
        rint(n)
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }

    fn characteristic() -> u64 {
        0
    }

    fn as_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Element of the prime field `F_P`.
///
/// The modulus is a compile-time constant and must be a prime larger than 3;
/// [`Fp::characteristic`] checks this at first use.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const CHECK: () = assert!(P > 3 && P < (1 << 62), "modulus out of range");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        let r = v.rem_euclid(P as i64);
        Fp(r as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn reduce_bigint(n: &BigInt) -> Self {
        let m = BigInt::from(P);
        let r = n.mod_floor(&m);
        Fp(r.to_u64().expect("reduced value fits"))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero in F_{P}");
        self * o.pow(P - 2)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        let d = Self::reduce_bigint(q.denom());
        if d.is_zero() {
            return None;
        }
        Some(Self::reduce_bigint(q.numer()) / d)
    }

    fn characteristic() -> u64 {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        P
    }

    fn as_i64(&self) -> Option<i64> {
        Some(self.0 as i64)
    }
}

/// Deterministic primality test for 64-bit moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
