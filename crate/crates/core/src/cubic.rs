//! Squarefree decomposition of polynomials and the covariants of a binary
//! cubic `c3·u³ + c2·u²v + c1·uv² + c0·v³` whose coefficients are themselves
//! polynomials in base variables.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Field;

/// Monic, squarefree, pairwise coprime factors with multiplicities, highest
/// multiplicity first. A nonzero constant has the empty decomposition.
pub fn squarefree_decompose<F: Field>(f: &Poly<F>) -> Result<Vec<(Poly<F>, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (var, u) = f.as_univariate()?;
    Ok(u.squarefree().into_iter().map(|(a, i)| (Poly::from_upoly(&var, &a), i)).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryCubic<F: Field> {
    pub c3: Poly<F>,
    pub c2: Poly<F>,
    pub c1: Poly<F>,
    pub c0: Poly<F>,
}

impl<F: Field> BinaryCubic<F> {
    pub fn new(c3: Poly<F>, c2: Poly<F>, c1: Poly<F>, c0: Poly<F>) -> Result<Self> {
        if c3.is_zero() && c2.is_zero() && c1.is_zero() && c0.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(BinaryCubic { c3, c2, c1, c0 })
    }

    pub fn from_i64(c: [i64; 4]) -> Result<Self> {
        let [a, b, c, d] = c.map(Poly::from_i64);
        Self::new(a, b, c, d)
    }

    /// The dehomogenised cubic `c3·y³ + c2·y² + c1·y + c0` in the variable `y`.
    pub fn in_variable(&self, y: &str) -> Poly<F> {
        let yv = Poly::var(y);
        let mut acc = self.c0.clone();
        acc = acc + &self.c1 * &yv;
        acc = acc + &self.c2 * &yv.pow(2);
        acc + &self.c3 * &yv.pow(3)
    }
}

/// `18·c3c2c1c0 − 4·c2³c0 + c2²c1² − 4·c3c1³ − 27·c3²c0²`.
pub fn cubic_discriminant<F: Field>(c: &BinaryCubic<F>) -> Poly<F> {
    let BinaryCubic { c3, c2, c1, c0 } = c;
    let k = |n: i64| Poly::<F>::from_i64(n);
    let t1 = k(18) * c3 * c2 * c1 * c0;
    let t2 = k(4) * &c2.pow(3) * c0;
    let t3 = c2.pow(2) * &c1.pow(2);
    let t4 = k(4) * c3 * &c1.pow(3);
    let t5 = k(27) * &c3.pow(2) * &c0.pow(2);
    t1 - t2 + t3 - t4 - t5
}

/// `(c2² − 3c3c1, c1c2 − 9c3c0, c1² − 3c2c0)`: all three vanish exactly when
/// the cubic is the cube of a linear form (away from the zero cubic).
pub fn cubic_triple_root_conditions<F: Field>(c: &BinaryCubic<F>) -> (Poly<F>, Poly<F>, Poly<F>) {
    let BinaryCubic { c3, c2, c1, c0 } = c;
    let k = |n: i64| Poly::<F>::from_i64(n);
    let p1 = c2.pow(2) - k(3) * c3 * c1;
    let p2 = c1 * c2 - k(9) * c3 * c0;
    let p3 = c1.pow(2) - k(3) * c2 * c0;
    (p1, p2, p3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, resultant};
    use crate::scalar::Rational;

    type P = Poly<Rational>;

    fn p(s: &str) -> P {
        parse_poly(s).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let d = squarefree_decompose(&p("x^3 - x^2")).unwrap();
        assert_eq!(d, vec![(p("x"), 2), (p("x - 1"), 1)]);
        let d = squarefree_decompose(&p("x^2 + 1")).unwrap();
        assert_eq!(d, vec![(p("x^2 + 1"), 1)]);
        let d = squarefree_decompose(&p("(x^2 - 1)^2*(x + 2)")).unwrap();
        assert_eq!(d, vec![(p("x^2 - 1"), 2), (p("x + 2"), 1)]);
        assert_eq!(squarefree_decompose(&P::zero()).unwrap_err().to_string(), "zero input");
        assert!(matches!(squarefree_decompose(&p("x*y")), Err(Error::Arity(_))));
    }

    #[test]
    fn discriminant_examples() {
        let d = |c| cubic_discriminant(&BinaryCubic::<Rational>::from_i64(c).unwrap());
        assert_eq!(d([1, 0, -1, 0]), P::from_i64(4));
        assert_eq!(d([1, 0, 0, 0]), P::zero());
        assert_eq!(d([1, 0, -3, 2]), P::zero());
    }

    #[test]
    fn triple_root_examples() {
        let t = |c| cubic_triple_root_conditions(&BinaryCubic::<Rational>::from_i64(c).unwrap());
        assert_eq!(t([1, -3, 3, -1]), (P::zero(), P::zero(), P::zero()));
        assert_eq!(t([1, 0, -3, 2]).0, P::from_i64(9));
        assert_eq!(t([0, 1, 0, 0]).0, P::from_i64(1));
    }

    #[test]
    fn discriminant_against_resultant() {
        let c = BinaryCubic::new(p("a"), p("b"), p("c"), p("d")).unwrap();
        let f = c.in_variable("y");
        let r = resultant(&f, &f.derivative("y"), "y").unwrap();
        assert_eq!(r, -(p("a") * cubic_discriminant(&c)));
    }

    #[test]
    fn cube_has_vanishing_conditions() {
        // (a u + b v)^3 = a^3 u^3 + 3a^2b u^2v + 3ab^2 uv^2 + b^3 v^3
        let c = BinaryCubic::new(p("a^3"), p("3*a^2*b"), p("3*a*b^2"), p("b^3")).unwrap();
        let (p1, p2, p3) = cubic_triple_root_conditions(&c);
        assert!(p1.is_zero() && p2.is_zero() && p3.is_zero());
    }

    #[test]
    fn syzygy_between_conditions() {
        let c = BinaryCubic::new(p("a"), p("b"), p("c"), p("d")).unwrap();
        let (p1, p2, p3) = cubic_triple_root_conditions(&c);
        let s = &c.c1 * &p1 - &c.c2 * &p2 + P::from_i64(3) * &c.c3 * &p3;
        assert!(s.is_zero());
    }
}
