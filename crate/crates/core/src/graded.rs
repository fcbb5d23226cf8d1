//! Finitely presented graded commutative algebras, truncated at a degree cap.
//!
//! Each graded piece is handled by plain linear algebra: the ideal in degree
//! `d` is spanned by `relation × monomial` products, row reduction picks
//! pivots on the lex-smallest monomials, and the remaining monomials form the
//! basis of the quotient. Every [`RingElt`] is kept in that normal form.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{reduce_against, rref, Matrix};
use crate::poly::{fmt_monomial, fmt_sum, Monomial, Poly};
use crate::scalar::Field;

#[derive(Clone, Debug)]
pub struct RingPresentation<F: Field> {
    pub generators: Vec<(String, u32)>,
    pub relations: Vec<Poly<F>>,
    pub cap: u32,
}

impl<F: Field> RingPresentation<F> {
    pub fn new(generators: &[(&str, u32)], relations: Vec<Poly<F>>, cap: u32) -> Self {
        RingPresentation {
            generators: generators.iter().map(|(n, d)| (n.to_string(), *d)).collect(),
            relations,
            cap,
        }
    }
}

#[derive(Debug)]
struct Piece<F> {
    /// All monomials of this degree, ascending lex (first generator most
    /// significant).
    monomials: Vec<Monomial>,
    rows: Matrix<F>,
    pivots: Vec<usize>,
    basis: Vec<usize>,
}

#[derive(Debug)]
pub struct RingContext<F: Field> {
    names: Vec<String>,
    degrees: Vec<u32>,
    cap: u32,
    relations: Vec<Poly<F>>,
    pieces: Vec<Piece<F>>,
    index: HashMap<Monomial, (u32, usize)>,
}

pub type Ring<F> = Arc<RingContext<F>>;

fn monomials_of_degree(degrees: &[u32], d: u32) -> Vec<Monomial> {
    fn rec(degrees: &[u32], i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left / degrees[i] {
            cur[i] = e;
            rec(degrees, i + 1, left - e * degrees[i], cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; degrees.len()];
    rec(degrees, 0, d, &mut cur, &mut out);
    out.sort();
    out
}

/// Validates the presentation and fixes a basis of every graded piece.
pub fn build_ring<F: Field>(p: RingPresentation<F>) -> Result<Ring<F>> {
    let names: Vec<String> = p.generators.iter().map(|(n, _)| n.clone()).collect();
    let degrees: Vec<u32> = p.generators.iter().map(|(_, d)| *d).collect();
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::Invalid(format!("duplicate generator `{n}`")));
        }
        if degrees[i] == 0 {
            return Err(Error::Invalid(format!("generator `{n}` must have positive degree")));
        }
    }
    let mut relations = Vec::new();
    let mut rel_by_degree: Vec<Vec<Poly<F>>> = vec![Vec::new(); p.cap as usize + 1];
    for r in p.relations {
        if r.is_zero() {
            continue;
        }
        if let Some(v) = r.used_vars().into_iter().find(|v| !names.contains(v)) {
            return Err(Error::UnknownGenerator(v));
        }
        let r = r.with_vars(&names)?;
        let d = r.homogeneous_degree(&degrees).ok_or_else(|| Error::Inhomogeneous(r.to_string()))?;
        if d > p.cap {
            return Err(Error::BeyondCap { degree: d, cap: p.cap });
        }
        rel_by_degree[d as usize].push(r.clone());
        relations.push(r);
    }

    let mut pieces = Vec::new();
    let mut index = HashMap::new();
    for d in 0..=p.cap {
        let monomials = monomials_of_degree(&degrees, d);
        let local: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Matrix<F> = Vec::new();
        for e in 0..=d {
            for r in &rel_by_degree[e as usize] {
                for m in monomials_of_degree(&degrees, d - e) {
                    let mut row = vec![F::zero(); monomials.len()];
                    for (exp, c) in r.terms() {
                        let prod: Monomial = exp.iter().zip(&m).map(|(a, b)| a + b).collect();
                        row[local[&prod]] = c.clone();
                    }
                    rows.push(row);
                }
            }
        }
        let pivots = rref(&mut rows);
        let basis = (0..monomials.len()).filter(|i| !pivots.contains(i)).collect();
        for (i, m) in monomials.iter().enumerate() {
            index.insert(m.clone(), (d, i));
        }
        pieces.push(Piece { monomials, rows, pivots, basis });
    }
    Ok(Arc::new(RingContext { names, degrees, cap: p.cap, relations, pieces, index }))
}

impl<F: Field> RingContext<F> {
    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn relations(&self) -> &[Poly<F>] {
        &self.relations
    }

    pub fn graded_dim(&self, d: u32) -> Result<usize> {
        if d > self.cap {
            return Err(Error::BeyondCap { degree: d, cap: self.cap });
        }
        Ok(self.pieces[d as usize].basis.len())
    }

    /// Basis monomials of the degree-`d` piece as text.
    pub fn basis_monomials(&self, d: u32) -> Result<Vec<String>> {
        self.graded_dim(d)?;
        let piece = &self.pieces[d as usize];
        Ok(piece.basis.iter().map(|&i| self.monomial_text(&piece.monomials[i])).collect())
    }

    fn monomial_text(&self, m: &Monomial) -> String {
        fmt_monomial(&self.names, m)
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct RingElt<F: Field> {
    ring: Ring<F>,
    comps: Vec<Vec<F>>,
}

pub fn zero<F: Field>(ring: &Ring<F>) -> RingElt<F> {
    let comps = ring.pieces.iter().map(|p| vec![F::zero(); p.monomials.len()]).collect();
    RingElt { ring: ring.clone(), comps }
}

pub fn constant<F: Field>(ring: &Ring<F>, c: F) -> RingElt<F> {
    let mut x = zero(ring);
    x.comps[0][0] = c;
    x.reduce();
    x
}

pub fn one<F: Field>(ring: &Ring<F>) -> RingElt<F> {
    constant(ring, F::one())
}

pub fn gen<F: Field>(ring: &Ring<F>, name: &str) -> Result<RingElt<F>> {
    let i = ring.generator_index(name)?;
    let mut m = vec![0; ring.names.len()];
    m[i] = 1;
    Ok(monomial(ring, &m, F::one()))
}

fn monomial<F: Field>(ring: &Ring<F>, m: &[u32], c: F) -> RingElt<F> {
    let mut x = zero(ring);
    if let Some(&(d, i)) = ring.index.get(m) {
        x.comps[d as usize][i] = c;
        x.reduce();
    }
    x
}

/// Interprets a polynomial in the generator names; terms beyond the cap are
/// dropped.
pub fn from_poly<F: Field>(ring: &Ring<F>, p: &Poly<F>) -> Result<RingElt<F>> {
    if let Some(v) = p.used_vars().into_iter().find(|v| !ring.names.contains(v)) {
        return Err(Error::UnknownGenerator(v));
    }
    let p = p.with_vars(&ring.names)?;
    let mut x = zero(ring);
    for (e, c) in p.terms() {
        if let Some(&(d, i)) = ring.index.get(e) {
            x.comps[d as usize][i] = x.comps[d as usize][i].clone() + c.clone();
        }
    }
    x.reduce();
    Ok(x)
}

/// Parses text in the generator names.
pub fn parse_elt<F: Field>(ring: &Ring<F>, s: &str) -> Result<RingElt<F>> {
    from_poly(ring, &crate::poly::parse_poly(s)?)
}

impl<F: Field> RingElt<F> {
    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn same_ring(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &o.ring)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.same_ring(o) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn reduce(&mut self) {
        for (d, v) in self.comps.iter_mut().enumerate() {
            let piece = &self.ring.pieces[d];
            if !piece.rows.is_empty() {
                reduce_against(v, &piece.rows, &piece.pivots);
            }
        }
    }

    /// Elements are always stored reduced, so this is a copy; kept for
    /// callers that want to be explicit.
    pub fn normal_form(&self) -> Self {
        self.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|v| v.iter().all(|c| c.is_zero()))
    }

    /// Homogeneous part of degree `d` (zero beyond the cap).
    pub fn component(&self, d: u32) -> Self {
        let mut x = zero(&self.ring);
        if d <= self.ring.cap {
            x.comps[d as usize] = self.comps[d as usize].clone();
        }
        x
    }

    pub fn constant_term(&self) -> F {
        self.comps[0][0].clone()
    }

    /// The unique degree when the element is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut found = None;
        for (d, v) in self.comps.iter().enumerate() {
            if v.iter().any(|c| !c.is_zero()) {
                if found.is_some() {
                    return None;
                }
                found = Some(d as u32);
            }
        }
        found
    }

    /// Coefficients on the basis of the degree-`d` piece.
    pub fn basis_coeffs(&self, d: u32) -> Vec<F> {
        if d > self.ring.cap {
            return Vec::new();
        }
        let piece = &self.ring.pieces[d as usize];
        piece.basis.iter().map(|&i| self.comps[d as usize][i].clone()).collect()
    }

    /// Coefficient of a basis monomial given by its exponent vector.
    pub fn coeff(&self, m: &[u32]) -> F {
        match self.ring.index.get(m) {
            Some(&(d, i)) => self.comps[d as usize][i].clone(),
            None => F::zero(),
        }
    }

    /// Terms `(exponents, coefficient)` of the normal form.
    pub fn terms(&self) -> Vec<(Monomial, F)> {
        let mut out = Vec::new();
        for (d, v) in self.comps.iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out.push((self.ring.pieces[d].monomials[i].clone(), c.clone()));
                }
            }
        }
        out
    }

    pub fn to_poly(&self) -> Poly<F> {
        let names: Vec<&str> = self.ring.names.iter().map(|s| s.as_str()).collect();
        Poly::from_terms(&names, self.terms())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut x = self.clone();
        for v in x.comps.iter_mut() {
            for a in v.iter_mut() {
                *a = a.clone() * c.clone();
            }
        }
        x
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut x = self.clone();
        for (v, w) in x.comps.iter_mut().zip(&o.comps) {
            for (a, b) in v.iter_mut().zip(w) {
                if !b.is_zero() {
                    *a = a.clone() + b.clone();
                }
            }
        }
        Ok(x)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let ring = &self.ring;
        let mut x = zero(ring);
        for (da, va) in self.comps.iter().enumerate() {
            for (ia, ca) in va.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                let ma = &ring.pieces[da].monomials[ia];
                for (db, vb) in o.comps.iter().enumerate().take(ring.cap as usize + 1 - da) {
                    for (ib, cb) in vb.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let mb = &ring.pieces[db].monomials[ib];
                        let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                        let (d, i) = ring.index[&m];
                        x.comps[d as usize][i] = x.comps[d as usize][i].clone() + ca.clone() * cb.clone();
                    }
                }
            }
        }
        x.reduce();
        Ok(x)
    }

    /// Ring map sending the `i`-th generator to `images[i]` and each
    /// coefficient through `coeff`. The images must respect degrees for the
    /// result to be meaningful; this is not checked.
    pub fn map<G: Field>(&self, images: &[RingElt<G>], coeff: impl Fn(&F) -> G) -> Result<RingElt<G>> {
        if images.len() != self.ring.names.len() {
            return Err(Error::Arity(format!("expected {} images", self.ring.names.len())));
        }
        let target = images.first().map(|x| x.ring.clone());
        let target = match target {
            Some(t) => t,
            None => return Err(Error::Arity("ring without generators".into())),
        };
        let mut acc = zero(&target);
        for (m, c) in self.terms() {
            let mut t = constant(&target, coeff(&c));
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.try_mul(&images[i].pow(e))?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Same-coefficient substitution of named generators; the others map to
    /// the generator of the same name in `target`.
    pub fn substitute(&self, target: &Ring<F>, subs: &[(&str, RingElt<F>)]) -> Result<RingElt<F>> {
        let mut images = Vec::new();
        for n in &self.ring.names {
            match subs.iter().find(|(s, _)| s == n) {
                Some((_, v)) => images.push(v.clone()),
                None => images.push(gen(target, n)?),
            }
        }
        self.map(&images, |c| c.clone())
    }
}

impl<F: Field> PartialEq for RingElt<F> {
    fn eq(&self, o: &Self) -> bool {
        self.same_ring(o) && self.comps == o.comps
    }
}

impl<F: Field> fmt::Display for RingElt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (d, v) in self.comps.iter().enumerate().rev() {
            for (i, c) in v.iter().enumerate().rev() {
                if !c.is_zero() {
                    terms.push((self.ring.monomial_text(&self.ring.pieces[d].monomials[i]), c.clone()));
                }
            }
        }
        fmt_sum(f, &terms)
    }
}

impl<'a, F: Field> Add<&'a RingElt<F>> for &'a RingElt<F> {
    type Output = RingElt<F>;
    fn add(self, o: &RingElt<F>) -> RingElt<F> {
        self.try_add(o).expect("ring mismatch")
    }
}

impl<'a, F: Field> Sub<&'a RingElt<F>> for &'a RingElt<F> {
    type Output = RingElt<F>;
    fn sub(self, o: &RingElt<F>) -> RingElt<F> {
        self.try_add(&-o).expect("ring mismatch")
    }
}

impl<'a, F: Field> Mul<&'a RingElt<F>> for &'a RingElt<F> {
    type Output = RingElt<F>;
    fn mul(self, o: &RingElt<F>) -> RingElt<F> {
        self.try_mul(o).expect("ring mismatch")
    }
}

impl<F: Field> Neg for &RingElt<F> {
    type Output = RingElt<F>;
    fn neg(self) -> RingElt<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> Neg for RingElt<F> {
    type Output = RingElt<F>;
    fn neg(self) -> RingElt<F> {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr<RingElt<F>> for RingElt<F> {
            type Output = RingElt<F>;
            fn $m(self, o: RingElt<F>) -> RingElt<F> {
                (&self).$m(&o)
            }
        }
        impl<'a, F: Field> $tr<&'a RingElt<F>> for RingElt<F> {
            type Output = RingElt<F>;
            fn $m(self, o: &RingElt<F>) -> RingElt<F> {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
