//! Pushforward along the trivial fibration `X × P¹ → X` with a constant
//! section `σ`, the Grothendieck–Riemann–Roch computation that pins down `Z`,
//! the Thom–Porteous determinant, and the Maroni-stratum pipeline built from
//! them.
//!
//! On the total space `σ² = 0`, `T_π` has `c₁ = 2σ` so `td(T_π) = 1 + σ`,
//! and `π_*` reads off the coefficient of `σ`.

use serde::Serialize;

use crate::chern::{
    chern_character, from_chern_character, series_inverse, todd_line, twist_by_line, whitney_quotient, SheafClass,
};
use crate::error::{Error, Result};
use crate::graded::{self, build_ring, gen, Ring, RingElt, RingPresentation};
use crate::poly::Poly;
use crate::ratfn::RatFn;
use crate::scalar::{rint, Field, Rational};

/// A base ring together with the total space ring `base[σ]/(σ²)`.
#[derive(Clone, Debug)]
pub struct ProductRing<F: Field> {
    pub base: Ring<F>,
    pub total: Ring<F>,
}

impl<F: Field> ProductRing<F> {
    /// The total ring gets cap `base.cap + 1`.
    pub fn new(base: RingPresentation<F>) -> Result<Self> {
        if base.generators.iter().any(|(n, _)| n == "sigma") {
            return Err(Error::Invalid("`sigma` is reserved for the section".into()));
        }
        let mut gens = base.generators.clone();
        gens.push(("sigma".into(), 1));
        let sigma = Poly::<F>::var("sigma");
        let mut relations = base.relations.clone();
        relations.push(&sigma * &sigma);
        let total = RingPresentation { generators: gens, relations, cap: base.cap + 1 };
        Ok(ProductRing { base: build_ring(base)?, total: build_ring(total)? })
    }

    pub fn sigma(&self) -> RingElt<F> {
        gen(&self.total, "sigma").unwrap()
    }

    /// `π*` of a base class.
    pub fn pullback(&self, x: &RingElt<F>) -> RingElt<F> {
        let images: Vec<RingElt<F>> =
            self.base.generator_names().iter().map(|n| gen(&self.total, n).unwrap()).collect();
        if images.is_empty() {
            return graded::constant(&self.total, x.constant_term());
        }
        x.map(&images, |c| c.clone()).expect("matching generator count")
    }

    fn sigma_index(&self) -> usize {
        self.total.generator_names().len() - 1
    }

    fn split(&self, x: &RingElt<F>) -> (RingElt<F>, RingElt<F>) {
        let si = self.sigma_index();
        let names: Vec<&str> = self.base.generator_names().iter().map(|s| s.as_str()).collect();
        let mut parts = [Vec::new(), Vec::new()];
        for (e, c) in x.terms() {
            let k = e[si] as usize;
            debug_assert!(k <= 1, "σ² normal-forms to 0");
            parts[k].push((e[..si].to_vec(), c));
        }
        let [p0, p1] = parts;
        let lift = |t: Vec<(Vec<u32>, F)>| graded::from_poly(&self.base, &Poly::from_terms(&names, t)).unwrap();
        (lift(p0), lift(p1))
    }

    /// `π_*`: `π*β ↦ 0` and `σ·π*β ↦ β`.
    pub fn pushforward(&self, x: &RingElt<F>) -> RingElt<F> {
        self.split(x).1
    }

    /// Restriction to the section: `π*β ↦ β`, `σ ↦ 0` (the normal bundle
    /// of a constant section is trivial).
    pub fn restrict_to_section(&self, x: &RingElt<F>) -> RingElt<F> {
        self.split(x).0
    }

    pub fn restrict_class(&self, e: &SheafClass<F>) -> SheafClass<F> {
        SheafClass { rank: e.rank, chern: self.restrict_to_section(&e.chern) }
    }
}

/// `π_!e` with `ch(π_!e) = π_*(ch(e)·td(T_π))`, converted back to Chern
/// classes on the base.
pub fn grr_pushforward<F: Field>(pr: &ProductRing<F>, e: &SheafClass<F>) -> Result<SheafClass<F>> {
    if !std::sync::Arc::ptr_eq(e.ring(), &pr.total) {
        return Err(Error::RingMismatch);
    }
    let ch = chern_character(e, pr.total.cap())?;
    let td = todd_line(&pr.sigma().scale(&F::from_i64(2)));
    from_chern_character(&pr.pushforward(&(&ch * &td)))
}

/// `c₁ = −(g+2)σ + π*X`, `c₂ = σ·π*Y + π*Z`.
pub fn bundle_on_product<F: Field>(
    pr: &ProductRing<F>,
    g: i64,
    x: &RingElt<F>,
    y: &RingElt<F>,
    z: &RingElt<F>,
) -> SheafClass<F> {
    let sigma = pr.sigma();
    let c1 = &sigma.scale(&F::from_i64(-(g + 2))) + &pr.pullback(x);
    let c2 = &(&sigma * &pr.pullback(y)) + &pr.pullback(z);
    SheafClass { rank: 2, chern: &(&graded::one(&pr.total) + &c1) + &c2 }
}

fn xyz_ring(cap: u32) -> Result<ProductRing<Rational>> {
    ProductRing::new(RingPresentation::new(&[("X", 1), ("Y", 1), ("Z", 2)], vec![], cap))
}

#[derive(Clone, Debug)]
pub struct SolvedZ {
    pub g: i64,
    /// Degree-2 part of `π_*(ch(E)(1+σ))` in `X, Y, Z`; it must vanish.
    pub identity: RingElt<Rational>,
    /// Coefficient of `Z` in the identity.
    pub coefficient: Rational,
    /// `Z` in terms of `X` and `Y`.
    pub expression: RingElt<Rational>,
}

impl SolvedZ {
    /// The identity with `Z` replaced by the solution.
    pub fn back_substituted(&self) -> Result<RingElt<Rational>> {
        let ring = self.identity.ring().clone();
        self.identity.substitute(&ring, &[("Z", self.expression.clone())])
    }
}

pub fn solve_z(g: i64) -> Result<SolvedZ> {
    solve_z_with_cap(g, 3)
}

/// As [`solve_z`] with an explicit base cap (at least 2).
pub fn solve_z_with_cap(g: i64, cap: u32) -> Result<SolvedZ> {
    if cap < 2 {
        return Err(Error::BeyondCap { degree: 2, cap });
    }
    let pr = xyz_ring(cap)?;
    let b = |n| gen(&pr.base, n).unwrap();
    let e = bundle_on_product(&pr, g, &b("X"), &b("Y"), &b("Z"));
    let ch = chern_character(&e, 3)?;
    let td = todd_line(&pr.sigma().scale(&rint(2)));
    let identity = pr.pushforward(&(&ch * &td)).component(2);
    let coefficient = identity.coeff(&[0, 0, 1]);
    if coefficient == rint(0) {
        return Err(Error::CoefficientVanishes);
    }
    let rest = &identity - &b("Z").scale(&coefficient);
    let expression = rest.scale(&(-rint(1) / coefficient.clone()));
    Ok(SolvedZ { g, identity, coefficient, expression })
}

/// A single certificate line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub step: String,
    pub identity: String,
    pub assumptions: Vec<String>,
}

pub fn grr_fragments(g: i64) -> Result<Vec<Fragment>> {
    let z = solve_z(g)?;
    Ok(vec![
        Fragment {
            step: "grr_degree_2".into(),
            identity: format!("0 = {}", z.identity),
            assumptions: vec![
                "the degree-3 Todd coefficient vanishes, so the left side is 0".into(),
                "c1(E) = -(g+2)*sigma + X, c2(E) = sigma*Y + Z".into(),
            ],
        },
        Fragment {
            step: "solve_Z".into(),
            identity: format!("Z = {}", z.expression),
            assumptions: vec![format!("coefficient of Z is {} (nonzero)", z.coefficient)],
        },
    ])
}

/// `det[c_{f−r+j−i}]` of size `(e−r)`, with `c_k = 0` for `k < 0`.
pub fn porteous_class<F: Field>(c: &RingElt<F>, e: i64, f: i64, r: i64) -> Result<RingElt<F>> {
    if r < 0 || e < r || f < r {
        return Err(Error::Invalid(format!("need e, f ≥ r ≥ 0, got e={e}, f={f}, r={r}")));
    }
    let n = (e - r) as usize;
    let ring = c.ring();
    let entry = |i: usize, j: usize| {
        let k = f - r + j as i64 - i as i64;
        if k < 0 {
            graded::zero(ring)
        } else {
            c.component(k as u32)
        }
    };
    let m: Vec<Vec<RingElt<F>>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    Ok(det_laplace(ring, &m))
}

fn det_laplace<F: Field>(ring: &Ring<F>, m: &[Vec<RingElt<F>>]) -> RingElt<F> {
    let n = m.len();
    if n == 0 {
        return graded::one(ring);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = graded::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RingElt<F>>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let t = &m[0][j] * &det_laplace(ring, &minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Result of the Maroni pipeline for one `(g, n)`.
#[derive(Clone, Debug)]
pub struct MaroniClass {
    pub g: i64,
    pub n: i64,
    /// The twist `k` applied before pushing forward.
    pub k: i64,
    pub source_rank: i64,
    pub class: RingElt<RatFn>,
    pub expected_degree: u32,
    /// Whether `n` respects the bound `n ≤ (g+2)/3`.
    pub admissible: bool,
}

impl MaroniClass {
    /// Coefficient of `κ₁^{n−1}` when the class is a single such monomial.
    pub fn monomial_coefficient(&self) -> Option<RatFn> {
        let terms = self.class.terms();
        if terms.len() != 1 {
            return None;
        }
        let (e, c) = &terms[0];
        (e[0] == self.expected_degree).then(|| c.clone())
    }
}

/// Class of the locus of Maroni invariant at least `n`, modelled in
/// `Q(x₀, y₀)[κ₁]` with `X = x₀κ₁`, `Y = y₀κ₁` and `Z` from [`solve_z`].
pub fn maroni_stratum_class(g: i64, n: i64) -> Result<MaroniClass> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if n < 0 || (n - g).rem_euclid(2) != 0 {
        return Err(Error::Parity { g, n });
    }
    let admissible = n <= (g + 2) / 3;
    let expected_degree = (n - 1).max(0) as u32;
    let base_pres = RingPresentation::<RatFn>::new(&[("kappa1", 1)], vec![], expected_degree.max(1));
    let pr = ProductRing::new(base_pres)?;
    if n <= 1 {
        return Ok(MaroniClass {
            g,
            n,
            k: 0,
            source_rank: 0,
            class: graded::one(&pr.base),
            expected_degree,
            admissible,
        });
    }

    let kappa = gen(&pr.base, "kappa1").unwrap();
    let x = kappa.scale(&RatFn::param("x0"));
    let y = kappa.scale(&RatFn::param("y0"));
    let solved = solve_z(g)?;
    let lift = |q: &Rational| RatFn::constant(q.clone());
    let z = solved.expression.map(&[x.clone(), y.clone(), graded::zero(&pr.base)], lift)?;
    let e = bundle_on_product(&pr, g, &x, &y, &z);

    let sigma = pr.sigma();
    let shift = (g + 2 + 1) / 2;
    let f_bundle = twist_by_line(&e, &sigma.scale(&RatFn::from_i64(shift)))?;
    let (k, source_rank) = if g % 2 == 0 { ((n - 2) / 2, n) } else { ((n - 3) / 2, n) };
    let twisted = twist_by_line(&f_bundle, &sigma.scale(&RatFn::from_i64(k)))?;

    let source = grr_pushforward(&pr, &twisted)?;
    if source.rank != source_rank {
        return Err(Error::Rank(format!("pushforward has rank {}, expected {source_rank}", source.rank)));
    }
    let target = pr.restrict_class(&twisted);
    let virt = whitney_quotient(&target, &source)?;
    debug_assert!(series_inverse(&source.chern).is_ok());
    let class = porteous_class(&virt.chern, source.rank, target.rank, 1)?;
    Ok(MaroniClass { g, n, k, source_rank, class, expected_degree, admissible })
}
