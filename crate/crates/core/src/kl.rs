//! Strata classes on the trigonal Hurwitz space and the elimination that
//! forces `ψ² = 0`.
//!
//! The ambient ring is `Q[ψ, ξ₁, ξ₂]` (degrees 1, 1, 2) truncated at degree
//! 3. The branch number `b = 2d + 2g − 2` is either a concrete rational or
//! the indeterminate `b` of [`RatFn`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{build_ring, from_poly, gen, Ring, RingElt, RingPresentation};
use crate::linalg::rank;
use crate::poly::{parse_poly, Poly};
use crate::ratfn::{split_params, RatFn};
use crate::scalar::{rint, Field, Rational};

pub const GENERATORS: [(&str, u32); 3] = [("psi", 1), ("xi1", 1), ("xi2", 2)];
const CAP: u32 = 3;

pub fn branch_number(d: i64, g: i64) -> i64 {
    2 * d + 2 * g - 2
}

/// `Q[ψ, ξ₁, ξ₂]` modulo some of the strata classes, with `b` fixed.
#[derive(Clone, Debug)]
pub struct BasicClassRing<F: Field> {
    pub b: F,
    pub ring: Ring<F>,
}

impl<F: Field> BasicClassRing<F> {
    pub fn free(b: F) -> Self {
        Self::with_relations(b, Vec::new()).expect("free ring")
    }

    pub fn with_relations(b: F, relations: Vec<Poly<F>>) -> Result<Self> {
        let ring = build_ring(RingPresentation::new(&GENERATORS, relations, CAP))?;
        Ok(BasicClassRing { b, ring })
    }

    pub fn psi(&self) -> RingElt<F> {
        gen(&self.ring, "psi").unwrap()
    }

    pub fn xi1(&self) -> RingElt<F> {
        gen(&self.ring, "xi1").unwrap()
    }

    pub fn xi2(&self) -> RingElt<F> {
        gen(&self.ring, "xi2").unwrap()
    }

    pub fn strata(&self) -> StrataClasses<F> {
        let b = self.b.clone();
        let c = |n: i64| F::from_i64(n);
        let (psi, xi1, xi2) = (self.psi(), self.xi1(), self.xi2());
        let psi2 = &psi * &psi;
        let xp = &xi1 * &psi;
        StrataClasses {
            s21: xi1.scale(&c(2)) - psi.scale(&b),
            s12: xi1.scale(&c(-3)) + psi.scale(&(b.clone() * (b.clone() + c(2)) / c(2))),
            s31: psi2.scale(&(c(2) * b.clone())) - xp.scale(&c(7)) + xi2.scale(&c(6)),
            s1121: psi2.scale(&-(b.clone() * (b.clone() + c(6)))) + xp.scale(&(c(2) * (b + c(12))))
                - xi2.scale(&c(24)),
        }
    }
}

/// The four strata classes `σ_{2¹}`, `σ_{1²}`, `σ_{3¹}`, `σ_{1¹2¹}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrataClasses<F: Field> {
    pub s21: RingElt<F>,
    pub s12: RingElt<F>,
    pub s31: RingElt<F>,
    pub s1121: RingElt<F>,
}

impl<F: Field> StrataClasses<F> {
    /// The classes of the three strata that are empty in degree 3.
    pub fn empty_in_degree_three(&self) -> [&RingElt<F>; 3] {
        [&self.s12, &self.s31, &self.s1121]
    }
}

/// Strata classes in the free ring for covers of degree `d` and genus `g`.
pub fn strata_classes(d: i64, g: i64) -> Result<StrataClasses<Rational>> {
    if d < 2 || g < 0 {
        return Err(Error::Invalid(format!("strata need d >= 2 and g >= 0, got d = {d}, g = {g}")));
    }
    Ok(BasicClassRing::free(rint(branch_number(d, g))).strata())
}

/// One identity of the elimination chain, `lhs = rhs` in the ring.
#[derive(Clone, Debug)]
pub struct Identity<F: Field> {
    pub name: &'static str,
    pub lhs: RingElt<F>,
    pub rhs: RingElt<F>,
}

#[derive(Clone, Debug)]
pub struct Derivation<F: Field> {
    pub d: i64,
    pub b: F,
    /// `Q[ψ, ξ₁, ξ₂]` modulo the three empty strata.
    pub quotient: BasicClassRing<F>,
    /// `ξ₁ = ⅙b(b+2)ψ`, `−bψ² + 2ξ₁ψ = 0`, `⅓(b²−b)ψ² = 0`, in this order,
    /// written in the free ring.
    pub identities: Vec<Identity<F>>,
    /// `⅓(b² − b)`.
    pub coefficient: F,
    pub psi_squared_in_ideal: bool,
    /// Whether `ψ²` already lies in the degree-2 part of `(σ_{1²})`.
    pub sigma12_alone_forces_psi_squared: bool,
    /// `σ_{2¹} = ⅓(b² − b)ψ` modulo the relations.
    pub sigma21: Identity<F>,
}

/// The elimination for trigonal covers of genus `g`.
pub fn eliminate_relations(g: i64) -> Result<Derivation<Rational>> {
    eliminate_relations_for_degree(3, g, false)
}

/// Same elimination for covers of degree `d`. The three strata are only
/// empty for `d = 3`; other degrees are refused unless `force` is set.
pub fn eliminate_relations_for_degree(d: i64, g: i64, force: bool) -> Result<Derivation<Rational>> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if d != 3 && !force {
        return Err(Error::Refused(format!(
            "the strata S_(1^2), S_(3^1), S_(1^1 2^1) are not empty in degree {d}; pass the override to impose them anyway"
        )));
    }
    if d < 2 {
        return Err(Error::Invalid(format!("degree {d} < 2")));
    }
    eliminate_with_b(d, rint(branch_number(d, g)))
}

/// The generic elimination, `b` an indeterminate.
pub fn eliminate_relations_symbolic() -> Result<Derivation<RatFn>> {
    eliminate_with_b(3, RatFn::param("b"))
}

pub fn eliminate_with_b<F: Field>(d: i64, b: F) -> Result<Derivation<F>> {
    let c = |n: i64| F::from_i64(n);
    let free = BasicClassRing::free(b.clone());
    let st = free.strata();
    let rels: Vec<Poly<F>> = st.empty_in_degree_three().iter().map(|x| x.to_poly()).collect();
    let quotient = BasicClassRing::with_relations(b.clone(), rels)?;
    let lift = |x: &RingElt<F>| from_poly(&quotient.ring, &x.to_poly()).expect("same generators");
    let (psi, xi1) = (quotient.psi(), quotient.xi1());

    // Degree 1: the reduced form of ξ₁ is a multiple of ψ.
    let xi1_nf = xi1.normal_form();
    let c_xi = xi1_nf.coeff(&[1, 0, 0]);
    if xi1_nf != psi.scale(&c_xi) {
        return Err(Error::Invalid(format!("xi1 does not reduce to a multiple of psi: {xi1_nf}")));
    }

    // Degree 2: ξ₂ cancels in 4σ_{3¹} + σ_{1¹2¹} = (b − 2)(−bψ² + 2ξ₁ψ).
    let bm2 = b.clone() - c(2);
    if bm2.is_zero() {
        return Err(Error::CoefficientVanishes);
    }
    let combo = (st.s31.scale(&c(4)) + &st.s1121).scale(&bm2.inv());
    if !(combo.coeff(&[0, 0, 1]).is_zero()) {
        return Err(Error::Invalid("xi2 does not cancel".into()));
    }
    if !lift(&combo).is_zero() {
        return Err(Error::Invalid(format!("{combo} does not vanish in the quotient")));
    }

    // Substituting ξ₁ = c·ψ leaves a multiple of ψ².
    let psi_free = free.psi();
    let subst = combo.substitute(&free.ring, &[("xi1", psi_free.scale(&c_xi))])?;
    let coefficient = subst.coeff(&[2, 0, 0]);
    if subst != (&psi_free * &psi_free).scale(&coefficient) {
        return Err(Error::Invalid(format!("substitution left {subst}")));
    }
    if coefficient.is_zero() {
        return Err(Error::CoefficientVanishes);
    }
    let psi_squared_in_ideal = (&psi * &psi).is_zero();

    let s21 = st.s21.substitute(&free.ring, &[("xi1", psi_free.scale(&c_xi))])?;
    let sigma21 = Identity { name: "sigma_2_1", lhs: st.s21.clone(), rhs: s21 };

    let identities = vec![
        Identity { name: "psi_xi", lhs: free.xi1(), rhs: psi_free.scale(&c_xi) },
        Identity { name: "latter_two", lhs: combo.clone(), rhs: zero_like(&free) },
        Identity {
            name: "psi_squared",
            lhs: (&psi_free * &psi_free).scale(&coefficient),
            rhs: zero_like(&free),
        },
    ];

    let only12 = BasicClassRing::with_relations(b.clone(), vec![st.s12.to_poly()])?;
    let sigma12_alone_forces_psi_squared = (&only12.psi() * &only12.psi()).is_zero();

    Ok(Derivation {
        d,
        b,
        quotient,
        identities,
        coefficient,
        psi_squared_in_ideal,
        sigma12_alone_forces_psi_squared,
        sigma21,
    })
}

fn zero_like<F: Field>(r: &BasicClassRing<F>) -> RingElt<F> {
    crate::graded::zero(&r.ring)
}

/// Eliminates `ξ₂` first: solves `σ_{3¹} = 0` for `ξ₂`, substitutes into
/// `σ_{1¹2¹}`, then adds `σ_{1²}`. Returns whether the degree-2 part of the
/// resulting ideal equals the one generated directly by the three strata.
pub fn order_independent<F: Field>(b: F) -> bool {
    let c = |n: i64| F::from_i64(n);
    let free = BasicClassRing::free(b);
    let st = free.strata();
    let (psi, xi1, xi2) = (free.psi(), free.xi1(), free.xi2());
    // 6ξ₂ = 7ξ₁ψ − 2bψ².
    let xi2_val = (&(&xi1 * &psi).scale(&c(7)) - &(&psi * &psi).scale(&(c(2) * free.b.clone()))).scale(&c(6).inv());
    let reduced = st.s1121.substitute(&free.ring, &[("xi2", xi2_val.clone())]).expect("xi2 is a generator");
    let direct = [(&st.s12 * &psi), (&st.s12 * &xi1), st.s31.clone(), st.s1121.clone()];
    let staged = [(&st.s12 * &psi), (&st.s12 * &xi1), reduced, &xi2 - &xi2_val];
    let rows = |xs: &[RingElt<F>]| xs.iter().map(|x| x.basis_coeffs(2)).collect::<Vec<_>>();
    let (a, s) = (rows(&direct), rows(&staged));
    let both: Vec<_> = a.iter().chain(s.iter()).cloned().collect();
    let r = rank(&a);
    r == rank(&s) && r == rank(&both)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCertificate {
    /// `None` in the symbolic mode.
    pub genus: Option<i64>,
    pub b: String,
    pub steps: Vec<Step>,
    pub assumptions: Vec<String>,
    pub conclusion: String,
}

pub const ASSUMPTIONS: [&str; 4] = [
    "A1: the Picard group A^1 of the trigonal Hurwitz space is freely generated by kappa1",
    "A2: the class [T_1] = sigma_2_1 of the triple ramification locus is nontrivial",
    "A3: the Chow ring of the trigonal Hurwitz space is generated by kappa1",
    "A4: the kernel of the pullback to the frame bundle is generated by c_2(V), a multiple of kappa1^2",
];

pub const CONCLUSION: &str = "psi = c*kappa1 with c != 0, hence kappa1^2 = 0 and A*(H) = Q[kappa1]/(kappa1^2)";

const EMPTY_STRATA: [&str; 3] = ["empty_sigma_1_2", "empty_sigma_3_1", "empty_sigma_1_1_2_1"];

/// The certificate that `κ₁² = 0` for trigonal curves of genus `g`.
pub fn main_certificate(g: i64) -> Result<RelationCertificate> {
    let der = eliminate_relations(g)?;
    Ok(certificate_from(Some(g), &der))
}

pub fn main_certificate_symbolic() -> Result<RelationCertificate> {
    Ok(certificate_from(None, &eliminate_relations_symbolic()?))
}

fn certificate_from<F: Field>(genus: Option<i64>, der: &Derivation<F>) -> RelationCertificate {
    let free = BasicClassRing::free(der.b.clone());
    let st = free.strata();
    let mut steps: Vec<Step> = EMPTY_STRATA
        .iter()
        .zip(st.empty_in_degree_three())
        .map(|(n, x)| Step { name: n.to_string(), lhs: x.to_string(), rhs: "0".into(), provenance: "assumption".into() })
        .collect();
    for id in der.identities.iter().chain(std::iter::once(&der.sigma21)) {
        steps.push(Step {
            name: id.name.into(),
            lhs: id.lhs.to_string(),
            rhs: id.rhs.to_string(),
            provenance: "computed".into(),
        });
    }
    RelationCertificate {
        genus,
        b: der.b.to_string(),
        steps,
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        conclusion: CONCLUSION.into(),
    }
}

impl RelationCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The value of `⅓(b² − b)` recorded in the `sigma_2_1` step, when `b`
    /// is a number.
    pub fn final_coefficient(&self) -> Option<Rational> {
        let b: Rational = parse_poly::<Rational>(&self.b).ok()?.as_constant()?;
        Some((&b * &b - &b) / rint(3))
    }

    /// Re-checks every step: assumption steps must be the strata classes
    /// for the recorded `b`, computed steps must hold modulo the three
    /// strata, and the whole certificate must be reproduced exactly.
    pub fn verify(&self) -> Result<()> {
        match self.genus {
            Some(g) => {
                let b = rint(branch_number(3, g));
                if b.to_string() != self.b {
                    return Err(Error::Invalid(format!("b = {} does not match genus {g}", self.b)));
                }
                self.verify_steps(b, parse_poly::<Rational>)?;
                if main_certificate(g)? != *self {
                    return Err(Error::Invalid("certificate differs from the regenerated one".into()));
                }
            }
            None => {
                if self.b != "b" {
                    return Err(Error::Invalid(format!("symbolic certificate with b = {}", self.b)));
                }
                let names: Vec<&str> = GENERATORS.iter().map(|g| g.0).collect();
                self.verify_steps(RatFn::param("b"), |s| Ok(split_params(&parse_poly::<Rational>(s)?, &names)))?;
                if main_certificate_symbolic()? != *self {
                    return Err(Error::Invalid("certificate differs from the regenerated one".into()));
                }
            }
        }
        Ok(())
    }

    fn verify_steps<F: Field>(&self, b: F, parse: impl Fn(&str) -> Result<Poly<F>>) -> Result<()> {
        let free = BasicClassRing::free(b.clone());
        let st = free.strata();
        let rels: Vec<Poly<F>> = st.empty_in_degree_three().iter().map(|x| x.to_poly()).collect();
        let quotient = BasicClassRing::with_relations(b, rels)?;
        let mut seen = 0;
        for step in &self.steps {
            let lhs = parse(&step.lhs)?;
            let rhs = parse(&step.rhs)?;
            match step.provenance.as_str() {
                "assumption" => {
                    let i = EMPTY_STRATA
                        .iter()
                        .position(|n| *n == step.name)
                        .ok_or_else(|| Error::Invalid(format!("unknown assumption step {}", step.name)))?;
                    let expected = st.empty_in_degree_three()[i];
                    if from_poly(&free.ring, &lhs)? != *expected || !rhs.is_zero() {
                        return Err(Error::Invalid(format!("step {} is not the stratum class", step.name)));
                    }
                    seen |= 1 << i;
                }
                "computed" => {
                    let diff = from_poly(&quotient.ring, &(lhs - rhs))?;
                    if !diff.is_zero() {
                        return Err(Error::Invalid(format!("step {} does not hold: {diff}", step.name)));
                    }
                }
                p => return Err(Error::Invalid(format!("unknown provenance {p}"))),
            }
        }
        if seen != 0b111 {
            return Err(Error::Invalid("missing stratum assumptions".into()));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.genus {
            Some(g) => out.push_str(&format!("genus {g}, b = {}\n", self.b)),
            None => out.push_str("generic genus, b symbolic\n"),
        }
        for s in &self.steps {
            out.push_str(&format!("[{}] {}: {} = {}\n", s.provenance, s.name, s.lhs, s.rhs));
        }
        for a in &self.assumptions {
            out.push_str(&format!("assume {a}\n"));
        }
        out.push_str(&format!("conclusion: {}\n", self.conclusion));
        out
    }
}
