//! Relative and "fat" jet bundles of `O(C)` on `F_m`, the kernel bundles of
//! the evaluation maps, projective bundles over `F_m`, and the divisor
//! classes of the linear subbundles cut out by jet conditions.
//!
//! Divisor classes are recomputed from the exact sequences: if `W' ⊂ W` has
//! line-bundle quotient `L`, then `P(W') ⊂ P(W)` is the zero locus of
//! `O(−1) → W → L`, so `[P(W')] = h + c₁(L)`. Note that this makes the node
//! divisor `h + C + π*ω_{P¹}` and the triple-ramification divisor
//! `h + C + 2ω_π`.

use std::fmt;

use num_traits::{One, Zero};

use crate::chern::{segre, whitney_quotient, SheafClass};
use crate::error::{Error, Result};
use crate::graded::{self, build_ring, gen, Ring, RingElt, RingPresentation};
use crate::hirzebruch::{
    fm_relations, h0_line_bundle, structure_classes, trigonal_class_data, FmDivisor, FmRing, StructureClasses,
    TrigonalClassData,
};
use crate::linalg::rank;
use crate::poly::Poly;
use crate::ratfn::RatFn;
use crate::scalar::{rint, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetKind {
    /// `J^n_π(O(C))`, jets along the ruling lines, `1 ≤ n ≤ 4`.
    Rel(u32),
    /// First-order jets on the surface (rank 3).
    Fat3,
    /// Singular and tangent to the ruling to order 3 (rank 4).
    Ram4,
}

/// Everything about `F_m` and the curve class needed for a given genus.
#[derive(Clone, Debug)]
pub struct JetContext {
    pub g: i64,
    pub data: TrigonalClassData,
    pub fm: FmRing,
    pub sc: StructureClasses,
}

impl JetContext {
    pub fn new(g: i64) -> Result<Self> {
        let data = trigonal_class_data(g)?;
        Ok(JetContext { g, fm: FmRing::new(data.m), sc: structure_classes(data.m), data })
    }

    fn line(&self, d: &FmDivisor) -> SheafClass<Rational> {
        SheafClass::line(&self.fm.divisor(d))
    }

    /// `h⁰(O(C)) = N + 1`.
    pub fn sections(&self) -> i64 {
        h0_line_bundle(self.data.m, self.data.k, 3)
    }

    fn rel_factor(&self, i: i64) -> FmDivisor {
        &self.data.c + &self.sc.omega_pi.scale(&rint(i))
    }

    pub fn jet_class(&self, kind: JetKind) -> Result<SheafClass<Rational>> {
        let ring = &self.fm.ring;
        let rel = |n: u32| -> SheafClass<Rational> {
            let mut chern = graded::one(ring);
            for i in 0..n as i64 {
                chern = &chern * &self.line(&self.rel_factor(i)).chern;
            }
            SheafClass { rank: n as i64, chern }
        };
        let pulled = &self.data.c + &self.sc.pullback_omega_p1;
        match kind {
            JetKind::Rel(n) if (1..=4).contains(&n) => Ok(rel(n)),
            JetKind::Rel(n) => Err(Error::Invalid(format!("jet order {n} outside 1..=4"))),
            JetKind::Fat3 => Ok(SheafClass { rank: 3, chern: &self.line(&pulled).chern * &rel(2).chern }),
            JetKind::Ram4 => Ok(SheafClass { rank: 4, chern: &self.line(&pulled).chern * &rel(3).chern }),
        }
    }

    /// Kernel of the (assumed surjective) evaluation map
    /// `H⁰(O(C)) ⊗ O → jet`.
    pub fn kernel_class(&self, jet: &SheafClass<Rational>) -> Result<SheafClass<Rational>> {
        let n1 = self.sections();
        if n1 <= jet.rank {
            return Err(Error::Rank(format!("{n1} sections cannot surject onto a rank {} jet bundle", jet.rank)));
        }
        whitney_quotient(&SheafClass::trivial(jet.chern.ring(), n1), jet)
    }

    fn kernel_of(&self, kind: JetKind) -> Result<SheafClass<Rational>> {
        self.kernel_class(&self.jet_class(kind)?)
    }

    /// `[P(W')]` for `W' ⊂ W` kernels of two evaluation maps.
    fn subbundle(&self, big: JetKind, small: JetKind) -> Result<DivisorClassPW> {
        let w = self.kernel_of(big)?;
        let w_sub = self.kernel_of(small)?;
        let quotient = whitney_quotient(&w, &w_sub)?;
        if quotient.rank != 1 {
            return Err(Error::Rank(format!("quotient has rank {}", quotient.rank)));
        }
        if !quotient.c(2).is_zero() {
            return Err(Error::Invalid("quotient is not a line bundle".into()));
        }
        Ok(DivisorClassPW { h_coeff: Rational::one(), base: FmDivisor::from_elt(&quotient.c(1))? })
    }

    pub fn subbundle_divisor_class(&self, which: Subbundle) -> Result<DivisorClassPW> {
        match which {
            Subbundle::DeltaN => self.subbundle(JetKind::Rel(2), JetKind::Fat3),
            Subbundle::XiTr => self.subbundle(JetKind::Rel(2), JetKind::Rel(3)),
            Subbundle::DeltaRed => self.subbundle(JetKind::Rel(3), JetKind::Rel(4)),
            Subbundle::DeltaRam => self.subbundle(JetKind::Rel(3), JetKind::Ram4),
        }
    }

    /// `∫_F s₂(U) = ∫_F c₂(J³_π)`: the degree of the triple-ramification
    /// locus `Z ⊂ P^N`.
    pub fn z_degree(&self) -> Result<Rational> {
        let u = self.kernel_of(JetKind::Rel(3))?;
        self.fm.integrate(&segre(&u).component(2))
    }
}

pub fn jet_class(kind: JetKind, g: i64) -> Result<SheafClass<Rational>> {
    JetContext::new(g)?.jet_class(kind)
}

pub fn kernel_class(g: i64, jet: &SheafClass<Rational>) -> Result<SheafClass<Rational>> {
    JetContext::new(g)?.kernel_class(jet)
}

pub fn z_degree(g: i64) -> Result<Rational> {
    JetContext::new(g)?.z_degree()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subbundle {
    /// Curves singular at the marked point.
    DeltaN,
    /// Marked point of triple ramification.
    XiTr,
    /// A ruling line splits off.
    DeltaRed,
    /// Node with a branch tangent to the ruling.
    DeltaRam,
}

impl Subbundle {
    pub const ALL: [Subbundle; 4] = [Subbundle::DeltaN, Subbundle::XiTr, Subbundle::DeltaRed, Subbundle::DeltaRam];

    pub fn name(self) -> &'static str {
        match self {
            Subbundle::DeltaN => "delta_n",
            Subbundle::XiTr => "xi_tr",
            Subbundle::DeltaRed => "delta_red",
            Subbundle::DeltaRam => "delta_ram",
        }
    }
}

pub fn subbundle_divisor_class(which: Subbundle, g: i64) -> Result<DivisorClassPW> {
    JetContext::new(g)?.subbundle_divisor_class(which)
}

/// `h_coeff·h + p₂*(base)` in `A¹(PW)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClassPW {
    pub h_coeff: Rational,
    pub base: FmDivisor,
}

impl fmt::Display for DivisorClassPW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h_coeff.is_one() {
            write!(f, "h + ({})", self.base)
        } else {
            write!(f, "{}*h + ({})", self.h_coeff, self.base)
        }
    }
}

/// An entry of an independence test: either an explicit class or the total
/// discriminant `δ = μ·h` with `μ` an unknown nonzero multiple.
#[derive(Clone, Debug)]
pub enum PwClass {
    Delta,
    Class(DivisorClassPW),
}

/// Rank of the coefficient matrix in the basis `(h, f, s)`, computed over
/// `Q(μ)`.
pub fn independence_rank(classes: &[PwClass]) -> Result<usize> {
    if classes.is_empty() {
        return Err(Error::Invalid("empty class list".into()));
    }
    let q = |x: &Rational| RatFn::constant(x.clone());
    let rows: Vec<Vec<RatFn>> = classes
        .iter()
        .map(|c| match c {
            PwClass::Delta => vec![RatFn::param("mu"), RatFn::zero(), RatFn::zero()],
            PwClass::Class(d) => vec![q(&d.h_coeff), q(&d.base.a), q(&d.base.b)],
        })
        .collect();
    Ok(rank(&rows))
}

/// `[δ₀]` as `(h coefficient, base part)` from `p₁*δ = δ₀ + 2δ_n` and
/// `[δ] = μ·h`.
pub fn delta0_class(g: i64) -> Result<(RatFn, FmDivisor)> {
    let dn = subbundle_divisor_class(Subbundle::DeltaN, g)?;
    let h = RatFn::param("mu") - RatFn::constant(dn.h_coeff.clone() * rint(2));
    Ok((h, -&dn.base.scale(&rint(2))))
}

/// The four subbundle classes, one line each: `name = h + (a*f + b*s)`.
pub fn divisor_table(g: i64) -> Result<String> {
    let ctx = JetContext::new(g)?;
    let mut out = String::new();
    for which in Subbundle::ALL {
        let d = ctx.subbundle_divisor_class(which)?;
        out.push_str(&format!("{} = {}\n", which.name(), d));
    }
    Ok(out)
}

/// `A*(P(W))` over `F_m`: generators `f, s, h`, the surface relations, and
/// the Grothendieck relation `Σ c_i(W)·h^{r−i} = 0` when it fits under the
/// cap.
#[derive(Clone, Debug)]
pub struct ProjBundleRing {
    pub base: FmRing,
    pub bundle: SheafClass<Rational>,
    pub ring: Ring<Rational>,
}

impl ProjBundleRing {
    pub fn new(base: &FmRing, bundle: &SheafClass<Rational>, cap: u32) -> Result<Self> {
        if bundle.rank < 1 {
            return Err(Error::Rank(format!("projective bundle of rank {}", bundle.rank)));
        }
        let r = bundle.rank as u32;
        let mut relations = fm_relations(base.m);
        if r <= cap {
            let h = Poly::var("h");
            let mut g = Poly::zero();
            for i in 0..=r.min(2) {
                g = g + bundle.c(i).to_poly() * h.pow(r - i);
            }
            relations.push(g);
        }
        let ring = build_ring(RingPresentation::new(&[("f", 1), ("s", 1), ("h", 1)], relations, cap))?;
        Ok(ProjBundleRing { base: base.clone(), bundle: bundle.clone(), ring })
    }

    pub fn h(&self) -> RingElt<Rational> {
        gen(&self.ring, "h").unwrap()
    }

    pub fn pullback(&self, x: &RingElt<Rational>) -> RingElt<Rational> {
        let images = [gen(&self.ring, "f").unwrap(), gen(&self.ring, "s").unwrap()];
        x.map(&images, |c| c.clone()).expect("two generators")
    }

    pub fn divisor(&self, d: &DivisorClassPW) -> RingElt<Rational> {
        &self.h().scale(&d.h_coeff) + &self.pullback(&self.base.divisor(&d.base))
    }

    /// `p_*`: writes the normal form as `Σ h^j·β_j` and sends it to
    /// `Σ β_j·s_{j−r+1}(W)`.
    pub fn pushforward(&self, x: &RingElt<Rational>) -> RingElt<Rational> {
        let r = self.bundle.rank;
        let s = segre(&self.bundle);
        let base = &self.base.ring;
        let mut acc = graded::zero(base);
        for (e, c) in x.terms() {
            let i = e[2] as i64 - r + 1;
            if i < 0 {
                continue;
            }
            let beta = Poly::from_terms(&["f", "s"], [(vec![e[0], e[1]], c)]);
            let beta = graded::from_poly(base, &beta).expect("base monomial");
            acc = &acc + &(&beta * &s.component(i as u32));
        }
        acc
    }

    /// Degree of a top-dimensional class.
    pub fn integrate(&self, x: &RingElt<Rational>) -> Result<Rational> {
        self.base.integrate(&self.pushforward(x).component(2))
    }
}

/// Over `Q(μ)`, the identity `[δ₀] + 2[δ_n] = μ·h`.
pub fn delta_pullback_identity_holds(g: i64) -> Result<bool> {
    let (h0, b0) = delta0_class(g)?;
    let dn = subbundle_divisor_class(Subbundle::DeltaN, g)?;
    let h = h0 + RatFn::constant(dn.h_coeff.clone() * rint(2));
    let base = &b0 + &dn.base.scale(&rint(2));
    Ok(h == RatFn::param("mu") && base.a.is_zero() && base.b.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::series_inverse;

    #[test]
    fn jet_examples() {
        let ctx = JetContext::new(2).unwrap();
        let c1 = |k| FmDivisor::from_elt(&ctx.jet_class(k).unwrap().c(1)).unwrap();
        assert_eq!(c1(JetKind::Rel(2)), FmDivisor::new(4, 4));
        // 3C + ω_π + π*ω_{P¹} with C = 3s + 2f on F_0
        assert_eq!(c1(JetKind::Fat3), FmDivisor::new(4, 7));
        let r1 = ctx.jet_class(JetKind::Rel(1)).unwrap();
        assert_eq!(r1.chern, &graded::one(&ctx.fm.ring) + &ctx.fm.divisor(&ctx.data.c));
        assert!(ctx.jet_class(JetKind::Rel(5)).is_err());
    }

    #[test]
    fn kernel_examples() {
        let ctx = JetContext::new(2).unwrap();
        let w = ctx.kernel_class(&ctx.jet_class(JetKind::Rel(2)).unwrap()).unwrap();
        assert_eq!(w.rank, 10);
        assert_eq!(FmDivisor::from_elt(&w.c(1)).unwrap(), FmDivisor::new(-4, -4));
        assert_eq!(ctx.kernel_of(JetKind::Rel(3)).unwrap().rank, 9);
        let ctx3 = JetContext::new(3).unwrap();
        assert_eq!(ctx3.kernel_of(JetKind::Rel(3)).unwrap().rank, 11);
        let fake = SheafClass::trivial(&ctx.fm.ring, 12);
        assert!(matches!(ctx.kernel_class(&fake), Err(Error::Rank(_))));
    }

    #[test]
    fn subbundle_classes_follow_the_sequences() {
        for g in 2..=8 {
            let ctx = JetContext::new(g).unwrap();
            let c = &ctx.data.c;
            let w = &ctx.sc.omega_pi;
            let p = &ctx.sc.pullback_omega_p1;
            let base = |s| ctx.subbundle_divisor_class(s).unwrap().base;
            assert_eq!(base(Subbundle::DeltaRed), c + &w.scale(&rint(3)));
            assert_eq!(base(Subbundle::DeltaRam), c + p);
            assert_eq!(base(Subbundle::DeltaN), c + p);
            assert_eq!(base(Subbundle::XiTr), c + &w.scale(&rint(2)));
        }
    }

    #[test]
    fn independence() {
        for g in 2..=6 {
            let ctx = JetContext::new(g).unwrap();
            let cls = |s| PwClass::Class(ctx.subbundle_divisor_class(s).unwrap());
            assert_eq!(independence_rank(&[PwClass::Delta, cls(Subbundle::DeltaN), cls(Subbundle::XiTr)]).unwrap(), 3);
            assert_eq!(
                independence_rank(&[PwClass::Delta, cls(Subbundle::DeltaRed), cls(Subbundle::DeltaRam)]).unwrap(),
                3
            );
        }
        let h = DivisorClassPW { h_coeff: rint(1), base: FmDivisor::new(0, 0) };
        let h2 = DivisorClassPW { h_coeff: rint(2), base: FmDivisor::new(0, 0) };
        assert_eq!(independence_rank(&[PwClass::Class(h), PwClass::Class(h2)]).unwrap(), 1);
    }

    #[test]
    fn z_degrees() {
        assert_eq!(z_degree(2).unwrap(), rint(12));
        assert_eq!(z_degree(3).unwrap(), rint(15));
        assert_eq!(z_degree(4).unwrap(), rint(18));
    }

    #[test]
    fn segre_of_kernel_is_jet_class() {
        let ctx = JetContext::new(3).unwrap();
        let j = ctx.jet_class(JetKind::Rel(3)).unwrap();
        let u = ctx.kernel_class(&j).unwrap();
        assert_eq!(segre(&u), j.chern);
        assert_eq!(series_inverse(&segre(&u)).unwrap(), u.chern);
    }

    #[test]
    fn pushforward_of_hyperplane_powers() {
        let fm = FmRing::new(1);
        let l = SheafClass::line(&fm.divisor(&FmDivisor::new(1, 1)));
        let e = crate::chern::whitney_sum(&l, &SheafClass::trivial(&fm.ring, 1)).unwrap();
        let pb = ProjBundleRing::new(&fm, &e, 3).unwrap();
        let h = pb.h();
        assert!(pb.pushforward(&graded::one(&pb.ring)).is_zero());
        assert_eq!(pb.pushforward(&h), graded::one(&fm.ring));
        assert_eq!(pb.pushforward(&h.pow(2)), segre(&e).component(1));
        assert_eq!(pb.pushforward(&h.pow(3)), segre(&e).component(2));
    }

    #[test]
    fn pullback_identity() {
        for g in 2..=5 {
            assert!(delta_pullback_identity_holds(g).unwrap());
        }
    }

    #[test]
    fn table_text() {
        let t = divisor_table(2).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "delta_n = h + (0*f + 3*s)");
        assert_eq!(lines[1], "xi_tr = h + (2*f - 1*s)");
        assert_eq!(lines[2], "delta_red = h + (2*f - 3*s)");
        assert_eq!(lines[3], "delta_ram = h + (0*f + 3*s)");
    }
}
