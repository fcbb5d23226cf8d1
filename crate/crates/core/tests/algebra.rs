use proptest::prelude::*;
use trichow::chern::{
    chern_character, from_chern_character, pgl_normalized_c2, twist_by_line, whitney_quotient, whitney_sum, SheafClass,
};
use trichow::graded::{build_ring, from_poly, gen, Ring, RingElt, RingPresentation};
use trichow::hirzebruch::fm_relations;
use trichow::kl::order_independent;
use trichow::poly::{parse_poly_in, resultant};
use trichow::scalar::rint;
use trichow::{parse_poly, Fp, Poly, QPoly, Rational, UPoly};

fn upoly(c: &[i64]) -> UPoly<Rational> {
    UPoly::new(c.iter().map(|&x| rint(x)).collect())
}

fn poly_in(vars: &[&'static str], terms: &[(Vec<u32>, i64)]) -> QPoly {
    Poly::from_terms(vars, terms.iter().map(|(e, c)| (e.clone(), rint(*c))))
}

fn terms(nvars: usize, max_deg: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -5i64..=5), 0..6)
}

fn small_upoly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..6)
}

fn ring_f1_with_cap(cap: u32) -> Ring<Rational> {
    build_ring(RingPresentation::new(&[("f", 1), ("s", 1), ("h", 1)], fm_relations(1), cap)).unwrap()
}

fn random_class(ring: &Ring<Rational>, rank: i64, t: &[(Vec<u32>, i64)]) -> SheafClass<Rational> {
    let p = poly_in(&["f", "s", "h"], t);
    let higher: RingElt<Rational> = from_poly(ring, &p).unwrap();
    let one = trichow::graded::one(ring);
    SheafClass::new(rank, &one + &(&higher - &trichow::graded::constant(ring, higher.constant_term()))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in terms(3, 3), b in terms(3, 3), c in terms(3, 3)) {
        let v = ["x", "y", "z"];
        let (a, b, c) = (poly_in(&v, &a), poly_in(&v, &b), poly_in(&v, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Poly::zero_in(&v));
    }

    #[test]
    fn canonical_text_reparses(a in terms(3, 4)) {
        let p = poly_in(&["x", "y", "z"], &a);
        let back: QPoly = parse_poly_in(&p.to_string(), &["x", "y", "z"]).unwrap();
        prop_assert_eq!(&back, &p);
        let loose: QPoly = parse_poly(&p.to_string()).unwrap();
        prop_assert_eq!(loose.with_vars(p.vars()).unwrap(), p);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(f in small_upoly(), g in small_upoly(), shared in small_upoly()) {
        let (f, g, h) = (upoly(&f), upoly(&g), upoly(&shared));
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let (f, g) = (&f * &h, &g * &h);
        prop_assume!(f.deg0() > 0 && g.deg0() > 0);
        let res = resultant(&Poly::from_upoly("x", &f), &Poly::from_upoly("x", &g), "x").unwrap();
        prop_assert_eq!(res.is_zero(), f.gcd(&g).deg0() > 0);
    }

    #[test]
    fn resultant_commutes_with_reduction(f in small_upoly(), g in small_upoly()) {
        let (fq, gq) = (upoly(&f), upoly(&g));
        prop_assume!(fq.deg0() > 0 && gq.deg0() > 0);
        let to_p = |p: &QPoly| p.map_coeffs(|c| <Fp<1_000_003> as trichow::Field>::from_rational(c).unwrap());
        let (pf, pg) = (Poly::from_upoly("x", &fq), Poly::from_upoly("x", &gq));
        let over_q = resultant(&pf, &pg, "x").unwrap();
        let over_p = resultant(&to_p(&pf), &to_p(&pg), "x").unwrap();
        prop_assert_eq!(to_p(&over_q), over_p);
    }

    #[test]
    fn squarefree_decomposition_reconstructs(parts in prop::collection::vec((small_upoly(), 1u32..4), 1..4), lead in 1i64..5) {
        let mut p = upoly(&[lead]);
        for (c, e) in &parts {
            p = &p * &upoly(c).pow(*e);
        }
        prop_assume!(!p.is_zero());
        let dec = p.squarefree();
        let rebuilt = dec.iter().fold(UPoly::constant(p.lc()), |acc, (a, i)| &acc * &a.pow(*i));
        prop_assert_eq!(&rebuilt, &p);
        for (i, (a, _)) in dec.iter().enumerate() {
            prop_assert!(a.is_squarefree());
            for (b, _) in &dec[i + 1..] {
                prop_assert_eq!(a.gcd(b).deg0(), 0);
            }
        }
    }

    #[test]
    fn normal_form_is_multiplicative(a in terms(3, 2), b in terms(3, 2)) {
        let ring = ring_f1_with_cap(4);
        let v = ["f", "s", "h"];
        let (pa, pb) = (poly_in(&v, &a), poly_in(&v, &b));
        let prod = from_poly(&ring, &(&pa * &pb)).unwrap();
        prop_assert_eq!(prod, &from_poly(&ring, &pa).unwrap() * &from_poly(&ring, &pb).unwrap());
    }

    #[test]
    fn whitney_sum_and_quotient(a in terms(3, 2), b in terms(3, 2), ra in 1i64..4, rb in 1i64..4) {
        let ring = ring_f1_with_cap(3);
        let (e, f) = (random_class(&ring, ra, &a), random_class(&ring, rb, &b));
        let sum = whitney_sum(&e, &f).unwrap();
        prop_assert_eq!(sum.rank, ra + rb);
        prop_assert_eq!(&sum.chern, &(&e.chern * &f.chern));
        prop_assert_eq!(whitney_quotient(&sum, &f).unwrap().chern, e.chern.clone());
        let ch = |x: &SheafClass<Rational>| chern_character(x, 3).unwrap();
        prop_assert_eq!(ch(&sum), &ch(&e) + &ch(&f));
        prop_assert_eq!(from_chern_character(&ch(&e)).unwrap().chern, e.chern);
    }

    #[test]
    fn normalized_c2_ignores_twists(a in terms(3, 2), tf in -4i64..=4, ts in -4i64..=4, th in -4i64..=4) {
        let ring = ring_f1_with_cap(3);
        let w = random_class(&ring, 2, &a);
        let g = |n| gen(&ring, n).unwrap();
        let t = &(&g("f").scale(&rint(tf)) + &g("s").scale(&rint(ts))) + &g("h").scale(&rint(th));
        let twisted = twist_by_line(&w, &t).unwrap();
        prop_assert_eq!(pgl_normalized_c2(&twisted).unwrap(), pgl_normalized_c2(&w).unwrap());
    }

    #[test]
    fn elimination_order_does_not_matter(b in 3i64..400) {
        prop_assert!(order_independent(rint(b)));
    }
}
