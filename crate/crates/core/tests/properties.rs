use proptest::prelude::*;

use ress_core::binaryquartic::{family_invariants, BinaryQuartic};
use ress_core::exactfield::{Field, Rat};
use ress_core::families::gen_special_i2;
use ress_core::planecurves::chisini_quartic;
use ress_core::ternaryform::{restrict_to_pencil, Point3, TernaryForm};
use ress_core::unipoly::UniPoly;
use ress_core::weierstrass::WeierstrassModel;

fn poly(max_deg: usize) -> impl Strategy<Value = UniPoly<Rat>> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| UniPoly::from_ints(&c, ()))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = UniPoly<Rat>> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d).unwrap())
}

fn quartic() -> impl Strategy<Value = BinaryQuartic<Rat>> {
    prop::array::uniform5(rat()).prop_filter_map("zero form", |a| BinaryQuartic::new(a).ok())
}

fn cubic() -> impl Strategy<Value = TernaryForm<Rat>> {
    prop::collection::vec(-4i64..=4, 10).prop_map(|c| {
        let mut terms = Vec::new();
        let mut k = 0;
        for i in 0..=3u32 {
            for j in 0..=(3 - i) {
                terms.push((i, j, 3 - i - j, c[k]));
                k += 1;
            }
        }
        TernaryForm::from_int_terms(&terms, ()).unwrap()
    })
}

fn model() -> impl Strategy<Value = WeierstrassModel<Rat>> {
    (poly(4), poly(6)).prop_filter_map("singular or non-minimal", |(a, b)| {
        let m = WeierstrassModel::new(a, b).ok()?;
        (!m.discriminant().is_zero() && m.classify_fibres().is_ok()).then_some(m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divrem_reconstructs(f in poly(8), g in nonzero_poly(4)) {
        let (q, r) = f.divrem(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.is_zero() || r.degree() < g.degree());
    }

    #[test]
    fn yun_reconstructs(f in nonzero_poly(3), g in nonzero_poly(2), h in nonzero_poly(2)) {
        let p = &(&f * &g.pow(2)) * &h.pow(3);
        let sfd = p.squarefree_decomposition().unwrap();
        prop_assert_eq!(sfd.reconstruct(), p.clone());
        for part in &sfd.parts {
            prop_assert!(part.poly.is_squarefree());
        }
        for (i, a) in sfd.parts.iter().enumerate() {
            for b in &sfd.parts[i + 1..] {
                prop_assert!(a.poly.gcd_monic(&b.poly).unwrap().is_constant());
            }
        }
    }

    #[test]
    fn square_root_of_a_square(f in nonzero_poly(5)) {
        let (c, s) = (&f * &f).exact_square_root().unwrap().expect("a square");
        prop_assert_eq!(s.clone(), f.monic());
        prop_assert_eq!((&s * &s).scale(&c), &f * &f);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(f in nonzero_poly(4), g in nonzero_poly(4)) {
        prop_assume!(f.degree() > Some(0) && g.degree() > Some(0));
        let res = f.resultant(&g).unwrap();
        let shared = !f.gcd_monic(&g).unwrap().is_constant();
        prop_assert_eq!(res.is_zero(), shared);
    }

    #[test]
    fn shears_preserve_i_and_j(q in quartic(), c in rat()) {
        for s in [q.shear_u(&c), q.shear_v(&c)] {
            prop_assert_eq!(s.invariant_i(), q.invariant_i());
            prop_assert_eq!(s.invariant_j(), q.invariant_j());
        }
    }

    #[test]
    fn discriminant_is_a_multiple_of_4i3_minus_j2(q in quartic()) {
        let i = q.invariant_i();
        let j = q.invariant_j();
        let rhs = (Rat::from(4) * i.pow(3) - j.pow(2)) * Rat::new(1, 27).unwrap();
        prop_assert_eq!(q.discriminant(), rhs);
    }

    #[test]
    fn mobius_and_twist_preserve_types(m in model(), a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3, u in 1i64..=5) {
        prop_assume!(a * d - b * c != 0);
        let report = m.classify_fibres().unwrap();
        prop_assert_eq!(report.euler_number(), 12);
        let [a, b, c, d] = [a, b, c, d].map(Rat::from);
        let pulled = m.mobius([&a, &b, &c, &d]).unwrap().classify_fibres().unwrap();
        prop_assert_eq!(pulled.type_multiset(), report.type_multiset());
        prop_assert_eq!(pulled.euler_number(), 12);
        let twisted = m.twist(&Rat::from(u)).unwrap().classify_fibres().unwrap();
        prop_assert_eq!(twisted.type_multiset(), report.type_multiset());
    }

    #[test]
    fn special_i2_discriminant_has_root_s(q1 in poly(2), q2 in poly(2)) {
        let Ok(fm) = gen_special_i2(&q1, &q2) else { return Ok(()) };
        let two = Rat::from(2);
        let s = &(&q1 - &q2) * &(&q1 + &q2.scale(&two)) * (q1.scale(&two) + &q2);
        let (_, root) = (-fm.model.discriminant()).exact_square_root().unwrap().expect("-D is a square");
        prop_assert_eq!(root, s.monic());
    }

    #[test]
    fn chisini_sections_are_equianharmonic(phi in cubic()) {
        let p = Point3::<Rat>::from_ints([0, 0, 1], ()).unwrap();
        let c3 = phi.evaluate(p.coords());
        prop_assume!(!c3.is_zero());
        let f4 = chisini_quartic(&phi, &p).unwrap();
        let (i, _) = family_invariants(&restrict_to_pencil(&f4, &p).coeffs);
        prop_assert!(i.is_zero());
        let perturbed = &f4 + &TernaryForm::from_int_terms(&[(4, 0, 0, 1)], ()).unwrap();
        let (i, _) = family_invariants(&restrict_to_pencil(&perturbed, &p).coeffs);
        prop_assert!(!i.is_zero());
    }
}
