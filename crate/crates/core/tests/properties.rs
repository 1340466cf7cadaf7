//! Property tests: algebra laws on random classes, window-calculus
//! soundness for truncated series, Laurent truncation discipline,
//! enumeration invariants, and Weil-profile identities.

use bunmot_core::curve::{validate_curve, CurveData, ValidatedCurve};
use bunmot_core::expr;
use bunmot_core::laurent::LaurentQ;
use bunmot_core::motring::{Atom, MotClass, Window};
use bunmot_core::quot;
use bunmot_core::{BigInt, BigRational};
use proptest::prelude::*;

fn atom_strategy() -> impl Strategy<Value = Atom> {
    (0u32..=2, prop::collection::vec(1u32..=4, 0..=2))
        .prop_map(|(jac, parts)| Atom::new(jac, parts))
}

fn class_strategy(g: u32) -> impl Strategy<Value = MotClass> {
    prop::collection::vec((atom_strategy(), -5i64..=5, -3i64..=3), 0..=3).prop_map(
        move |terms| {
            let mut class = MotClass::zero();
            for (atom, twist, coeff) in terms {
                if coeff == 0 {
                    continue;
                }
                let t = MotClass::from_atom(atom, twist, Some(g))
                    .unwrap()
                    .scale(&BigInt::from(coeff));
                class = class.add(&t).unwrap();
            }
            class
        },
    )
}

fn curve_strategy() -> impl Strategy<Value = ValidatedCurve> {
    (0usize..4).prop_map(|i| {
        let all = bunmot_core::fixtures::all();
        all[i].clone()
    })
}

/// Weil-consistent profiles built from free low coefficients via the
/// functional equation. May violate the warn-only positivity conditions;
/// the identities tested below follow from the functional equation alone.
fn weil_profile_strategy() -> impl Strategy<Value = ValidatedCurve> {
    (1u32..=2, 2u64..=5, -3i64..=3, -3i64..=3).prop_map(|(g, q, a1, a2)| {
        let numerator = match g {
            1 => vec![1, a1, q as i64],
            _ => vec![1, a1, a2, q as i64 * a1, (q * q) as i64],
        };
        validate_curve(&CurveData {
            name: format!("random-g{}-q{}", g, q),
            genus: g,
            q,
            zeta_numerator: numerator,
        })
        .expect("functional equation holds by construction")
    })
}

fn two_classes_with_curve() -> impl Strategy<Value = (ValidatedCurve, MotClass, MotClass)> {
    curve_strategy().prop_flat_map(|c| {
        let g = c.genus();
        (Just(c), class_strategy(g), class_strategy(g))
    })
}

fn three_classes() -> impl Strategy<Value = (u32, MotClass, MotClass, MotClass)> {
    (0u32..=2).prop_flat_map(|g| {
        (
            Just(g),
            class_strategy(g),
            class_strategy(g),
            class_strategy(g),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_is_commutative_and_associative((_, x, y, z) in three_classes()) {
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(
            x.add(&y).unwrap().add(&z).unwrap(),
            x.add(&y.add(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn mul_distributes_over_add((_, x, y, z) in three_classes()) {
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(
            x.mul(&y).unwrap().mul(&z).unwrap(),
            x.mul(&y.mul(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(x.mul(&MotClass::unit()).unwrap(), x);
    }

    #[test]
    fn dual_is_involutive_and_multiplicative((g, x, y, _) in three_classes()) {
        prop_assert_eq!(x.dual(g).unwrap().dual(g).unwrap(), x.clone());
        prop_assert_eq!(
            x.mul(&y).unwrap().dual(g).unwrap(),
            x.dual(g).unwrap().mul(&y.dual(g).unwrap()).unwrap()
        );
    }

    #[test]
    fn realization_is_a_ring_morphism((c, x, y) in two_classes_with_curve()) {
        let rx = x.count_realize(&c).unwrap();
        let ry = y.count_realize(&c).unwrap();
        prop_assert_eq!(x.mul(&y).unwrap().count_realize(&c).unwrap(), rx.mul(&ry));
        prop_assert_eq!(x.add(&y).unwrap().count_realize(&c).unwrap(), rx.add(&ry));
    }

    #[test]
    fn reduction_is_idempotent_and_count_preserving((c, x, _) in two_classes_with_curve()) {
        let g = c.genus();
        let red = x.reduce_large_sym(g).unwrap();
        prop_assert_eq!(red.reduce_large_sym(g).unwrap(), red.clone());
        let threshold = (2 * g as i64 - 1).max(1);
        for (term, _) in red.terms() {
            for &j in term.atom.sym_parts() {
                prop_assert!((j as i64) < threshold);
            }
        }
        prop_assert_eq!(
            x.count_realize(&c).unwrap().eval_at(c.q()),
            red.count_realize(&c).unwrap().eval_at(c.q())
        );
    }

    #[test]
    fn canonical_text_reparses_to_the_same_class((g, x, _, _) in three_classes()) {
        let text = x.canonical_text();
        let ast = expr::parse(&text).unwrap();
        let ctx = expr::EvalCtx::new(Some(g), -100, 100);
        let reparsed = expr::eval(&ast, &ctx).unwrap();
        let w = x.vd_window();
        prop_assert_eq!(x.compare_on(&reparsed, w.lo - 1, w.hi + 1).unwrap(), None);
    }

    #[test]
    fn zeta_products_are_sound_on_certified_windows(
        i in 1i64..=3,
        j in 1i64..=3,
        a in 4i64..=30,
        b in 4i64..=30,
    ) {
        // Multiplying two truncations must agree with the product of wide
        // truncations everywhere the window calculus certifies.
        let za = MotClass::zeta_class(i, Window::lower(0, a)).unwrap();
        let zb = MotClass::zeta_class(j, Window::lower(0, b)).unwrap();
        let p = za.mul(&zb).unwrap();
        let wa = MotClass::zeta_class(i, Window::lower(0, 200)).unwrap();
        let wb = MotClass::zeta_class(j, Window::lower(0, 200)).unwrap();
        let wide = wa.mul(&wb).unwrap();
        let w = p.vd_window();
        prop_assert!(w.hi >= a.min(b), "window should reach the shorter operand");
        prop_assert_eq!(p.compare_on(&wide, w.lo.max(0), w.hi).unwrap(), None);
    }

    #[test]
    fn compact_products_are_sound_on_certified_windows(
        i in 2i64..=4,
        a in 4i64..=30,
        b in 4i64..=30,
    ) {
        let za = MotClass::zeta_class(-i, Window::upper(-a, 0)).unwrap();
        let kb = MotClass::bgm_k0(Window::upper(-b, 0));
        let p = za.mul(&kb).unwrap();
        let wide = MotClass::zeta_class(-i, Window::upper(-200, 0))
            .unwrap()
            .mul(&MotClass::bgm_k0(Window::upper(-200, 0)))
            .unwrap();
        let w = p.vd_window();
        prop_assert_eq!(p.compare_on(&wide, w.lo, w.hi.min(0)).unwrap(), None);
    }

    #[test]
    fn laurent_products_agree_wherever_defined(
        xs in prop::collection::vec((-4i64..=6, -9i64..=9), 0..=4),
        ys in prop::collection::vec((-4i64..=6, -9i64..=9), 0..=4),
        tx in 0i64..=8,
        ty in 0i64..=8,
    ) {
        let x = LaurentQ::from_terms(
            xs.iter().filter(|(e, _)| *e <= tx)
                .map(|&(e, c)| (e, BigRational::from(BigInt::from(c)))),
            Some(tx),
        );
        let y = LaurentQ::from_terms(
            ys.iter().filter(|(e, _)| *e <= ty)
                .map(|&(e, c)| (e, BigRational::from(BigInt::from(c)))),
            Some(ty),
        );
        // commutativity, including truncation metadata
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        // the product of truncations matches the exact product of the known
        // parts wherever the product claims to be defined
        let exact_x = LaurentQ::from_terms(
            x.terms().map(|(&e, c)| (e, c.clone())), None);
        let exact_y = LaurentQ::from_terms(
            y.terms().map(|(&e, c)| (e, c.clone())), None);
        let exact = exact_x.mul(&exact_y);
        let p = x.mul(&y);
        if let Some(t) = p.truncation() {
            prop_assert!(exact.agrees_upto(&p, t));
        }
    }

    #[test]
    fn composition_counts_are_binomials(total in 0u64..=8, n in 1usize..=4) {
        let comps = quot::compositions(total, n);
        // C(total + n - 1, n - 1)
        let mut expected = 1u64;
        for k in 0..(n as u64 - 1) {
            expected = expected * (total + n as u64 - 1 - k) / (k + 1);
        }
        prop_assert_eq!(comps.len() as u64, expected);
        for c in &comps {
            prop_assert_eq!(c.total(), total);
        }
    }

    #[test]
    fn hn_enumeration_is_monotone_in_the_bound(
        n in 1u32..=3,
        d in -3i64..=3,
        m1 in 0i64..=3,
        extra in 1i64..=2,
    ) {
        use bunmot_core::hn::enumerate_hn;
        let small = BigRational::from(BigInt::from(m1));
        let large = BigRational::from(BigInt::from(m1 + extra));
        let a = enumerate_hn(n, d, &small);
        let b = enumerate_hn(n, d, &large);
        for tau in &a {
            prop_assert!(b.contains(tau));
        }
    }

    #[test]
    fn weil_profiles_satisfy_projective_bundle_counts(c in weil_profile_strategy()) {
        // From the functional equation alone: for j >= 2g-1,
        // sym_count(j) = P(1) * (q^{j-g+1} - 1)/(q - 1).
        let g = c.genus() as u64;
        let p1: BigInt = c.numerator().iter().sum();
        for j in (2 * g).max(1) - 1..(2 * g + 8) {
            let mut geom = BigInt::from(0);
            let mut pow = BigInt::from(1);
            for _ in 0..=(j - g) {
                geom += &pow;
                pow *= c.q_big();
            }
            prop_assert_eq!(c.sym_count(j), &p1 * geom);
        }
    }
}
