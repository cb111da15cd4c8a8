use proptest::prelude::*;

use afcond::arcs::{strict_dependence, Arc, ArcOptions, DependenceStatus};
use afcond::groebner::Ideal;
use afcond::poly::{ratio, substitute_arc, Monomial, Polynomial, TruncatedSeries, VarList};
use afcond::rees::PresentedModule;

fn xyz() -> VarList {
    VarList::of(&["x", "y", "z"])
}

/// Up to four terms of degree at most 2 in each variable.
fn small_poly(vars: VarList, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    let n = vars.len();
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, n), -4i64..=4, 1i64..=3),
        0..4,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            &vars,
            terms
                .into_iter()
                .map(|(e, num, den)| (Monomial(e), ratio(num, den))),
        )
    })
}

fn series(precision: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-3i64..=3, 1..5).prop_map(move |cs| {
        let mut coeffs = vec![ratio(0, 1)];
        coeffs.extend(cs.into_iter().map(|c| ratio(c, 1)));
        TruncatedSeries::from_coeffs(coeffs, precision)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in small_poly(xyz(), 2), q in small_poly(xyz(), 2), r in small_poly(xyz(), 2)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn leibniz_rule(p in small_poly(xyz(), 3), q in small_poly(xyz(), 3), i in 0usize..3) {
        let lhs = (&p * &q).derivative(i);
        let rhs = &(&p * &q.derivative(i)) + &(&q * &p.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_display_round_trip(p in small_poly(xyz(), 3)) {
        prop_assert_eq!(Polynomial::parse(&p.to_string(), &xyz()).unwrap(), p);
    }

    #[test]
    fn arc_pullback_is_multiplicative(
        p in small_poly(xyz(), 2),
        q in small_poly(xyz(), 2),
        a in series(12), b in series(12), c in series(12),
    ) {
        let arc = [a, b, c];
        let lhs = substitute_arc(&(&p * &q), &arc).unwrap();
        let rhs = substitute_arc(&p, &arc).unwrap().mul(&substitute_arc(&q, &arc).unwrap());
        prop_assert_eq!(lhs.truncate(12), rhs.truncate(12));
        let sum = substitute_arc(&(&p + &q), &arc).unwrap();
        let parts = substitute_arc(&p, &arc).unwrap().add(&substitute_arc(&q, &arc).unwrap());
        prop_assert_eq!(sum.truncate(12), parts.truncate(12));
    }
}

fn xy() -> VarList {
    VarList::of(&["x", "y"])
}

fn plane_arcs() -> impl Strategy<Value = Vec<Arc>> {
    prop::collection::vec(((-1i64..=1), (1u32..=4), (-1i64..=1), (1u32..=4)), 1..4).prop_map(|v| {
        v.into_iter()
            .filter(|(a, _, b, _)| *a != 0 || *b != 0)
            .map(|(a, e, b, f)| Arc::monomial(&xy(), &[a, b], &[e, f], 48).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Adding an element of `m·M` to a strictly dependent element keeps it
    /// strictly dependent.
    #[test]
    fn stable_under_maximal_ideal_times_module(
        cols in prop::collection::vec(small_poly(xy(), 2), 1..3),
        u in small_poly(xy(), 3),
        a in small_poly(xy(), 1),
        arcs in plane_arcs(),
    ) {
        let columns: Vec<Vec<Polynomial>> = cols.iter().map(|c| vec![c.clone()]).collect();
        let m = PresentedModule::new(&xy(), 1, columns).unwrap();
        let opts = ArcOptions::default();
        let Ok(base) = strict_dependence(std::slice::from_ref(&u), &m, &arcs, &[], &opts) else {
            return Ok(());
        };
        if base.holds() {
            let x = Polynomial::var_at(&xy(), 0);
            let y = Polynomial::var_at(&xy(), 1);
            let shifted = &u + &(&(&x * &a) * &cols[0]) + (&y * &cols[cols.len() - 1]);
            let after = strict_dependence(&[shifted], &m, &arcs, &[], &opts);
            if let Ok(after) = after {
                prop_assert_ne!(after.status, DependenceStatus::Fails);
            }
        }
    }

    /// Adding arcs never turns a failure into success.
    #[test]
    fn monotone_in_arc_set(
        col in small_poly(xy(), 2),
        u in small_poly(xy(), 3),
        first in plane_arcs(),
        more in plane_arcs(),
    ) {
        let m = PresentedModule::new(&xy(), 1, vec![vec![col]]).unwrap();
        let opts = ArcOptions::default();
        let Ok(small) = strict_dependence(std::slice::from_ref(&u), &m, &first, &[], &opts) else {
            return Ok(());
        };
        let mut all = first.clone();
        all.extend(more);
        if let Ok(big) = strict_dependence(&[u], &m, &all, &[], &opts) {
            prop_assert!(big.status >= small.status);
            if small.fails() {
                prop_assert!(big.fails());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn elimination_stays_inside(gens in prop::collection::vec(small_poly(xyz(), 2), 1..3)) {
        let i = Ideal::new(&xyz(), gens).unwrap();
        prop_assert!(i.groebner_basis().unwrap().passes_audit().unwrap());
        let e = i.eliminate(&["x"]).unwrap();
        for g in e.generators() {
            prop_assert!(i.contains(&g.embed(&xyz()).unwrap()).unwrap());
        }
    }

    #[test]
    fn saturation_grows_and_is_idempotent(
        gens in prop::collection::vec(small_poly(xyz(), 2), 1..3),
        by in small_poly(xyz(), 1),
    ) {
        let i = Ideal::new(&xyz(), gens).unwrap();
        let j = Ideal::new(&xyz(), vec![by]).unwrap();
        let s = i.saturate(&j).unwrap();
        prop_assert!(s.contains_ideal(&i).unwrap());
        prop_assert_eq!(s.saturate(&j).unwrap(), s);
    }

    #[test]
    fn radical_equality_is_symmetric(
        a in prop::collection::vec(small_poly(xyz(), 2), 1..3),
        b in prop::collection::vec(small_poly(xyz(), 2), 1..3),
    ) {
        let i = Ideal::new(&xyz(), a).unwrap();
        let j = Ideal::new(&xyz(), b).unwrap();
        prop_assert!(i.radical_equal(&i).unwrap());
        prop_assert_eq!(i.radical_equal(&j).unwrap(), j.radical_equal(&i).unwrap());
        let prod = i.product(&j).unwrap();
        prop_assert!(prod.radical_equal(&i.intersect(&j).unwrap()).unwrap());
    }
}
