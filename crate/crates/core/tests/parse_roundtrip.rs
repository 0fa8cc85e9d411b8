mod common;

use std::collections::BTreeMap;

use common::{g2_q, g3_p, place_pool};
use hypercert_core::{parse_bundle, parse_class, parse_divisor, parse_place, BundleExpr, Divisor, H1Class};
use proptest::prelude::*;

fn divisor_from(pool: &[hypercert_core::Place], picks: &[(usize, i64)]) -> Divisor {
    Divisor::from_terms(picks.iter().map(|&(i, n)| (pool[i % pool.len()].clone(), n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divisors_round_trip(picks in prop::collection::vec((0usize..64, -5i64..=5), 0..6), prime in any::<bool>()) {
        let c = if prime { g3_p() } else { g2_q() };
        let pool = place_pool(&c);
        let d = divisor_from(&pool, &picks);
        prop_assert_eq!(parse_divisor(&c, &d.to_string()).unwrap(), d.clone());
        for pl in d.support() {
            prop_assert_eq!(parse_place(&c, &pl.to_string()).unwrap(), pl);
        }
    }

    #[test]
    fn classes_and_bundles_round_trip(
        amb in prop::collection::vec((0usize..64, -2i64..=2), 0..3),
        tails in prop::collection::vec((0usize..64, 1i64..=4, -7i64..=7), 0..4),
        prime in any::<bool>(),
    ) {
        let c = if prime { g3_p() } else { g2_q() };
        let pool = place_pool(&c);
        let ambient = divisor_from(&pool, &amb);
        let class = H1Class::new(
            ambient.clone(),
            tails.iter().map(|&(i, k, a)| {
                let pl = pool[i % pool.len()].clone();
                let n = ambient.coeff(&pl);
                (pl, -n - k, c.field().from_i64(a))
            }),
        );
        let back = parse_class(&c, &ambient, &class.to_string()).unwrap();
        prop_assert_eq!(&back, &class);
        let classes = BTreeMap::from([("k".to_string(), class.clone())]);
        let sub = BundleExpr::line(&ambient + &Divisor::place(hypercert_core::Place::Infinity, 1));
        let quot = BundleExpr::line(Divisor::place(hypercert_core::Place::Infinity, 1));
        let b = BundleExpr::sum(vec![
            BundleExpr::line(ambient.clone()),
            BundleExpr::ext("k", class, sub, quot).unwrap(),
        ]).unwrap();
        prop_assert_eq!(parse_bundle(&c, &classes, &b.to_string()).unwrap(), b);
    }
}
