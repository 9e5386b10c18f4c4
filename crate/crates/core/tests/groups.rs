use std::collections::{BTreeSet, VecDeque};

use macdonald_core::fpgroup::{
    sylow_presentation, todd_coxeter, EnumerationLimits, Strategy as CosetStrategy,
};
use macdonald_core::permgroup::{PermGroup, Permutation};
use macdonald_core::predictor::{predict, prime_support, GroupParams};
use macdonald_core::verifier::{build_group, verify, Engine, Status, VerifyOptions};
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn gens() -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (2usize..=7).prop_flat_map(|d| (Just(d), prop::collection::vec(perm(d), 1..=3)))
}

fn closure(degree: usize, gens: &[Permutation]) -> BTreeSet<Vec<u32>> {
    let id = Permutation::identity(degree);
    let mut seen = BTreeSet::from([id.images().to_vec()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.images().to_vec()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn order_matches_closure((degree, gs) in gens()) {
        let g = PermGroup::new(degree, gs.clone()).unwrap();
        let elements = closure(degree, &gs);
        prop_assert_eq!(g.order(), BigUint::from(elements.len()));
        prop_assert!(factorial(degree).is_multiple_of(&g.order()));
    }

    #[test]
    fn membership_matches_closure((degree, gs) in gens(), x in (2usize..=7).prop_flat_map(perm)) {
        prop_assume!(x.degree() == degree);
        let g = PermGroup::new(degree, gs.clone()).unwrap();
        let inside = closure(degree, &gs).contains(x.images());
        prop_assert_eq!(g.contains(&x).unwrap(), inside);
    }

    #[test]
    fn central_series_terms_are_normal((degree, gs) in gens()) {
        let g = PermGroup::new(degree, gs.clone()).unwrap();
        let lcs = g.lower_central_series();
        for w in lcs.orders.windows(2) {
            prop_assert!(w[0].is_multiple_of(&w[1]));
        }
        for term in &lcs.terms {
            for h in term.generators() {
                for x in &gs {
                    prop_assert!(term.contains(&h.conjugate(x)).unwrap());
                }
            }
        }
    }
}

fn small_pairs() -> Vec<(i64, i64, u64)> {
    let mut out = Vec::new();
    for alpha in -6i64..=10 {
        for beta in alpha..=10 {
            let Ok(params) = GroupParams::new(alpha, beta) else {
                continue;
            };
            for p in prime_support(&params).unwrap() {
                if predict(&params, p).unwrap().order() <= BigUint::from(3000u32) {
                    out.push((alpha, beta, p));
                }
            }
        }
    }
    out
}

/// Coset enumeration blows up on some of these presentations, so the cross
/// checks only compare the runs that finish within a small table.
const TC_BUDGET: usize = 20_000;

#[test]
fn enumeration_strategies_agree() {
    let mut compared = 0;
    for (alpha, beta, p) in small_pairs() {
        let Ok(pres) = sylow_presentation(alpha, beta, p) else {
            continue;
        };
        let count = |s| {
            todd_coxeter(
                &pres,
                &[],
                &EnumerationLimits::with_max_cosets(TC_BUDGET).strategy(s),
            )
            .ok()
            .map(|t| t.coset_count())
        };
        if let (Some(hlt), Some(felsch)) = (count(CosetStrategy::Hlt), count(CosetStrategy::Felsch))
        {
            assert_eq!(hlt, felsch, "({alpha}, {beta}, {p})");
            let order = predict(&GroupParams::new(alpha, beta).unwrap(), p)
                .unwrap()
                .order();
            assert_eq!(BigUint::from(hlt), order, "({alpha}, {beta}, {p})");
            compared += 1;
        }
    }
    assert!(compared >= 15, "only {compared} enumerations finished");
}

#[test]
fn engines_measure_the_same_group() {
    let tc = VerifyOptions {
        engine: Engine::ToddCoxeter,
        ..VerifyOptions::with_max_cosets(TC_BUDGET)
    };
    let pq = VerifyOptions::with_max_cosets(TC_BUDGET);
    let mut compared = 0;
    for (alpha, beta, p) in small_pairs() {
        let Ok(x) = build_group(alpha, beta, p, &tc) else {
            continue;
        };
        let y = build_group(alpha, beta, p, &pq).unwrap();
        assert_eq!(x.measure(), y.measure(), "({alpha}, {beta}, {p})");
        compared += 1;
    }
    assert!(compared >= 15, "only {compared} enumerations finished");
}

#[test]
fn symmetric_group_is_not_nilpotent() {
    let s7 = PermGroup::new(
        7,
        vec![
            Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap(),
            Permutation::from_cycles(7, &[&[0, 1]]).unwrap(),
        ],
    )
    .unwrap();
    assert_eq!(s7.order(), BigUint::from(5040u32));
    assert_eq!(s7.derived_subgroup().order(), BigUint::from(2520u32));
    let lcs = s7.lower_central_series();
    assert!(!lcs.nilpotent);
    assert_eq!(
        lcs.orders,
        vec![
            BigUint::from(5040u32),
            BigUint::from(2520u32),
            BigUint::from(2520u32)
        ]
    );
}

#[test]
fn small_window_matches_prediction() {
    let opts = VerifyOptions::with_max_cosets(200_000);
    for (alpha, beta, p) in small_pairs() {
        for (a, b) in [(alpha, beta), (beta, alpha)] {
            let report = verify(a, b, p, &opts);
            assert_eq!(report.status, Status::Match, "{}", report.to_json());
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let opts = VerifyOptions::default();
    for (alpha, beta, p) in [(7, 34, 3), (5, -3, 2), (26, 6, 5)] {
        let x = verify(alpha, beta, p, &opts).without_timing().to_json();
        let y = verify(alpha, beta, p, &opts).without_timing().to_json();
        assert_eq!(x, y);
    }
}
