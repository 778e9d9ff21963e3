use std::sync::Arc;

use fotheory::builtin::{builtin, oracle};
use fotheory::oracle::LazyTheory;
use fotheory::search::{simplex_search, simplex_search_all, Constraint, SimplexSpace};
use fotheory::{FinSetMap, TruncatedSymSS};
use proptest::prelude::*;

fn exhaustive(t: &TruncatedSymSS, n: usize, constraints: &[Constraint<u32>]) -> Vec<u32> {
    (0..t.level_size(n) as u32)
        .filter(|&x| constraints.iter().all(|c| c.allowed.contains(&t.act(&c.map, x).unwrap())))
        .collect()
}

type RawConstraint = (Vec<usize>, Vec<u32>);

fn constraints_strategy(n: usize) -> impl Strategy<Value = Vec<RawConstraint>> {
    proptest::collection::vec(
        (proptest::collection::vec(0..n, 1..=3), proptest::collection::vec(0u32..1000, 1..=6)),
        0..=3,
    )
}

fn build(t: &TruncatedSymSS, n: usize, raw: &[RawConstraint]) -> Vec<Constraint<u32>> {
    raw.iter()
        .map(|(values, picks)| {
            let map = FinSetMap::new(n, values.clone()).unwrap();
            let size = t.level_size(values.len()) as u32;
            Constraint::member(map, picks.iter().map(|p| p % size))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn search_agrees_with_exhaustive_enumeration(
        name in prop::sample::select(vec!["equality", "dlo", "random_graph", "vect_f2"]),
        n in 1usize..=4,
        raw in constraints_strategy(4),
    ) {
        let t = builtin(name, 4).unwrap();
        let raw: Vec<RawConstraint> = raw
            .into_iter()
            .map(|(v, p)| (v.into_iter().map(|x| x % n).collect(), p))
            .collect();
        let constraints = build(&t, n, &raw);
        let expected = exhaustive(&t, n, &constraints);
        prop_assert_eq!(simplex_search_all(&t, n, &constraints).unwrap(), expected.clone());
        let one = simplex_search(&t, n, &constraints).unwrap();
        prop_assert_eq!(one.is_some(), !expected.is_empty());
        if let Some(x) = one {
            prop_assert!(expected.contains(&x));
        }
    }
}

#[test]
fn lazy_and_materialized_searches_agree() {
    let t = builtin("dlo", 5).unwrap();
    let lazy = LazyTheory::new(oracle("dlo").unwrap(), 5);
    let lt = t.lookup(2, "x1<x2").unwrap();
    let lt_key = lazy.parse(2, "x1<x2").unwrap();
    let chain = |a: usize, b: usize| FinSetMap::from_one_based(5, &[a, b]).unwrap();
    let found = simplex_search_all(&t, 5, &[Constraint::equals(chain(1, 3), lt), Constraint::equals(chain(3, 5), lt)])
        .unwrap();
    let lazy_found = simplex_search_all(
        &lazy,
        5,
        &[Constraint::equals(chain(1, 3), lt_key.clone()), Constraint::equals(chain(3, 5), lt_key)],
    )
    .unwrap();
    let labels: Vec<String> = found.iter().map(|&x| t.label(5, x).to_string()).collect();
    let lazy_labels: Vec<String> = lazy_found.iter().map(|k| lazy.label(5, k)).collect();
    assert_eq!(labels, lazy_labels);
    assert!(!labels.is_empty());
}

#[test]
fn lazy_space_parses_labels() {
    let lazy = Arc::new(LazyTheory::new(oracle("random_graph").unwrap(), 3));
    let key = lazy.parse(3, "{1}{2}{3} E:1-2,2-3").unwrap();
    assert_eq!(lazy.label(3, &key), "{1}{2}{3} E:1-2,2-3");
    assert!(lazy.parse(3, "nonsense").is_err());
}
