mod common;

use fotheory::structures::{
    automorphisms, definable_closure, definable_quotient, find_isomorphism, induced_substructure, orbit_theory,
    DefinableSet, FinStructure, DEFAULT_AUTOMORPHISM_BOUND,
};
use fotheory::Error;

/// Orbits of `n`-tuples of a pure set of size `k`: partitions of `n` into at most `k` blocks.
fn pure_set_orbits(n: usize, k: usize) -> usize {
    let mut s = vec![vec![0usize; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    (1..=k.min(n)).map(|j| s[n][j]).sum()
}

#[test]
fn there_are_enough_fixtures() {
    let all = common::structures();
    assert!(all.len() >= 10);
    assert!(all.iter().all(|(_, m)| m.size() <= 6));
}

#[test]
fn orbit_and_closure_theories_coincide() {
    for (name, m) in common::structures() {
        let orbits = orbit_theory(&m, 4).unwrap();
        let closure = definable_closure(&m, 4, 1_000_000).unwrap();
        assert!(
            common::same_by_labels(&orbits.theory, &closure.theory),
            "{name}: {:?} vs {:?}",
            orbits.theory.level_sizes(),
            closure.theory.level_sizes()
        );
        assert!(orbits.theory.validate_functor().passed(), "{name}");
        assert!(orbits.projection.validate().passed(), "{name}");
        assert!(orbits.projection.is_levelwise_surjective(), "{name}");
    }
}

#[test]
fn pure_set_orbit_counts() {
    for k in 1..=4 {
        let o = orbit_theory(&FinStructure::pure_set(k), 4).unwrap();
        let expected: Vec<usize> = (1..=4).map(|n| pure_set_orbits(n, k)).collect();
        assert_eq!(o.theory.level_sizes(), expected, "pure set of size {k}");
    }
}

#[test]
fn automorphism_group_orders() {
    let expected = [
        ("cyclic_order", 4),
        ("directed_triangle", 3),
        ("hexagon", 12),
        ("linear_order", 1),
        ("matching", 8),
        ("one_point", 1),
        ("path_four", 2),
        ("square", 8),
        ("star", 24),
        ("three_points", 6),
        ("triangle_and_point", 6),
        ("two_points", 2),
        ("unary_split", 12),
    ];
    for (name, order) in expected {
        let group = automorphisms(&common::structure(name), DEFAULT_AUTOMORPHISM_BOUND).unwrap();
        assert_eq!(group.len(), order, "{name}");
    }
}

#[test]
fn automorphism_bound_is_enforced() {
    let err = automorphisms(&FinStructure::pure_set(4), 3).unwrap_err();
    assert!(matches!(err, Error::DomainTooLarge { size: 4, bound: 3 }));
}

#[test]
fn orbits_of_the_square() {
    let o = orbit_theory(&common::structure("square"), 3).unwrap();
    assert_eq!(o.theory.ids(2), &["(a,a)", "(a,b)", "(a,c)"]);
    assert_eq!(o.orbit_of(&[1, 3]), o.theory.lookup(2, "(a,c)").unwrap());
    assert_eq!(o.orbit_of(&[3, 0]), o.theory.lookup(2, "(a,b)").unwrap());
}

#[test]
fn closure_uses_enough_levels() {
    let c = definable_closure(&common::structure("star"), 2, 1_000_000).unwrap();
    assert_eq!(c.working_levels, 5);
    let o = orbit_theory(&common::structure("star"), 2).unwrap();
    assert!(common::same_by_labels(&o.theory, &c.theory));
}

#[test]
fn closure_respects_the_cap() {
    assert!(matches!(
        definable_closure(&common::structure("hexagon"), 4, 1000),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn induced_substructure_of_the_triangle() {
    let m = common::structure("triangle_and_point");
    let o = orbit_theory(&m, 2).unwrap();
    let set = DefinableSet::from_labels(&o.theory, 1, &["(a)"]).unwrap();
    let sub = induced_substructure(&m, &o, &set).unwrap();
    assert_eq!(sub.map, vec![0, 1, 2]);
    let triangle = FinStructure::pure_set(3)
        .with_relation("E", 2, &[&["a", "b"], &["b", "a"], &["b", "c"], &["c", "b"], &["a", "c"], &["c", "a"]])
        .unwrap();
    assert!(find_isomorphism(&sub.structure, &triangle).is_some());
}

#[test]
fn empty_pullback_is_reported() {
    let m = common::structure("two_points");
    let o = orbit_theory(&m, 2).unwrap();
    let set = DefinableSet::new(&o.theory, 1, []).unwrap();
    assert!(matches!(induced_substructure(&m, &o, &set), Err(Error::EmptyPullback)));
}

#[test]
fn quotient_of_a_matching() {
    let m = common::structure("matching");
    let o = orbit_theory(&m, 2).unwrap();
    let set = DefinableSet::from_labels(&o.theory, 2, &["(a,a)", "(a,b)"]).unwrap();
    let q = definable_quotient(&m, &o, &set).unwrap();
    assert_eq!(q.structure.domain, vec!["[a,b]", "[c,d]"]);
    assert_eq!(q.map, vec![0, 0, 1, 1]);
    assert!(q.structure.holds("E", &[0, 0]));
    assert!(!q.structure.holds("E", &[0, 1]));
}

#[test]
fn non_equivalence_is_rejected() {
    let m = common::structure("path_four");
    let o = orbit_theory(&m, 2).unwrap();
    let adjacent = o.orbit_of(&[0, 1]);
    let mut labels = vec![o.theory.label(2, adjacent).to_string()];
    for p in 0..4 {
        labels.push(o.theory.label(2, o.orbit_of(&[p, p])).to_string());
    }
    labels.sort();
    labels.dedup();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let set = DefinableSet::from_labels(&o.theory, 2, &refs).unwrap();
    assert!(matches!(definable_quotient(&m, &o, &set), Err(Error::NotAnEquivalence(_))));
}

#[test]
fn structure_json_round_trip_and_errors() {
    for (name, m) in common::structures() {
        assert_eq!(FinStructure::from_json(&m.to_json()).unwrap(), m, "{name}");
    }
    let bad = r#"{"domain": ["a"], "relations": {"R": {"arity": 2, "tuples": [["a", "z"]]}}}"#;
    match FinStructure::from_json(bad) {
        Err(Error::MalformedStructure(msg)) => assert!(msg.contains("relations.R.tuples[0][1]"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
    assert!(FinStructure::from_json(r#"{"domain": [], "relations": {}}"#).is_err());
    assert!(FinStructure::from_json(r#"{"domain": ["a"], "extra": 1}"#).is_err());
}
