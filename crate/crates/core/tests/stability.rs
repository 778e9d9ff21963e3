mod common;

use std::collections::HashSet;

use fotheory::builtin::builtin;
use fotheory::finmap::permutations;
use fotheory::stability::{divides_at_level, indiscernible_gap, order_property, IndiscernibleWitness, OrderWitness};
use fotheory::{FinSetMap, TruncatedSymSS, Verdict};

fn restrict(t: &TruncatedSymSS, level: usize, x: u32, coords_one_based: &[usize]) -> u32 {
    t.act(&FinSetMap::from_one_based(level, coords_one_based).unwrap(), x).unwrap()
}

/// Checks the `i <= j` pattern of an order-property witness directly.
fn check_order_witness(t: &TruncatedSymSS, phi: &HashSet<u32>, w: &OrderWitness<u32>) {
    let total = 2 * w.width * w.length;
    for (i, a) in w.a_blocks.iter().enumerate() {
        for (j, b) in w.b_blocks.iter().enumerate() {
            let coords: Vec<usize> = a.iter().chain(b).copied().collect();
            let r = restrict(t, total, w.element, &coords);
            assert_eq!(phi.contains(&r), i <= j, "a{} b{}", i + 1, j + 1);
        }
    }
}

/// Order-coherence checked over every pair of increasing selections of equal size.
fn order_coherent(t: &TruncatedSymSS, width: usize, length: usize, x: u32) -> bool {
    let total = width * length;
    let block = |b: usize| (b * width + 1..=(b + 1) * width).collect::<Vec<usize>>();
    let mut by_size: Vec<HashSet<u32>> = vec![HashSet::new(); length + 1];
    for mask in 1u32..(1 << length) {
        let chosen: Vec<usize> = (0..length).filter(|b| mask & (1 << b) != 0).collect();
        let coords: Vec<usize> = chosen.iter().flat_map(|&b| block(b)).collect();
        by_size[chosen.len()].insert(restrict(t, total, x, &coords));
    }
    by_size.iter().all(|s| s.len() <= 1)
}

fn set_indiscernible(t: &TruncatedSymSS, width: usize, length: usize, x: u32) -> bool {
    let total = width * length;
    permutations(length).into_iter().all(|perm| {
        let coords: Vec<usize> = perm.iter().flat_map(|&b| b * width..(b + 1) * width).collect();
        t.act(&FinSetMap::new(total, coords).unwrap(), x).unwrap() == x
    })
}

/// Brute force: some order-coherent element that is not set-indiscernible.
fn brute_gap(t: &TruncatedSymSS, width: usize, length: usize) -> bool {
    (0..t.level_size(width * length) as u32)
        .any(|x| order_coherent(t, width, length, x) && !set_indiscernible(t, width, length, x))
}

#[test]
fn dlo_has_the_order_property() {
    let t = builtin("dlo", 6).unwrap();
    let lt = t.lookup(2, "x1<x2").unwrap();
    let w = order_property(&t, 2, &[lt], 3).unwrap().expect("a witness");
    assert_eq!(w.length, 3);
    check_order_witness(&t, &HashSet::from([lt]), &w);
    let report = OrderWitness::to_report(Some(&w), 3);
    assert_eq!(report.verdict, Verdict::Fail);
}

#[test]
fn equality_has_no_order_property() {
    let t = builtin("equality", 6).unwrap();
    for mask in 0..4u32 {
        let phi: Vec<u32> = (0..2).filter(|b| mask & (1 << b) != 0).collect();
        assert_eq!(order_property(&t, 2, &phi, 3).unwrap(), None, "phi = {phi:?}");
    }
}

#[test]
fn random_graph_edge_orders() {
    let t = builtin("random_graph", 6).unwrap();
    let edge = t.lookup(2, "{1}{2} E:1-2").unwrap();
    let w = order_property(&t, 2, &[edge], 3).unwrap().expect("a witness");
    check_order_witness(&t, &HashSet::from([edge]), &w);
}

#[test]
fn order_property_on_pairs_of_pairs() {
    let t = builtin("dlo", 4).unwrap();
    // (x1, x2) < (y1, y2) read as x1 < y1, with every other comparison free
    let phi: Vec<u32> = (0..t.level_size(4) as u32)
        .filter(|&x| t.label(2, restrict(&t, 4, x, &[1, 3])) == "x1<x2")
        .collect();
    let w = order_property(&t, 4, &phi, 1).unwrap().expect("a witness");
    check_order_witness(&t, &phi.iter().copied().collect(), &w);
}

#[test]
fn dlo_chain_is_order_but_not_set_indiscernible() {
    let t = builtin("dlo", 6).unwrap();
    let w = indiscernible_gap(&t, 1, 3).unwrap().expect("a witness");
    assert!(["x1<x2<x3", "x3<x2<x1"].contains(&w.label.as_str()), "{}", w.label);
    assert!(order_coherent(&t, 1, 3, w.element));
    assert!(!set_indiscernible(&t, 1, 3, w.element));
    assert_ne!(w.label, w.permuted_label);
    assert_eq!(IndiscernibleWitness::to_report(Some(&w), 1, 3).verdict, Verdict::Fail);
}

#[test]
fn equality_sequences_are_set_indiscernible() {
    let t = builtin("equality", 6).unwrap();
    for (width, length) in [(1, 3), (1, 6), (2, 3)] {
        assert_eq!(indiscernible_gap(&t, width, length).unwrap(), None);
        assert!(!brute_gap(&t, width, length));
    }
}

#[test]
fn random_graph_single_vertices_have_no_gap() {
    // pair types of the random graph are symmetric, so a coherent sequence of
    // single vertices is fixed by every permutation
    let t = builtin("random_graph", 6).unwrap();
    assert_eq!(indiscernible_gap(&t, 1, 3).unwrap(), None);
    assert!(!brute_gap(&t, 1, 3));
}

#[test]
fn random_graph_pairs_have_a_gap() {
    let t = builtin("random_graph", 6).unwrap();
    let w = indiscernible_gap(&t, 2, 3).unwrap().expect("a witness");
    assert!(order_coherent(&t, 2, 3, w.element));
    assert!(!set_indiscernible(&t, 2, 3, w.element));
}

#[test]
fn gap_search_agrees_with_brute_force() {
    for name in ["equality", "dlo", "random_graph", "vect_f2"] {
        let t = builtin(name, 4).unwrap();
        for (width, length) in [(1, 2), (1, 3), (1, 4), (2, 2)] {
            let found = indiscernible_gap(&t, width, length).unwrap().is_some();
            assert_eq!(found, brute_gap(&t, width, length), "{name} width {width} length {length}");
        }
    }
}

#[test]
fn dividing_in_equality() {
    let t = builtin("equality", 6).unwrap();
    let eq = t.lookup(2, "{1,2}").unwrap();
    let ne = t.lookup(2, "{1}{2}").unwrap();
    let r = divides_at_level(&t, &eq, 1, 1, 2, 2).unwrap();
    assert!(r.divides);
    assert_eq!(r.pattern.as_deref(), Some("{1}{2}"));
    assert_eq!(r.to_report("{1,2}", 1, 1).verdict, Verdict::Fail);
    let r = divides_at_level(&t, &ne, 1, 1, 3, 3).unwrap();
    assert!(!r.divides);
    assert!(r.patterns_checked > 0);
    assert!(r.to_report("{1}{2}", 1, 1).passed());
}

#[test]
fn dividing_in_dlo() {
    let t = builtin("dlo", 5).unwrap();
    let lt = t.lookup(2, "x1<x2").unwrap();
    let eq = t.lookup(2, "x1=x2").unwrap();
    assert!(!divides_at_level(&t, &lt, 1, 1, 3, 2).unwrap().divides);
    assert!(divides_at_level(&t, &eq, 1, 1, 2, 2).unwrap().divides);
}

#[test]
fn preconditions_are_checked() {
    let t = builtin("equality", 4).unwrap();
    assert!(order_property(&t, 2, &[0], 3).is_err());
    assert!(indiscernible_gap(&t, 0, 3).is_err());
    assert!(indiscernible_gap(&t, 2, 3).is_err());
    assert!(divides_at_level(&t, &0, 1, 1, 2, 3).is_err());
}
