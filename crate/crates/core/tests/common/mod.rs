#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use fotheory::builtin::builtin;
use fotheory::structures::FinStructure;
use fotheory::{FinSetMap, Generator, SimplicialMapHandle, TruncatedSymSS};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/structures")
}

pub fn structure(name: &str) -> FinStructure {
    let text = std::fs::read_to_string(data_dir().join(format!("{name}.json"))).unwrap();
    FinStructure::from_json(&text).unwrap()
}

/// Every fixture structure, sorted by name.
pub fn structures() -> Vec<(String, FinStructure)> {
    let mut names: Vec<String> = std::fs::read_dir(data_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), structure(&n))).collect()
}

/// dlo with every strict 3-chain removed.
pub fn punctured_dlo(max_dim: usize) -> TruncatedSymSS {
    builtin("dlo", max_dim).unwrap().puncture(3, "x1<x2<x3").unwrap()
}

/// The representable functor of one point mapped to the all-equal types of equality.
pub fn point_into_equality(max_dim: usize) -> SimplicialMapHandle {
    let source = Arc::new(TruncatedSymSS::representable(&["a".to_string()], max_dim, 10).unwrap());
    let target = Arc::new(builtin("equality", max_dim).unwrap());
    let diagonal: Vec<u32> = (1..=max_dim)
        .map(|n| {
            let label = format!("{{{}}}", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(","));
            target.lookup(n, &label).unwrap()
        })
        .collect();
    SimplicialMapHandle::from_fn(source, target, max_dim, |n, _| diagonal[n - 1]).unwrap()
}

/// Whether equal labels give a levelwise bijection commuting with every generator.
pub fn same_by_labels(a: &TruncatedSymSS, b: &TruncatedSymSS) -> bool {
    if a.level_sizes() != b.level_sizes() {
        return false;
    }
    let d = a.max_dim();
    let mut to_b = Vec::with_capacity(d);
    for n in 1..=d {
        let mut level = Vec::with_capacity(a.level_size(n));
        for x in 0..a.level_size(n) as u32 {
            match b.index_of(n, a.label(n, x)) {
                Some(y) => level.push(y),
                None => return false,
            }
        }
        to_b.push(level);
    }
    (1..=d).all(|n| {
        Generator::all_at(n, d).into_iter().all(|g| {
            let out = g.output_level(n);
            let ta = a.generator_table(g, n);
            let tb = b.generator_table(g, n);
            (0..a.level_size(n)).all(|x| to_b[out - 1][ta[x] as usize] == tb[to_b[n - 1][x] as usize])
        })
    })
}

pub fn map(n: usize, values: &[usize]) -> FinSetMap {
    FinSetMap::from_one_based(n, values).unwrap()
}
