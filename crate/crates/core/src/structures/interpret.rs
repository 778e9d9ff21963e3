use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

use super::{DefinableSet, FinStructure, OrbitTheory, Relation};

/// A structure obtained from another one together with the connecting map.
///
/// For a substructure `map[i]` is the original index of new point `i`; for a
/// quotient `map[p]` is the class of original point `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    pub structure: FinStructure,
    pub map: Vec<usize>,
}

/// The substructure on the points whose type lies in `set` (a subset of level 1).
pub fn induced_substructure(m: &FinStructure, orbits: &OrbitTheory, set: &DefinableSet) -> Result<Interpretation> {
    if set.level != 1 {
        return Err(Error::InvalidArgument(format!(
            "expected a subset of level 1, got level {}",
            set.level
        )));
    }
    let kept: Vec<usize> = (0..m.size()).filter(|&p| set.contains(orbits.orbit_of(&[p]))).collect();
    if kept.is_empty() {
        return Err(Error::EmptyPullback);
    }
    let mut new_index = vec![usize::MAX; m.size()];
    for (i, &p) in kept.iter().enumerate() {
        new_index[p] = i;
    }
    let relations = m
        .relations
        .iter()
        .map(|(name, rel)| {
            let tuples = rel
                .tuples
                .iter()
                .filter(|t| t.iter().all(|&p| new_index[p] != usize::MAX))
                .map(|t| t.iter().map(|&p| new_index[p]).collect())
                .collect();
            (name.clone(), Relation { arity: rel.arity, tuples })
        })
        .collect();
    let domain = kept.iter().map(|&p| m.domain[p].clone()).collect();
    Ok(Interpretation {
        structure: FinStructure::new(domain, relations)?,
        map: kept,
    })
}

/// The quotient by the equivalence relation whose pair types form `set` (a subset of level 2).
pub fn definable_quotient(m: &FinStructure, orbits: &OrbitTheory, set: &DefinableSet) -> Result<Interpretation> {
    if set.level != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a subset of level 2, got level {}",
            set.level
        )));
    }
    let n = m.size();
    let related = |a: usize, b: usize| set.contains(orbits.orbit_of(&[a, b]));
    for a in 0..n {
        if !related(a, a) {
            return Err(Error::NotAnEquivalence(format!("not reflexive at {}", m.domain[a])));
        }
        for b in 0..n {
            if related(a, b) && !related(b, a) {
                return Err(Error::NotAnEquivalence(format!(
                    "not symmetric on ({}, {})",
                    m.domain[a], m.domain[b]
                )));
            }
            for c in 0..n {
                if related(a, b) && related(b, c) && !related(a, c) {
                    return Err(Error::NotAnEquivalence(format!(
                        "not transitive on ({}, {}, {})",
                        m.domain[a], m.domain[b], m.domain[c]
                    )));
                }
            }
        }
    }
    let mut class = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if class[a] == usize::MAX {
            let id = members.len();
            let block: Vec<usize> = (a..n).filter(|&b| related(a, b)).collect();
            for &b in &block {
                class[b] = id;
            }
            members.push(block);
        }
    }
    let domain = members
        .iter()
        .map(|block| {
            if block.len() == 1 {
                m.domain[block[0]].clone()
            } else {
                let names: Vec<&str> = block.iter().map(|&p| m.domain[p].as_str()).collect();
                format!("[{}]", names.join(","))
            }
        })
        .collect();
    let relations: BTreeMap<String, Relation> = m
        .relations
        .iter()
        .map(|(name, rel)| {
            let tuples: BTreeSet<Vec<usize>> = rel.tuples.iter().map(|t| t.iter().map(|&p| class[p]).collect()).collect();
            (name.clone(), Relation { arity: rel.arity, tuples })
        })
        .collect();
    Ok(Interpretation {
        structure: FinStructure::new(domain, relations)?,
        map: class,
    })
}

/// A relation-preserving bijection from `a` onto `b`, if one exists.
pub fn find_isomorphism(a: &FinStructure, b: &FinStructure) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let signature = |m: &FinStructure| -> Vec<(String, usize, usize)> {
        m.relations
            .iter()
            .map(|(k, r)| (k.clone(), r.arity, r.tuples.len()))
            .collect()
    };
    if signature(a) != signature(b) {
        return None;
    }
    fn go(a: &FinStructure, b: &FinStructure, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = image.len();
        if i == a.size() {
            return true;
        }
        for v in 0..a.size() {
            if used[v] {
                continue;
            }
            image.push(v);
            let ok = a.relations.iter().all(|(name, rel)| {
                rel.tuples
                    .iter()
                    .filter(|t| t.iter().all(|&p| p <= i))
                    .all(|t| b.holds(name, &t.iter().map(|&p| image[p]).collect::<Vec<_>>()))
            });
            if ok {
                used[v] = true;
                if go(a, b, image, used) {
                    return true;
                }
                used[v] = false;
            }
            image.pop();
        }
        false
    }
    let mut image = Vec::with_capacity(a.size());
    go(a, b, &mut image, &mut vec![false; a.size()]).then_some(image)
}
