//! Finite relational structures and the theories they generate.

mod closure;
mod interpret;
mod orbits;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symset::TruncatedSymSS;

pub use closure::{definable_closure, definable_closure_theory, ClosureTheory};
pub use interpret::{definable_quotient, find_isomorphism, induced_substructure, Interpretation};
pub use orbits::{orbit_theory, orbit_theory_with_cap, OrbitTheory};

/// Largest domain for which automorphisms are searched by default.
pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite structure in a purely relational language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinStructure {
    pub domain: Vec<String>,
    pub relations: BTreeMap<String, Relation>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    domain: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, RelationDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    arity: usize,
    tuples: Vec<Vec<String>>,
}

impl FinStructure {
    /// A structure with no relations.
    pub fn pure_set(size: usize) -> Self {
        Self {
            domain: (0..size).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
            relations: BTreeMap::new(),
        }
    }

    pub fn new(domain: Vec<String>, relations: BTreeMap<String, Relation>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &domain {
            if !seen.insert(p) {
                return Err(Error::MalformedStructure(format!("domain: duplicate point `{p}`")));
            }
        }
        if domain.is_empty() {
            return Err(Error::MalformedStructure("domain: must not be empty".into()));
        }
        for (name, rel) in &relations {
            if rel.arity == 0 {
                return Err(Error::MalformedStructure(format!("relations.{name}.arity: must be positive")));
            }
            for (i, t) in rel.tuples.iter().enumerate() {
                if t.len() != rel.arity || t.iter().any(|&p| p >= domain.len()) {
                    return Err(Error::MalformedStructure(format!(
                        "relations.{name}.tuples[{i}]: does not match arity {} over the domain",
                        rel.arity
                    )));
                }
            }
        }
        Ok(Self { domain, relations })
    }

    /// Adds a relation given by point names.
    pub fn with_relation(mut self, name: &str, arity: usize, tuples: &[&[&str]]) -> Result<Self> {
        let index: HashMap<&str, usize> = self.domain.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let mut set = BTreeSet::new();
        for t in tuples {
            let t: Option<Vec<usize>> = t.iter().map(|p| index.get(p).copied()).collect();
            set.insert(t.ok_or_else(|| Error::MalformedStructure(format!("relations.{name}: unknown point")))?);
        }
        self.relations.insert(name.to_string(), Relation { arity, tuples: set });
        Self::new(self.domain, self.relations)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StructureDoc = serde_json::from_str(text).map_err(|e| Error::MalformedStructure(e.to_string()))?;
        let index: HashMap<&str, usize> = doc.domain.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let mut relations = BTreeMap::new();
        for (name, rel) in &doc.relations {
            let mut tuples = BTreeSet::new();
            for (i, t) in rel.tuples.iter().enumerate() {
                if t.len() != rel.arity {
                    return Err(Error::MalformedStructure(format!(
                        "relations.{name}.tuples[{i}]: has {} entries, arity is {}",
                        t.len(),
                        rel.arity
                    )));
                }
                let mut coded = Vec::with_capacity(t.len());
                for (j, p) in t.iter().enumerate() {
                    coded.push(*index.get(p.as_str()).ok_or_else(|| {
                        Error::MalformedStructure(format!("relations.{name}.tuples[{i}][{j}]: unknown point `{p}`"))
                    })?);
                }
                tuples.insert(coded);
            }
            relations.insert(name.clone(), Relation { arity: rel.arity, tuples });
        }
        Self::new(doc.domain, relations)
    }

    pub fn to_json(&self) -> String {
        let doc = StructureDoc {
            domain: self.domain.clone(),
            relations: self
                .relations
                .iter()
                .map(|(name, rel)| {
                    let tuples = rel
                        .tuples
                        .iter()
                        .map(|t| t.iter().map(|&p| self.domain[p].clone()).collect())
                        .collect();
                    (name.clone(), RelationDoc { arity: rel.arity, tuples })
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("structures serialize")
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn max_arity(&self) -> usize {
        self.relations.values().map(|r| r.arity).max().unwrap_or(0)
    }

    pub fn holds(&self, relation: &str, tuple: &[usize]) -> bool {
        self.relations.get(relation).is_some_and(|r| r.tuples.contains(tuple))
    }
}

/// A permutation of the domain, as the image of each point.
pub type Permutation = Vec<usize>;

/// Relation tuples grouped by their largest point, each with its relation.
type Due<'a> = Vec<Vec<(&'a BTreeSet<Vec<usize>>, &'a Vec<usize>)>>;

/// The automorphism group, found by backtracking over partial bijections.
pub fn automorphisms(m: &FinStructure, bound: usize) -> Result<Vec<Permutation>> {
    let n = m.size();
    if n > bound {
        return Err(Error::DomainTooLarge { size: n, bound });
    }
    // tuples become checkable once their largest point is assigned
    let mut due: Due = vec![Vec::new(); n];
    for rel in m.relations.values() {
        for t in &rel.tuples {
            due[*t.iter().max().expect("arity is positive")].push((&rel.tuples, t));
        }
    }
    fn go(
        i: usize,
        image: &mut Vec<usize>,
        used: &mut [bool],
        due: &Due,
        out: &mut Vec<Permutation>,
    ) {
        let n = used.len();
        if i == n {
            out.push(image.clone());
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            image.push(v);
            let ok = due[i].iter().all(|(set, t)| {
                let mapped: Vec<usize> = t.iter().map(|&p| image[p]).collect();
                set.contains(&mapped)
            });
            if ok {
                used[v] = true;
                go(i + 1, image, used, due, out);
                used[v] = false;
            }
            image.pop();
        }
    }
    let mut out = Vec::new();
    go(0, &mut Vec::with_capacity(n), &mut vec![false; n], &due, &mut out);
    Ok(out)
}

/// A subset of one level of a theory, such as the extension of a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinableSet {
    pub level: usize,
    pub elements: BTreeSet<u32>,
}

impl DefinableSet {
    pub fn new(t: &TruncatedSymSS, level: usize, elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        let size = t.level_size(level);
        if level == 0 || level > t.max_dim() {
            return Err(Error::DimensionExceedsTruncation {
                requested: level,
                max_dim: t.max_dim(),
            });
        }
        let elements: BTreeSet<u32> = elements.into_iter().collect();
        if let Some(&bad) = elements.iter().find(|&&x| x as usize >= size) {
            return Err(Error::InvalidArgument(format!("element {bad} is not in level {level}")));
        }
        Ok(Self { level, elements })
    }

    pub fn from_labels(t: &TruncatedSymSS, level: usize, labels: &[&str]) -> Result<Self> {
        let elements = labels.iter().map(|l| t.lookup(level, l)).collect::<Result<Vec<_>>>()?;
        Self::new(t, level, elements)
    }

    pub fn all(t: &TruncatedSymSS, level: usize) -> Result<Self> {
        Self::new(t, level, 0..t.level_size(level) as u32)
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.contains(&x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> FinStructure {
        FinStructure::pure_set(2).with_relation("R", 2, &[&["a", "b"]]).unwrap()
    }

    fn three_cycle() -> FinStructure {
        FinStructure::pure_set(3)
            .with_relation("R", 2, &[&["a", "b"], &["b", "c"], &["c", "a"]])
            .unwrap()
    }

    #[test]
    fn automorphism_groups() {
        assert_eq!(automorphisms(&FinStructure::pure_set(2), 10).unwrap().len(), 2);
        assert_eq!(automorphisms(&edge(), 10).unwrap(), vec![vec![0, 1]]);
        let c3 = automorphisms(&three_cycle(), 10).unwrap();
        assert_eq!(c3, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
    }

    #[test]
    fn automorphism_bound() {
        assert!(matches!(
            automorphisms(&FinStructure::pure_set(11), 10),
            Err(Error::DomainTooLarge { size: 11, bound: 10 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = three_cycle();
        assert_eq!(FinStructure::from_json(&m.to_json()).unwrap(), m);
        let text = r#"{"domain": ["a","b"], "relations": {"R": {"arity": 2, "tuples": [["a","b"]]}}}"#;
        assert_eq!(FinStructure::from_json(text).unwrap(), edge());
    }

    #[test]
    fn malformed_structures_name_the_field() {
        let text = r#"{"domain": ["a"], "relations": {"R": {"arity": 2, "tuples": [["a","z"]]}}}"#;
        let err = FinStructure::from_json(text).unwrap_err().to_string();
        assert!(err.contains("relations.R.tuples[0][1]"), "{err}");
        let err = FinStructure::from_json("{\"domain\": [\"a\"],\n \"relatons\": {}}").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }
}
