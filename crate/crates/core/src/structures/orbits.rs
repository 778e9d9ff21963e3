use std::sync::Arc;

use crate::builtin::orbit_quotient;
use crate::error::{Error, Result};
use crate::oracle::DEFAULT_CAP;
use crate::symset::{SimplicialMapHandle, TruncatedSymSS};

use super::{automorphisms, FinStructure, Permutation, DEFAULT_AUTOMORPHISM_BOUND};

/// The theory of a finite structure computed as automorphism orbits.
#[derive(Clone, Debug)]
pub struct OrbitTheory {
    pub group: Vec<Permutation>,
    pub theory: Arc<TruncatedSymSS>,
    /// The representable functor of the domain: level `n` is all `n`-tuples.
    pub tuples: Arc<TruncatedSymSS>,
    /// Sends each tuple to its orbit.
    pub projection: SimplicialMapHandle,
}

impl OrbitTheory {
    /// Orbit of the tuple with the given point indices.
    pub fn orbit_of(&self, tuple: &[usize]) -> u32 {
        let base = self.tuples.level_size(1);
        let code = tuple.iter().fold(0usize, |acc, &p| acc * base + p);
        self.projection.apply(tuple.len(), code as u32)
    }
}

pub fn orbit_theory(m: &FinStructure, max_dim: usize) -> Result<OrbitTheory> {
    orbit_theory_with_cap(m, max_dim, DEFAULT_CAP)
}

pub fn orbit_theory_with_cap(m: &FinStructure, max_dim: usize, cap: usize) -> Result<OrbitTheory> {
    let group = automorphisms(m, DEFAULT_AUTOMORPHISM_BOUND)?;
    let quotient = orbit_quotient("orbits", &m.domain, &group, max_dim, cap)?;
    let theory = Arc::new(quotient.theory);
    let tuples = Arc::new(TruncatedSymSS::representable(&m.domain, max_dim, cap)?.with_name("tuples"));
    let projection = SimplicialMapHandle::new(tuples.clone(), theory.clone(), quotient.orbit_of)?;
    let report = projection.validate();
    if !report.passed() {
        return Err(Error::UnvalidatedMap {
            witnesses: report.witnesses.len(),
        });
    }
    Ok(OrbitTheory {
        group,
        theory,
        tuples,
        projection,
    })
}
