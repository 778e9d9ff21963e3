//! Theories given by an enumerator and an action on canonical keys.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::finmap::{FinSetMap, Generator};
use crate::symset::TruncatedSymSS;

/// Default bound on the number of elements materialized per level.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Canonical encoding of a type. Keys of one level are totally ordered.
pub type Key = Vec<u16>;

pub trait TheoryOracle: Send + Sync {
    fn name(&self) -> &str;

    /// All elements of level `n`, each exactly once, in increasing key order.
    fn enumerate(&self, n: usize) -> Vec<Key>;

    /// Number of elements at level `n` without building them, when known.
    fn count(&self, n: usize) -> Option<usize> {
        let _ = n;
        None
    }

    /// Action of `f: {1..m} -> {1..n}` on a key of level `n`.
    fn act(&self, f: &FinSetMap, key: &[u16]) -> Key;

    fn label(&self, n: usize, key: &[u16]) -> String;

    /// Keys of level `n + 1` restricting to `key` on the first `n` coordinates.
    ///
    /// The default filters the enumeration of level `n + 1`.
    fn extensions(&self, n: usize, key: &[u16]) -> Vec<Key> {
        let forget = Generator::Forget(n + 1).map_at(n + 1);
        self.enumerate(n + 1)
            .into_iter()
            .filter(|k| self.act(&forget, k) == key)
            .collect()
    }

    /// Short names accepted on the command line, such as `<` for the strict pair order.
    fn alias(&self, text: &str) -> Option<(usize, String)> {
        let _ = text;
        None
    }
}

/// Materializes an oracle up to `max_dim`, refusing levels above `cap`.
pub fn materialize(oracle: &dyn TheoryOracle, max_dim: usize, cap: usize) -> Result<TruncatedSymSS> {
    let mut keys = Vec::with_capacity(max_dim);
    for n in 1..=max_dim {
        if let Some(size) = oracle.count(n) {
            if size > cap {
                return Err(Error::CapExceeded { level: n, size, cap });
            }
        }
        let level = oracle.enumerate(n);
        if level.len() > cap {
            return Err(Error::CapExceeded {
                level: n,
                size: level.len(),
                cap,
            });
        }
        keys.push(level);
    }
    let index: Vec<HashMap<&Key, u32>> = keys
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, k)| (k, i as u32)).collect())
        .collect();
    let ids = keys
        .iter()
        .enumerate()
        .map(|(i, level)| level.iter().map(|k| oracle.label(i + 1, k)).collect())
        .collect();
    let maps: HashMap<(Generator, usize), FinSetMap> = (1..=max_dim)
        .flat_map(|n| Generator::all_at(n, max_dim).into_iter().map(move |g| ((g, n), g.map_at(n))))
        .collect();
    TruncatedSymSS::from_action(oracle.name(), max_dim, ids, |g, n, x| {
        let image = oracle.act(&maps[&(g, n)], &keys[n - 1][x as usize]);
        index[g.output_level(n) - 1][&image]
    })
}

/// An oracle-backed theory whose levels are enumerated on first use.
pub struct LazyTheory {
    oracle: Arc<dyn TheoryOracle>,
    max_dim: usize,
    levels: Vec<OnceLock<Vec<Key>>>,
}

impl LazyTheory {
    pub fn new(oracle: Arc<dyn TheoryOracle>, max_dim: usize) -> Self {
        Self {
            oracle,
            max_dim,
            levels: (0..max_dim).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn oracle(&self) -> &Arc<dyn TheoryOracle> {
        &self.oracle
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn level(&self, n: usize) -> &[Key] {
        self.levels[n - 1].get_or_init(|| self.oracle.enumerate(n))
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.oracle.count(n).unwrap_or_else(|| self.level(n).len())
    }

    pub fn label(&self, n: usize, key: &[u16]) -> String {
        self.oracle.label(n, key)
    }
}

/// A theory either materialized as tables or evaluated through its oracle.
pub enum Theory {
    Materialized(Arc<TruncatedSymSS>),
    Lazy(Arc<LazyTheory>),
}

impl Theory {
    /// Materializes when every level fits under `cap`, otherwise stays lazy.
    pub fn build(oracle: Arc<dyn TheoryOracle>, max_dim: usize, cap: usize) -> Result<Theory> {
        let fits = (1..=max_dim).all(|n| oracle.count(n).is_some_and(|c| c <= cap));
        if fits {
            return Ok(Theory::Materialized(Arc::new(materialize(oracle.as_ref(), max_dim, cap)?)));
        }
        Ok(Theory::Lazy(Arc::new(LazyTheory::new(oracle, max_dim))))
    }

    pub fn max_dim(&self) -> usize {
        match self {
            Theory::Materialized(t) => t.max_dim(),
            Theory::Lazy(t) => t.max_dim(),
        }
    }

    pub fn materialized(&self) -> Option<&Arc<TruncatedSymSS>> {
        match self {
            Theory::Materialized(t) => Some(t),
            Theory::Lazy(_) => None,
        }
    }
}
