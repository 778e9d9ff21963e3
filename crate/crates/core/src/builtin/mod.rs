//! Built-in theories with finite type spaces in every dimension.

mod dlo;
mod equality;
mod point;
mod quotient;
mod random_graph;
mod vect_f2;

use std::sync::Arc;

pub use dlo::Dlo;
pub use equality::Equality;
pub use point::Point;
pub use quotient::{classifying_space, cyclic_group, orbit_quotient, simplicial_quotient, OrbitQuotient};
pub use random_graph::RandomGraph;
pub use vect_f2::{relation_set, VectF2};

use crate::error::{Error, Result};
use crate::oracle::{materialize, TheoryOracle, DEFAULT_CAP};
use crate::symset::TruncatedSymSS;

pub const BUILTIN_NAMES: [&str; 5] = ["equality", "dlo", "random_graph", "vect_f2", "point"];

pub fn oracle(name: &str) -> Result<Arc<dyn TheoryOracle>> {
    Ok(match name {
        "equality" => Arc::new(Equality),
        "dlo" => Arc::new(Dlo),
        "random_graph" => Arc::new(RandomGraph),
        "vect_f2" => Arc::new(VectF2),
        "point" => Arc::new(Point),
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    })
}

/// The truncation each builtin ships with.
pub fn default_max_dim(name: &str) -> Result<usize> {
    match name {
        "equality" | "dlo" | "random_graph" | "point" => Ok(6),
        "vect_f2" => Ok(5),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

pub fn builtin(name: &str, max_dim: usize) -> Result<TruncatedSymSS> {
    builtin_with_cap(name, max_dim, DEFAULT_CAP)
}

pub fn builtin_with_cap(name: &str, max_dim: usize, cap: usize) -> Result<TruncatedSymSS> {
    materialize(oracle(name)?.as_ref(), max_dim, cap)
}

/// Restricted growth string of a sequence: blocks numbered by first occurrence.
pub(crate) fn restricted_growth<T: PartialEq + Copy>(values: impl IntoIterator<Item = T>) -> Vec<u16> {
    let mut seen: Vec<T> = Vec::new();
    values
        .into_iter()
        .map(|v| match seen.iter().position(|&s| s == v) {
            Some(i) => i as u16,
            None => {
                seen.push(v);
                (seen.len() - 1) as u16
            }
        })
        .collect()
}

/// All restricted growth strings of length `n`, in lexicographic order.
pub(crate) fn all_restricted_growth(n: usize) -> Vec<Vec<u16>> {
    fn go(prefix: &mut Vec<u16>, blocks: u16, n: usize, out: &mut Vec<Vec<u16>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=blocks {
            prefix.push(b);
            go(prefix, blocks.max(b + 1), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

/// Blocks of a restricted growth string as lists of one-based positions.
pub(crate) fn blocks_of(rgs: &[u16]) -> Vec<Vec<usize>> {
    let count = rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
    let mut blocks = vec![Vec::new(); count];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b as usize].push(i + 1);
    }
    blocks
}

pub(crate) fn partition_label(rgs: &[u16]) -> String {
    blocks_of(rgs)
        .iter()
        .map(|b| {
            let items: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect()
}

/// Stirling numbers of the second kind `S(n, k)` for `k <= n`.
pub(crate) fn stirling2(n: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for i in 1..=n {
        let mut next = vec![0u128; i + 1];
        for k in 1..=i {
            next[k] = k as u128 * row.get(k).copied().unwrap_or(0) + row[k - 1];
        }
        row = next;
    }
    row
}
