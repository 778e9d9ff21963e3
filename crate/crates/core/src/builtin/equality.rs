use crate::finmap::FinSetMap;
use crate::oracle::{Key, TheoryOracle};

use super::{all_restricted_growth, partition_label, restricted_growth, stirling2};

/// The theory of an infinite set with equality. Level `n` is the set of
/// partitions of `{1..n}`, stored as restricted growth strings.
pub struct Equality;

impl TheoryOracle for Equality {
    fn name(&self) -> &str {
        "equality"
    }

    fn enumerate(&self, n: usize) -> Vec<Key> {
        all_restricted_growth(n)
    }

    fn count(&self, n: usize) -> Option<usize> {
        usize::try_from(stirling2(n).iter().sum::<u128>()).ok()
    }

    fn act(&self, f: &FinSetMap, key: &[u16]) -> Key {
        restricted_growth(f.values().iter().map(|&v| key[v]))
    }

    fn label(&self, _n: usize, key: &[u16]) -> String {
        partition_label(key)
    }

    fn extensions(&self, _n: usize, key: &[u16]) -> Vec<Key> {
        let blocks = key.iter().map(|&b| b + 1).max().unwrap_or(0);
        (0..=blocks)
            .map(|b| {
                let mut k = key.to_vec();
                k.push(b);
                k
            })
            .collect()
    }

    fn alias(&self, text: &str) -> Option<(usize, String)> {
        match text {
            "=" | "x=y" => Some((2, "{1,2}".into())),
            "!=" | "≠" | "x≠y" | "x!=y" => Some((2, "{1}{2}".into())),
            _ => None,
        }
    }
}
