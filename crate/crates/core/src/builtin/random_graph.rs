use crate::finmap::FinSetMap;
use crate::oracle::{Key, TheoryOracle};

use super::{all_restricted_growth, blocks_of, partition_label, restricted_growth, stirling2};

/// The theory of the random graph. Level `n` is a partition of `{1..n}`
/// (which variables are equal) together with a simple graph on the blocks.
///
/// Keys are the restricted growth string followed by one bit per pair of
/// blocks `a < b`, pairs ordered by `b` first, then `a`.
pub struct RandomGraph;

fn pair_index(a: usize, b: usize) -> usize {
    debug_assert!(a < b);
    b * (b - 1) / 2 + a
}

fn split(key: &[u16], n: usize) -> (&[u16], &[u16]) {
    key.split_at(n)
}

fn block_count(rgs: &[u16]) -> usize {
    rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
}

pub(crate) fn adjacent(edges: &[u16], a: usize, b: usize) -> bool {
    a != b && edges[pair_index(a.min(b), a.max(b))] == 1
}

impl TheoryOracle for RandomGraph {
    fn name(&self) -> &str {
        "random_graph"
    }

    fn enumerate(&self, n: usize) -> Vec<Key> {
        let mut out = Vec::new();
        for rgs in all_restricted_growth(n) {
            let r = block_count(&rgs);
            let pairs = r * r.saturating_sub(1) / 2;
            for mask in 0u64..(1u64 << pairs) {
                let mut key = rgs.clone();
                key.extend((0..pairs).map(|p| ((mask >> p) & 1) as u16));
                out.push(key);
            }
        }
        out.sort();
        out
    }

    fn count(&self, n: usize) -> Option<usize> {
        let total: u128 = stirling2(n)
            .iter()
            .enumerate()
            .map(|(r, &s)| s.checked_mul(1u128.checked_shl((r * r.saturating_sub(1) / 2) as u32)?))
            .try_fold(0u128, |acc, term| acc.checked_add(term?))?;
        usize::try_from(total).ok()
    }

    fn act(&self, f: &FinSetMap, key: &[u16]) -> Key {
        let n = f.target_size();
        let (rgs, edges) = split(key, n);
        let old_blocks: Vec<u16> = f.values().iter().map(|&v| rgs[v]).collect();
        let new_rgs = restricted_growth(old_blocks.iter().copied());
        let r = block_count(&new_rgs);
        // old block of each new block
        let mut origin = vec![0usize; r];
        for (j, &b) in new_rgs.iter().enumerate() {
            origin[b as usize] = old_blocks[j] as usize;
        }
        let mut out = new_rgs;
        for b in 1..r {
            for a in 0..b {
                out.push(adjacent(edges, origin[a], origin[b]) as u16);
            }
        }
        out
    }

    fn label(&self, n: usize, key: &[u16]) -> String {
        let (rgs, edges) = split(key, n);
        let blocks = blocks_of(rgs);
        let mut label = partition_label(rgs);
        let mut listed = Vec::new();
        for b in 1..blocks.len() {
            for a in 0..b {
                if adjacent(edges, a, b) {
                    listed.push(format!("{}-{}", blocks[a][0], blocks[b][0]));
                }
            }
        }
        if !listed.is_empty() {
            label.push_str(" E:");
            label.push_str(&listed.join(","));
        }
        label
    }

    fn extensions(&self, n: usize, key: &[u16]) -> Vec<Key> {
        let (rgs, edges) = split(key, n);
        let r = block_count(rgs);
        let mut out = Vec::new();
        for b in 0..r {
            let mut k = rgs.to_vec();
            k.push(b as u16);
            k.extend_from_slice(edges);
            out.push(k);
        }
        for mask in 0u64..(1u64 << r) {
            let mut k = rgs.to_vec();
            k.push(r as u16);
            k.extend_from_slice(edges);
            k.extend((0..r).map(|a| ((mask >> a) & 1) as u16));
            out.push(k);
        }
        out.sort();
        out
    }

    fn alias(&self, text: &str) -> Option<(usize, String)> {
        match text {
            "E" | "xEy" => Some((2, "{1}{2} E:1-2".into())),
            "!E" | "nonE" | "¬E" => Some((2, "{1}{2}".into())),
            "=" | "x=y" => Some((2, "{1,2}".into())),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmap::Generator;

    #[test]
    fn level_sizes() {
        let sizes: Vec<usize> = (1..=5).map(|n| RandomGraph.enumerate(n).len()).collect();
        assert_eq!(sizes, vec![1, 3, 15, 127, 1895]);
        assert_eq!(RandomGraph.count(6), Some(53_071));
    }

    #[test]
    fn extensions_match_filtering() {
        let forget = Generator::Forget(4).map_at(4);
        let level4 = RandomGraph.enumerate(4);
        for key in RandomGraph.enumerate(3) {
            let slow: Vec<Key> = level4.iter().filter(|k| RandomGraph.act(&forget, k) == key).cloned().collect();
            assert_eq!(RandomGraph.extensions(3, &key), slow);
        }
    }

    #[test]
    fn labels_name_edges_by_block_minimum() {
        let key = vec![0, 1, 1, 1];
        assert_eq!(RandomGraph.label(3, &key), "{1}{2,3} E:1-2");
    }
}
