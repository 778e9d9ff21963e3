use crate::finmap::FinSetMap;
use crate::oracle::{Key, TheoryOracle};

/// The theory of infinite vector spaces over F2. The type of `n` vectors is
/// the subspace of `F2^n` of index sets summing to zero, stored as its reduced
/// row echelon basis (bitmasks, pivot = lowest set bit), sorted.
pub struct VectF2;

fn reduce(mut v: u16, basis: &[u16]) -> u16 {
    for &row in basis {
        let pivot = row & row.wrapping_neg();
        if v & pivot != 0 {
            v ^= row;
        }
    }
    v
}

/// Reduced row echelon basis of the span of `vectors`.
pub(crate) fn echelon(vectors: impl IntoIterator<Item = u16>) -> Key {
    let mut basis: Vec<u16> = Vec::new();
    for v in vectors {
        let v = reduce(v, &basis);
        if v != 0 {
            let pivot = v & v.wrapping_neg();
            for row in basis.iter_mut() {
                if *row & pivot != 0 {
                    *row ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_unstable();
    basis
}

/// Every index set (as a bitmask) summing to zero for the given type.
pub fn relation_set(key: &[u16]) -> Vec<u16> {
    let mut members = vec![0u16];
    for &row in key {
        let more: Vec<u16> = members.iter().map(|&m| m ^ row).collect();
        members.extend(more);
    }
    members.sort_unstable();
    members
}

fn subspaces(n: usize) -> Vec<Key> {
    let mut out = Vec::new();
    for pivots in 0u32..(1 << n) {
        let pivot_list: Vec<usize> = (0..n).filter(|&i| pivots >> i & 1 == 1).collect();
        // free positions of each row: above its pivot and not a pivot
        let free: Vec<Vec<usize>> = pivot_list
            .iter()
            .map(|&p| (p + 1..n).filter(|&q| pivots >> q & 1 == 0).collect())
            .collect();
        let total_free: usize = free.iter().map(Vec::len).sum();
        for choice in 0u64..(1u64 << total_free) {
            let mut bit = 0;
            let mut rows = Vec::with_capacity(pivot_list.len());
            for (row, &p) in pivot_list.iter().enumerate() {
                let mut v = 1u16 << p;
                for &q in &free[row] {
                    if choice >> bit & 1 == 1 {
                        v |= 1 << q;
                    }
                    bit += 1;
                }
                rows.push(v);
            }
            rows.sort_unstable();
            out.push(rows);
        }
    }
    out.sort();
    out
}

fn galois_number(n: usize) -> Option<usize> {
    // sum over k of the Gaussian binomial [n choose k]_2
    let mut total: u128 = 0;
    for k in 0..=n {
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..k {
            num = num.checked_mul((1u128 << (n - i)) - 1)?;
            den = den.checked_mul((1u128 << (i + 1)) - 1)?;
        }
        total += num / den;
    }
    usize::try_from(total).ok()
}

impl TheoryOracle for VectF2 {
    fn name(&self) -> &str {
        "vect_f2"
    }

    fn enumerate(&self, n: usize) -> Vec<Key> {
        assert!(n <= 16, "vect_f2 keys hold at most 16 coordinates");
        subspaces(n)
    }

    fn count(&self, n: usize) -> Option<usize> {
        galois_number(n)
    }

    fn act(&self, f: &FinSetMap, key: &[u16]) -> Key {
        let m = f.source_size();
        let pushed = |t: u16| {
            (0..m)
                .filter(|&j| t >> j & 1 == 1)
                .fold(0u16, |acc, j| acc ^ (1 << f.apply(j)))
        };
        echelon((1u16..(1u16 << m)).filter(|&t| reduce(pushed(t), key) == 0))
    }

    fn label(&self, _n: usize, key: &[u16]) -> String {
        if key.is_empty() {
            return "indep".into();
        }
        key.iter()
            .map(|&row| {
                let terms: Vec<String> = (0..16).filter(|&i| row >> i & 1 == 1).map(|i| format!("x{}", i + 1)).collect();
                format!("{}=0", terms.join("+"))
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    fn alias(&self, text: &str) -> Option<(usize, String)> {
        match text {
            "=" | "x=y" => Some((2, "x1+x2=0".into())),
            _ => None,
        }
    }
}
