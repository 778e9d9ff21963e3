use crate::finmap::FinSetMap;
use crate::oracle::{Key, TheoryOracle};

/// The theory of dense linear orders without endpoints. Level `n` is the set
/// of weak orders on `{1..n}`, stored as dense rank vectors.
pub struct Dlo;

pub(crate) fn densify(values: impl IntoIterator<Item = u16>) -> Key {
    let values: Vec<u16> = values.into_iter().collect();
    let mut distinct = values.clone();
    distinct.sort_unstable();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).expect("value is present") as u16)
        .collect()
}

/// Rank vectors of length `n` in lexicographic order.
fn weak_orders(n: usize) -> Vec<Key> {
    fn go(prefix: &mut Vec<u16>, used: &mut Vec<u32>, n: usize, out: &mut Vec<Key>) {
        let remaining = n - prefix.len();
        let highest = used.iter().rposition(|&c| c > 0);
        let missing = match highest {
            Some(h) => used[..h].iter().filter(|&&c| c == 0).count(),
            None => 0,
        };
        if missing > remaining {
            return;
        }
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            prefix.push(v as u16);
            used[v] += 1;
            go(prefix, used, n, out);
            used[v] -= 1;
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![0; n], n, &mut out);
    out
}

fn fubini(n: usize) -> Option<usize> {
    let mut a: Vec<u128> = vec![1];
    for m in 1..=n {
        let mut total = 0u128;
        let mut binom = 1u128;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            total += binom * a[m - k];
        }
        a.push(total);
    }
    usize::try_from(a[n]).ok()
}

impl TheoryOracle for Dlo {
    fn name(&self) -> &str {
        "dlo"
    }

    fn enumerate(&self, n: usize) -> Vec<Key> {
        weak_orders(n)
    }

    fn count(&self, n: usize) -> Option<usize> {
        fubini(n)
    }

    fn act(&self, f: &FinSetMap, key: &[u16]) -> Key {
        densify(f.values().iter().map(|&v| key[v]))
    }

    fn label(&self, _n: usize, key: &[u16]) -> String {
        let mut order: Vec<usize> = (0..key.len()).collect();
        order.sort_by_key(|&i| (key[i], i));
        let mut out = String::new();
        for (pos, &i) in order.iter().enumerate() {
            if pos > 0 {
                out.push(if key[order[pos - 1]] == key[i] { '=' } else { '<' });
            }
            out.push_str(&format!("x{}", i + 1));
        }
        out
    }

    fn extensions(&self, _n: usize, key: &[u16]) -> Vec<Key> {
        let ranks = key.iter().map(|&r| r + 1).max().unwrap_or(0);
        let mut out = Vec::with_capacity(2 * ranks as usize + 1);
        for r in 0..=ranks {
            // strictly below every existing rank >= r
            let mut below: Key = key.iter().map(|&v| if v >= r { v + 1 } else { v }).collect();
            below.push(r);
            out.push(below);
            if r < ranks {
                let mut equal = key.to_vec();
                equal.push(r);
                out.push(equal);
            }
        }
        out.sort();
        out
    }

    fn alias(&self, text: &str) -> Option<(usize, String)> {
        match text {
            "<" | "x<y" => Some((2, "x1<x2".into())),
            ">" | "x>y" => Some((2, "x2<x1".into())),
            "=" | "x=y" => Some((2, "x1=x2".into())),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_bell_numbers() {
        let sizes: Vec<usize> = (1..=6).map(|n| Dlo.enumerate(n).len()).collect();
        assert_eq!(sizes, vec![1, 3, 13, 75, 541, 4683]);
        assert_eq!(fubini(8), Some(545_835));
    }

    #[test]
    fn transposition_reverses_a_strict_pair() {
        let swap = FinSetMap::from_one_based(2, &[2, 1]).unwrap();
        let image = Dlo.act(&swap, &[0, 1]);
        assert_eq!(Dlo.label(2, &[0, 1]), "x1<x2");
        assert_eq!(Dlo.label(2, &image), "x2<x1");
    }

    #[test]
    fn extensions_match_filtering() {
        for key in Dlo.enumerate(3) {
            let fast = Dlo.extensions(3, &key);
            let forget = crate::finmap::Generator::Forget(4).map_at(4);
            let slow: Vec<Key> = Dlo.enumerate(4).into_iter().filter(|k| Dlo.act(&forget, k) == key).collect();
            assert_eq!(fast, slow);
        }
    }
}
