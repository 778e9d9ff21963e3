use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::oracle::DEFAULT_CAP;
use crate::symset::{tuple_label, TruncatedSymSS};

/// Orbits of a permutation group acting diagonally on tuples of points.
#[derive(Clone, Debug)]
pub struct OrbitQuotient {
    pub theory: TruncatedSymSS,
    /// For each level `n`, the orbit index of every tuple, tuples coded in base
    /// `|points|` with the first coordinate most significant.
    pub orbit_of: Vec<Vec<u32>>,
}

fn check_group(size: usize, group: &[Vec<usize>]) -> Result<()> {
    let set: HashSet<&Vec<usize>> = group.iter().collect();
    for g in group {
        let mut seen = vec![false; size];
        if g.len() != size || g.iter().any(|&v| v >= size || std::mem::replace(&mut seen[v], true)) {
            return Err(Error::NotAGroup(format!("{g:?} is not a permutation of {size} points")));
        }
    }
    let identity: Vec<usize> = (0..size).collect();
    if !set.contains(&identity) {
        return Err(Error::NotAGroup("identity is missing".into()));
    }
    for g in group {
        let mut inverse = vec![0; size];
        for (x, &y) in g.iter().enumerate() {
            inverse[y] = x;
        }
        if !set.contains(&inverse) {
            return Err(Error::NotAGroup(format!("inverse of {g:?} is missing")));
        }
        for h in group {
            let gh: Vec<usize> = h.iter().map(|&x| g[x]).collect();
            if !set.contains(&gh) {
                return Err(Error::NotAGroup(format!("composite of {g:?} and {h:?} is missing")));
            }
        }
    }
    Ok(())
}

fn decode(mut code: usize, n: usize, base: usize, out: &mut [usize]) {
    for slot in out[..n].iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
}

pub fn orbit_quotient(
    name: &str,
    points: &[String],
    group: &[Vec<usize>],
    max_dim: usize,
    cap: usize,
) -> Result<OrbitQuotient> {
    let base = points.len();
    if base == 0 {
        return Err(Error::InvalidArgument("no points to act on".into()));
    }
    check_group(base, group)?;
    let mut orbit_of = Vec::with_capacity(max_dim);
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(max_dim);
    let mut tuple = vec![0usize; max_dim];
    for n in 1..=max_dim {
        let size = base.checked_pow(n as u32).filter(|&s| s <= cap).ok_or(Error::CapExceeded {
            level: n,
            size: base.checked_pow(n as u32).unwrap_or(usize::MAX),
            cap,
        })?;
        let mut orbit = vec![u32::MAX; size];
        let mut level_reps = Vec::new();
        for code in 0..size {
            if orbit[code] != u32::MAX {
                continue;
            }
            let id = level_reps.len() as u32;
            level_reps.push(code);
            decode(code, n, base, &mut tuple);
            for g in group {
                let image = tuple[..n].iter().fold(0usize, |acc, &p| acc * base + g[p]);
                orbit[image] = id;
            }
        }
        orbit_of.push(orbit);
        reps.push(level_reps);
    }
    let ids = reps
        .iter()
        .enumerate()
        .map(|(i, level)| {
            level
                .iter()
                .map(|&code| {
                    let mut t = vec![0; i + 1];
                    decode(code, i + 1, base, &mut t);
                    tuple_label(&t, points)
                })
                .collect()
        })
        .collect();
    let theory = TruncatedSymSS::from_action(name, max_dim, ids, |g, n, x| {
        let mut t = vec![0; n];
        decode(reps[n - 1][x as usize], n, base, &mut t);
        let map = g.map_at(n);
        let image = map.values().iter().fold(0usize, |acc, &v| acc * base + t[v]);
        orbit_of[g.output_level(n) - 1][image]
    })?;
    Ok(OrbitQuotient { theory, orbit_of })
}

/// Level `n` is the set of orbits of the diagonal action of `group` on `points^n`.
pub fn simplicial_quotient(points: &[String], group: &[Vec<usize>], max_dim: usize) -> Result<TruncatedSymSS> {
    Ok(orbit_quotient("quotient", points, group, max_dim, DEFAULT_CAP)?.theory)
}

/// The quotient of the group's own tuples by left multiplication.
///
/// `multiplication[g][h]` is the index of `g * h`.
pub fn classifying_space(elements: &[String], multiplication: &[Vec<usize>], max_dim: usize) -> Result<TruncatedSymSS> {
    let size = elements.len();
    if multiplication.len() != size {
        return Err(Error::NotAGroup("multiplication table has the wrong number of rows".into()));
    }
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                let (ab, bc) = (multiplication[a][b], multiplication[b][c]);
                if ab >= size || bc >= size || multiplication[ab][c] != multiplication[a][bc] {
                    return Err(Error::NotAGroup("multiplication is not associative".into()));
                }
            }
        }
    }
    let left: Vec<Vec<usize>> = multiplication.to_vec();
    Ok(orbit_quotient("classifying_space", elements, &left, max_dim, DEFAULT_CAP)?.theory)
}

/// Elements and multiplication table of the cyclic group of the given order.
pub fn cyclic_group(order: usize) -> (Vec<String>, Vec<Vec<usize>>) {
    let names = (0..order).map(|i| i.to_string()).collect();
    let table = (0..order).map(|a| (0..order).map(|b| (a + b) % order).collect()).collect();
    (names, table)
}
