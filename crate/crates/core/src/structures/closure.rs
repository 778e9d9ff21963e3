//! Definable sets of a finite structure computed without automorphisms.
//!
//! Each level `n` carries a partition of `M^n` whose blocks are the atoms of
//! the Boolean algebra of definable sets found so far. Starting from atomic
//! formulas (relations and equalities under every substitution of variables),
//! the partitions are refined until stable under preimages along the
//! generator maps and under images along the forgetful projection from the
//! level above.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finmap::{all_maps, Generator};
use crate::oracle::DEFAULT_CAP;
use crate::symset::{tuple_label, TruncatedSymSS};

use super::FinStructure;

#[derive(Clone, Debug)]
pub struct ClosureTheory {
    pub theory: TruncatedSymSS,
    /// For each level up to `max_dim`, the atom containing each tuple.
    pub class_of: Vec<Vec<u32>>,
    /// Number of levels used while computing the fixpoint.
    pub working_levels: usize,
}

fn decode(mut code: usize, n: usize, base: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    t
}

fn encode(t: impl IntoIterator<Item = usize>, base: usize) -> usize {
    t.into_iter().fold(0, |acc, p| acc * base + p)
}

/// Numbers signatures by first occurrence.
fn renumber<S: std::hash::Hash + Eq>(signatures: Vec<S>) -> (Vec<u32>, usize) {
    let mut ids: HashMap<S, u32> = HashMap::new();
    let mut out = Vec::with_capacity(signatures.len());
    for s in signatures {
        let next = ids.len() as u32;
        out.push(*ids.entry(s).or_insert(next));
    }
    (out, ids.len())
}

pub fn definable_closure_theory(m: &FinStructure, max_dim: usize) -> Result<TruncatedSymSS> {
    Ok(definable_closure(m, max_dim, DEFAULT_CAP)?.theory)
}

/// Works on levels up to `max(max_dim, max arity, |M|)` when that fits under
/// `cap`, which makes the atoms exactly the automorphism orbits; otherwise on
/// levels up to `max(max_dim, max arity)`.
pub fn definable_closure(m: &FinStructure, max_dim: usize, cap: usize) -> Result<ClosureTheory> {
    let base = m.size();
    let fits = |l: usize| base.checked_pow(l as u32).is_some_and(|s| s <= cap);
    let mut levels = max_dim.max(m.max_arity());
    if fits(levels.max(base)) {
        levels = levels.max(base);
    }
    if !fits(levels) {
        let level = (1..=levels).find(|&l| !fits(l)).expect("some level is too large");
        return Err(Error::CapExceeded {
            level,
            size: base.checked_pow(level as u32).unwrap_or(usize::MAX),
            cap,
        });
    }
    let sizes: Vec<usize> = (1..=levels).map(|n| base.pow(n as u32)).collect();

    // atomic formulas: equalities and every substitution instance of every relation
    let mut classes: Vec<Vec<u32>> = Vec::with_capacity(levels);
    let mut counts = Vec::with_capacity(levels);
    for n in 1..=levels {
        let instances: Vec<(&str, Vec<usize>)> = m
            .relations
            .iter()
            .flat_map(|(name, rel)| all_maps(rel.arity, n).map(move |g| (name.as_str(), g.values().to_vec())))
            .collect();
        let signatures: Vec<Vec<usize>> = (0..sizes[n - 1])
            .map(|code| {
                let t = decode(code, n, base);
                let mut sig: Vec<usize> = crate::builtin::restricted_growth(t.iter().copied())
                    .into_iter()
                    .map(usize::from)
                    .collect();
                sig.extend(instances.iter().map(|(name, g)| {
                    let image: Vec<usize> = g.iter().map(|&v| t[v]).collect();
                    m.holds(name, &image) as usize
                }));
                sig
            })
            .collect();
        let (ids, count) = renumber(signatures);
        classes.push(ids);
        counts.push(count);
    }

    loop {
        let mut changed = false;
        for n in 1..=levels {
            let gens = Generator::all_at(n, levels);
            let maps: Vec<(usize, Vec<usize>)> = gens
                .iter()
                .map(|g| (g.output_level(n), g.map_at(n).values().to_vec()))
                .collect();
            let signatures: Vec<Vec<u32>> = (0..sizes[n - 1])
                .map(|code| {
                    let t = decode(code, n, base);
                    let mut sig = vec![classes[n - 1][code]];
                    for (out, values) in &maps {
                        sig.push(classes[out - 1][encode(values.iter().map(|&v| t[v]), base)]);
                    }
                    if n < levels {
                        // which atoms one level up project onto this tuple
                        let mut above: Vec<u32> = (0..base)
                            .map(|c| classes[n][code * base + c])
                            .collect();
                        above.sort_unstable();
                        above.dedup();
                        sig.push(u32::MAX);
                        sig.extend(above);
                    }
                    sig
                })
                .collect();
            let (ids, count) = renumber(signatures);
            if count != counts[n - 1] {
                changed = true;
                counts[n - 1] = count;
            }
            classes[n - 1] = ids;
        }
        if !changed {
            break;
        }
    }

    // renumber atoms by their least tuple and build the functor
    classes.truncate(max_dim);
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(max_dim);
    for level in classes.iter_mut() {
        let (ids, count) = renumber(level.clone());
        *level = ids;
        let mut first = vec![usize::MAX; count];
        for (code, &c) in level.iter().enumerate() {
            if first[c as usize] == usize::MAX {
                first[c as usize] = code;
            }
        }
        reps.push(first);
    }
    let ids = reps
        .iter()
        .enumerate()
        .map(|(i, level)| level.iter().map(|&code| tuple_label(&decode(code, i + 1, base), &m.domain)).collect())
        .collect();
    let theory = TruncatedSymSS::from_action("definable_closure", max_dim, ids, |g, n, x| {
        let t = decode(reps[n - 1][x as usize], n, base);
        let image = encode(g.map_at(n).values().iter().map(|&v| t[v]), base);
        classes[g.output_level(n) - 1][image]
    })?;
    Ok(ClosureTheory {
        theory,
        class_of: classes,
        working_levels: levels,
    })
}
