//! Lifting properties: amalgamation, Beck-Chevalley, vibrancy and models.
//!
//! All checks enumerate the cases `(k, m, n)` in lexicographic order. Within a
//! case the coordinates of the big simplex are laid out as an `m`-block, a
//! shared `k`-block and an `n`-block. A failing case contributes one witness,
//! the least failing pair in element order, so the first witness of a report is
//! the lexicographically least failure overall.

use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finmap::FinSetMap;
use crate::report::{Report, Witness};
use crate::search::{simplex_search, Constraint};
use crate::symset::{SimplicialMapHandle, TruncatedSymSS};

fn range(from: usize, to: usize) -> Vec<usize> {
    (from..to).collect()
}

fn check_bound(bound: usize, max_dim: usize) -> Result<()> {
    if bound > max_dim {
        return Err(Error::DimensionExceedsTruncation {
            requested: bound,
            max_dim,
        });
    }
    Ok(())
}

/// Amalgamation cases with `k >= 0`, `m, n >= 1` and `m + k + n <= bound`.
fn amalgamation_cases(bound: usize) -> Vec<(usize, usize, usize)> {
    let mut cases = Vec::new();
    for k in 0..bound {
        for m in 1..=bound {
            for n in 1..=bound {
                if m + k + n <= bound {
                    cases.push((k, m, n));
                }
            }
        }
    }
    cases
}

fn block_note(m: usize, k: usize, n: usize) -> [String; 2] {
    let total = m + k + n;
    [
        format!("first element on coordinates 1..{} of {total}", m + k),
        format!("second element on coordinates {}..{total} of {total}", m + 1),
    ]
}

/// Pairs `(p, q)` realized by some element of level `m + k + n`, as a bitmap.
fn realized_pairs(t: &TruncatedSymSS, k: usize, m: usize, n: usize) -> Result<(Vec<bool>, usize)> {
    let total = m + k + n;
    let c = t.restriction_table(total, &range(0, m + k))?;
    let d = t.restriction_table(total, &range(m, total))?;
    let width = t.level_size(k + n);
    let mut seen = vec![false; t.level_size(m + k) * width];
    for r in 0..c.len() {
        seen[c[r] as usize * width + d[r] as usize] = true;
    }
    Ok((seen, width))
}

/// Shared-block restrictions: `a` on the last `k` coordinates of level `m + k`,
/// `b` on the first `k` coordinates of level `k + n`. `None` when `k = 0`.
fn shared_restrictions(t: &TruncatedSymSS, k: usize, m: usize, n: usize) -> Result<Option<(Vec<u32>, Vec<u32>)>> {
    if k == 0 {
        return Ok(None);
    }
    Ok(Some((t.restriction_table(m + k, &range(m, m + k))?, t.restriction_table(k + n, &range(0, k))?)))
}

fn amalgamation_witness(t: &TruncatedSymSS, condition: &str, k: usize, m: usize, n: usize, p: u32, q: u32) -> Witness {
    let [first, second] = block_note(m, k, n);
    Witness::new(condition)
        .param("k", k)
        .param("m", m)
        .param("n", n)
        .element(m + k, t.label(m + k, p))
        .element(k + n, t.label(k + n, q))
        .map(first)
        .map(second)
}

/// Re-runs the search for an amalgam of a witness returned by
/// [`check_theory`] or [`check_beck_chevalley`]; true when none exists.
pub fn reverify_amalgamation(t: &TruncatedSymSS, witness: &Witness) -> Result<bool> {
    let get = |key: &str| {
        witness
            .get(key)
            .ok_or_else(|| Error::InvalidArgument(format!("witness lacks `{key}`")))
    };
    let (k, m, n) = (get("k")?, get("m")?, get("n")?);
    let total = m + k + n;
    let p = t.lookup(m + k, &witness.elements[0])?;
    let q = t.lookup(k + n, &witness.elements[1])?;
    let found = simplex_search(
        t,
        total,
        &[
            Constraint::equals(FinSetMap::new(total, range(0, m + k))?, p),
            Constraint::equals(FinSetMap::new(total, range(m, total))?, q),
        ],
    )?;
    let agree = match shared_restrictions(t, k, m, n)? {
        Some((a, b)) => a[p as usize] == b[q as usize],
        None => true,
    };
    Ok(agree && found.is_none())
}

/// Any two types agreeing on a shared block of `k` variables have a common
/// extension; `k = 0` asks for surjectivity onto the plain product.
pub fn check_theory(t: &TruncatedSymSS, bound: usize) -> Result<Report> {
    check_bound(bound, t.max_dim())?;
    let cases = amalgamation_cases(bound);
    let outcomes: Vec<Result<(u64, Option<Witness>)>> = cases
        .par_iter()
        .map(|&(k, m, n)| {
            let (seen, width) = realized_pairs(t, k, m, n)?;
            let shared = shared_restrictions(t, k, m, n)?;
            let mut pairs = 0u64;
            let mut witness = None;
            for p in 0..t.level_size(m + k) {
                for q in 0..width {
                    if let Some((a, b)) = &shared {
                        if a[p] != b[q] {
                            continue;
                        }
                    }
                    pairs += 1;
                    if witness.is_none() && !seen[p * width + q] {
                        witness = Some(amalgamation_witness(t, "amalgamation", k, m, n, p as u32, q as u32));
                    }
                }
            }
            Ok((pairs, witness))
        })
        .collect();
    let mut report = Report::new("check_theory");
    report.note(format!("bound {bound}, truncation {}", t.max_dim()));
    for outcome in outcomes {
        let (pairs, witness) = outcome?;
        report.count("cases", 1);
        report.count("pairs", pairs);
        if let Some(w) = witness {
            debug_assert!(reverify_amalgamation(t, &w).unwrap_or(false));
            report.push_witness(w);
        }
    }
    Ok(report)
}

/// For every `p`, the image along the `(k+n)`-restriction of the preimage of `p`
/// equals the preimage of the shared restriction of `p`.
pub fn check_beck_chevalley(t: &TruncatedSymSS, bound: usize) -> Result<Report> {
    check_bound(bound, t.max_dim())?;
    let cases = amalgamation_cases(bound);
    let outcomes: Vec<Result<(u64, Option<Witness>)>> = cases
        .par_iter()
        .map(|&(k, m, n)| {
            let total = m + k + n;
            let c = t.restriction_table(total, &range(0, m + k))?;
            let d = t.restriction_table(total, &range(m, total))?;
            let shared = shared_restrictions(t, k, m, n)?;
            let left = t.level_size(m + k);
            let right = t.level_size(k + n);
            // d(c^-1(p)) for every p
            let mut images: Vec<Vec<u32>> = vec![Vec::new(); left];
            for r in 0..c.len() {
                images[c[r] as usize].push(d[r]);
            }
            // b^-1(w) for every w of the shared level
            let fibres: Vec<Vec<u32>> = match &shared {
                Some((_, b)) => {
                    let mut f = vec![Vec::new(); t.level_size(k)];
                    for q in 0..right {
                        f[b[q] as usize].push(q as u32);
                    }
                    f
                }
                None => vec![(0..right as u32).collect()],
            };
            let mut compared = 0u64;
            for p in 0..left {
                let image = &mut images[p];
                image.sort_unstable();
                image.dedup();
                let fibre = match &shared {
                    Some((a, _)) => &fibres[a[p] as usize],
                    None => &fibres[0],
                };
                compared += 1;
                if image.len() != fibre.len() {
                    let q = *fibre
                        .iter()
                        .find(|q| image.binary_search(q).is_err())
                        .expect("the image lies inside the fibre");
                    return Ok((compared, Some(amalgamation_witness(t, "beck_chevalley", k, m, n, p as u32, q))));
                }
            }
            Ok((compared, None))
        })
        .collect();
    let mut report = Report::new("check_beck_chevalley");
    report.note(format!("bound {bound}, truncation {}", t.max_dim()));
    for outcome in outcomes {
        let (compared, witness) = outcome?;
        report.count("cases", 1);
        report.count("elements", compared);
        if let Some(w) = witness {
            report.push_witness(w);
        }
    }
    Ok(report)
}

/// Lifting cases of a map: `k >= 0`, `m >= 1`, `n >= 0`, `k + n >= 1`.
fn lifting_cases(bound: usize, with_tail: bool) -> Vec<(usize, usize, usize)> {
    let mut cases = Vec::new();
    for k in 0..bound {
        for m in 1..=bound {
            for n in 0..=bound {
                if m + k + n <= bound && k + n >= 1 && (with_tail || n == 0) {
                    cases.push((k, m, n));
                }
            }
        }
    }
    cases
}

/// One lifting case: every pair `(y, x)` with `y` in target level `m + k` and
/// `x` in source level `k + n`, agreeing over the shared block, must come from
/// a source element of level `m + k + n`.
fn lifting_case(f: &SimplicialMapHandle, k: usize, m: usize, n: usize) -> Result<(u64, Option<Witness>)> {
    let (src, tgt) = (f.source(), f.target());
    let total = m + k + n;
    let c = src.restriction_table(total, &range(0, m + k))?;
    let d = src.restriction_table(total, &range(m, total))?;
    let width = src.level_size(k + n);
    let mut seen = vec![false; tgt.level_size(m + k) * width];
    for z in 0..c.len() {
        seen[f.apply(m + k, c[z]) as usize * width + d[z] as usize] = true;
    }
    let shared = if k == 0 {
        None
    } else {
        let a = tgt.restriction_table(m + k, &range(m, m + k))?;
        let b = tgt.restriction_table(k + n, &range(0, k))?;
        Some((a, b))
    };
    let mut pairs = 0u64;
    for y in 0..tgt.level_size(m + k) {
        for x in 0..width {
            if let Some((a, b)) = &shared {
                if a[y] != b[f.apply(k + n, x as u32) as usize] {
                    continue;
                }
            }
            pairs += 1;
            if !seen[y * width + x] {
                let w = Witness::new("lift")
                    .param("k", k)
                    .param("m", m)
                    .param("n", n)
                    .element(m + k, tgt.label(m + k, y as u32))
                    .element(k + n, src.label(k + n, x as u32))
                    .map(format!("target element on coordinates 1..{} of {total}", m + k))
                    .map(format!("source element on coordinates {}..{total} of {total}", m + 1));
                return Ok((pairs, Some(w)));
            }
        }
    }
    Ok((pairs, None))
}

fn require_natural(f: &SimplicialMapHandle, bound: usize) -> Result<()> {
    check_bound(bound, f.levels())?;
    let report = f.validate();
    if !report.passed() {
        return Err(Error::UnvalidatedMap {
            witnesses: report.witnesses.len(),
        });
    }
    Ok(())
}

fn run_lifting(f: &SimplicialMapHandle, cases: &[(usize, usize, usize)], report: &mut Report) -> Result<()> {
    let outcomes: Vec<Result<(u64, Option<Witness>)>> =
        cases.par_iter().map(|&(k, m, n)| lifting_case(f, k, m, n)).collect();
    for outcome in outcomes {
        let (pairs, witness) = outcome?;
        report.count("cases", 1);
        report.count("pairs", pairs);
        if let Some(w) = witness {
            report.push_witness(w);
        }
    }
    Ok(())
}

/// Vibrancy of a natural map: the map from source level `m + k + n` to the
/// fiber product of target level `m + k` and source level `k + n` over target
/// level `k` is surjective. The case `n = 0` is included.
pub fn check_vibrant(f: &SimplicialMapHandle, bound: usize) -> Result<Report> {
    require_natural(f, bound)?;
    let mut report = Report::new("check_vibrant");
    report.note(format!("bound {bound}"));
    run_lifting(f, &lifting_cases(bound, true), &mut report)?;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelMode {
    Saturated,
    TarskiVaught,
}

impl FromStr for ModelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "saturated" => Ok(ModelMode::Saturated),
            "tv" | "tarski_vaught" | "tarski-vaught" => Ok(ModelMode::TarskiVaught),
            other => Err(Error::InvalidArgument(format!("unknown model mode `{other}`"))),
        }
    }
}

/// Checks that level `n` of `x` is the set of `n`-tuples of level 1 under the
/// coordinate projections.
pub fn check_representable(x: &TruncatedSymSS, levels: usize) -> Result<()> {
    let base = x.level_size(1);
    for n in 2..=levels {
        let expected = base.checked_pow(n as u32).unwrap_or(usize::MAX);
        if x.level_size(n) != expected {
            return Err(Error::NotRepresentable(format!(
                "level {n} has {} elements, expected {expected}",
                x.level_size(n)
            )));
        }
        let projections = (0..n)
            .map(|i| x.restriction_table(n, &[i]))
            .collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; expected];
        for e in 0..x.level_size(n) {
            let code = projections.iter().fold(0usize, |acc, p| acc * base + p[e] as usize);
            if std::mem::replace(&mut seen[code], true) {
                return Err(Error::NotRepresentable(format!(
                    "two elements of level {n} share their coordinates"
                )));
            }
        }
    }
    Ok(())
}

/// Model conditions for a map from a representable functor.
///
/// Both modes require every 1-type to be realized. Tarski-Vaught mode then
/// asks, for every tuple of length `k` and every type of length `m + k`
/// extending its type, for a realizing tuple extending it (the `n = 0` cases of
/// vibrancy); saturated mode asks for full vibrancy.
pub fn check_model(f: &SimplicialMapHandle, bound: usize, mode: ModelMode) -> Result<Report> {
    check_representable(f.source(), f.levels())?;
    require_natural(f, bound)?;
    let name = match mode {
        ModelMode::Saturated => "check_model.saturated",
        ModelMode::TarskiVaught => "check_model.tarski_vaught",
    };
    let mut report = Report::new(name);
    report.note(format!("bound {bound}"));
    let tgt = f.target();
    let mut hit = vec![false; tgt.level_size(1)];
    for &y in f.component(1) {
        hit[y as usize] = true;
    }
    report.count("cases", 1);
    if let Some(y) = hit.iter().position(|h| !h) {
        report.push_witness(
            Witness::new("unrealized")
                .param("k", 0)
                .param("m", 1)
                .param("n", 0)
                .element(1, tgt.label(1, y as u32)),
        );
    }
    let cases = lifting_cases(bound, mode == ModelMode::Saturated);
    run_lifting(f, &cases, &mut report)?;
    Ok(report)
}
