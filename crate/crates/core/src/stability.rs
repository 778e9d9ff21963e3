//! Bounded stability tests: the order property, order-indiscernible but not
//! set-indiscernible sequences, and dividing along indiscernible sequences.
//!
//! Infinite indiscernible sequences are replaced by order-coherent elements of
//! finite length `L`: an element of level `n * L`, read as `L` blocks of `n`
//! coordinates, whose restrictions to any two increasing selections of the
//! same number of blocks agree. Every result holds only up to that length.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::finmap::FinSetMap;
use crate::report::{Report, Witness};
use crate::search::{simplex_search, Constraint, SimplexSpace};

fn block(width: usize, index: usize, offset: usize) -> impl Iterator<Item = usize> {
    offset + index * width..offset + (index + 1) * width
}

fn within(space: &impl SimplexSpace, level: usize) -> Result<()> {
    if level == 0 || level > space.max_dim() {
        return Err(Error::DimensionExceedsTruncation {
            requested: level,
            max_dim: space.max_dim(),
        });
    }
    Ok(())
}

fn one_based(coords: &[usize]) -> Vec<usize> {
    coords.iter().map(|c| c + 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness<E> {
    pub length: usize,
    pub width: usize,
    pub element: E,
    pub label: String,
    /// One-based coordinates of `a_1..a_N`, then of `b_1..b_N`.
    pub a_blocks: Vec<Vec<usize>>,
    pub b_blocks: Vec<Vec<usize>>,
}

/// Looks for `a_1..a_N, b_1..b_N` (blocks of `d` coordinates, `a`-blocks first)
/// with `phi(a_i, b_j)` exactly when `i <= j`. `phi` is a subset of level `2d`.
pub fn order_property<S: SimplexSpace>(
    space: &S,
    phi_level: usize,
    phi: &[S::Elem],
    length: usize,
) -> Result<Option<OrderWitness<S::Elem>>> {
    if !phi_level.is_multiple_of(2) || phi_level == 0 {
        return Err(Error::InvalidArgument(format!(
            "the formula must live on an even level, got {phi_level}"
        )));
    }
    if length == 0 {
        return Err(Error::InvalidArgument("sequence length must be positive".into()));
    }
    let d = phi_level / 2;
    let total = 2 * d * length;
    within(space, phi_level)?;
    within(space, total)?;
    let inside: HashSet<S::Elem> = phi.iter().cloned().collect();
    let a_blocks: Vec<Vec<usize>> = (0..length).map(|i| block(d, i, 0).collect()).collect();
    let b_blocks: Vec<Vec<usize>> = (0..length).map(|j| block(d, j, d * length).collect()).collect();
    let mut constraints = Vec::with_capacity(length * length);
    for (i, a) in a_blocks.iter().enumerate() {
        for (j, b) in b_blocks.iter().enumerate() {
            let coords: Vec<usize> = a.iter().chain(b).copied().collect();
            let map = FinSetMap::new(total, coords)?;
            constraints.push(if i <= j {
                Constraint::member(map, inside.iter().cloned())
            } else {
                Constraint::not_member(space, map, &inside)
            });
        }
    }
    Ok(simplex_search(space, total, &constraints)?.map(|element| OrderWitness {
        length,
        width: d,
        label: space.label(total, &element),
        element,
        a_blocks: a_blocks.iter().map(|b| one_based(b)).collect(),
        b_blocks: b_blocks.iter().map(|b| one_based(b)).collect(),
    }))
}

impl<E> OrderWitness<E> {
    pub fn to_report(witness: Option<&Self>, length: usize) -> Report {
        let mut report = Report::new("order_property");
        report.note(format!("searched sequences of length {length}"));
        if let Some(w) = witness {
            let mut entry = Witness::new("order_property")
                .param("N", w.length)
                .param("d", w.width)
                .element(2 * w.width * w.length, w.label.clone());
            for (i, b) in w.a_blocks.iter().enumerate() {
                entry = entry.map(format!("a{} = coordinates {:?}", i + 1, b));
            }
            for (j, b) in w.b_blocks.iter().enumerate() {
                entry = entry.map(format!("b{} = coordinates {:?}", j + 1, b));
            }
            report.push_witness(entry);
        }
        report
    }
}

/// Restriction maps onto increasing selections of blocks, grouped by selection size.
fn selections(width: usize, length: usize) -> Vec<Vec<FinSetMap>> {
    let total = width * length;
    (1..length)
        .map(|size| {
            let mut out = Vec::new();
            let mut chosen: Vec<usize> = (0..size).collect();
            loop {
                let coords: Vec<usize> = chosen.iter().flat_map(|&b| block(width, b, 0)).collect();
                out.push(FinSetMap::new(total, coords).expect("selected blocks lie inside"));
                // next increasing selection
                let Some(i) = (0..size).rev().find(|&i| chosen[i] < length - size + i) else {
                    break;
                };
                chosen[i] += 1;
                for j in i + 1..size {
                    chosen[j] = chosen[j - 1] + 1;
                }
            }
            out
        })
        .collect()
}

struct Coherence<S: SimplexSpace> {
    groups: Vec<Vec<S::Compiled>>,
}

impl<S: SimplexSpace> Coherence<S> {
    fn new(space: &S, width: usize, length: usize) -> Self {
        let groups = selections(width, length)
            .iter()
            .map(|group| group.iter().map(|f| space.compile(f)).collect())
            .collect();
        Self { groups }
    }

    fn holds(&self, space: &S, t: &S::Elem) -> bool {
        self.groups.iter().all(|group| {
            let first = space.apply(&group[0], t);
            group[1..].iter().all(|f| space.apply(f, t) == first)
        })
    }
}

/// Exchanges blocks `i` and `i + 1` (zero-based) of an element of level `width * length`.
fn block_transposition(width: usize, length: usize, i: usize) -> FinSetMap {
    let mut order: Vec<usize> = (0..length).collect();
    order.swap(i, i + 1);
    let coords = order.iter().flat_map(|&b| block(width, b, 0)).collect();
    FinSetMap::new(width * length, coords).expect("a permutation of blocks")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndiscernibleWitness<E> {
    pub length: usize,
    pub width: usize,
    pub element: E,
    pub label: String,
    /// One-based blocks exchanged by the violating transposition.
    pub transposition: (usize, usize),
    pub permuted_label: String,
}

impl<E> IndiscernibleWitness<E> {
    pub fn to_report(witness: Option<&Self>, width: usize, length: usize) -> Report {
        let mut report = Report::new("indiscernible_gap");
        report.note(format!("order-coherent elements of length {length} in blocks of {width}"));
        if let Some(w) = witness {
            report.push_witness(
                Witness::new("order_indiscernible_not_set_indiscernible")
                    .param("n", w.width)
                    .param("L", w.length)
                    .element(w.width * w.length, w.label.clone())
                    .element(w.width * w.length, w.permuted_label.clone())
                    .map(format!("exchange blocks {} and {}", w.transposition.0, w.transposition.1)),
            );
        }
        report
    }
}

/// An order-coherent element of level `width * length` that some permutation of
/// its blocks changes.
pub fn indiscernible_gap<S: SimplexSpace>(
    space: &S,
    width: usize,
    length: usize,
) -> Result<Option<IndiscernibleWitness<S::Elem>>> {
    if width == 0 || length == 0 {
        return Err(Error::InvalidArgument("block width and length must be positive".into()));
    }
    let total = width * length;
    within(space, total)?;
    if length == 1 {
        return Ok(None);
    }
    let coherence = Coherence::new(space, width, length);
    let swaps: Vec<S::Compiled> = (0..length - 1)
        .map(|i| space.compile(&block_transposition(width, length, i)))
        .collect();
    for t in space.level(total) {
        if !coherence.holds(space, &t) {
            continue;
        }
        for (i, swap) in swaps.iter().enumerate() {
            let moved = space.apply(swap, &t);
            if moved != t {
                return Ok(Some(IndiscernibleWitness {
                    length,
                    width,
                    label: space.label(total, &t),
                    permuted_label: space.label(total, &moved),
                    element: t,
                    transposition: (i + 1, i + 2),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividingResult {
    pub divides: bool,
    pub length: usize,
    pub k: usize,
    /// Label of the sequence of parameter copies along which the type is
    /// `k`-inconsistent, when it divides.
    pub pattern: Option<String>,
    pub patterns_checked: usize,
}

impl DividingResult {
    pub fn to_report(&self, p_label: &str, m: usize, n: usize) -> Report {
        let mut report = Report::new("divides_at_level");
        report.note(format!(
            "order-coherent sequences of length {}, {}-inconsistency",
            self.length, self.k
        ));
        report.count("patterns", self.patterns_checked as u64);
        if let Some(pattern) = &self.pattern {
            report.push_witness(
                Witness::new("divides")
                    .param("m", m)
                    .param("n", n)
                    .param("L", self.length)
                    .param("k", self.k)
                    .element(m + n, p_label)
                    .element(n * self.length, pattern.clone()),
            );
        }
        report
    }
}

/// Whether the type `p` of `(x, y)` (`x` the first `m` coordinates, `y` the last
/// `n`) divides: some order-coherent sequence `y_1..y_L` of copies of the type
/// of `y` makes `p(x, y_1), .., p(x, y_k)` jointly unrealizable.
pub fn divides_at_level<S: SimplexSpace>(
    space: &S,
    p: &S::Elem,
    m: usize,
    n: usize,
    length: usize,
    k: usize,
) -> Result<DividingResult> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("both blocks of the split must be nonempty".into()));
    }
    if k == 0 || k > length {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= L, got k = {k}, L = {length}")));
    }
    within(space, m + n)?;
    within(space, n * length)?;
    within(space, m + n * k)?;
    let y_part = space.act(&FinSetMap::new(m + n, (m..m + n).collect())?, p);
    let first_block: Vec<S::Compiled> = (0..length)
        .map(|i| space.compile(&FinSetMap::new(n * length, block(n, i, 0).collect()).expect("block inside")))
        .collect();
    let coherence = Coherence::new(space, n, length);
    let prefix = space.compile(&FinSetMap::new(n * length, (0..n * k).collect())?);
    let total = m + n * k;
    let x_with = |i: usize| {
        let coords: Vec<usize> = (0..m).chain(block(n, i, m)).collect();
        FinSetMap::new(total, coords).expect("blocks inside")
    };
    let tail = FinSetMap::new(total, (m..total).collect())?;
    let mut checked = 0;
    for s in space.level(n * length) {
        if first_block.iter().any(|f| space.apply(f, &s) != y_part) || !coherence.holds(space, &s) {
            continue;
        }
        checked += 1;
        let mut constraints = vec![Constraint::equals(tail.clone(), space.apply(&prefix, &s))];
        constraints.extend((0..k).map(|i| Constraint::equals(x_with(i), p.clone())));
        if simplex_search(space, total, &constraints)?.is_none() {
            return Ok(DividingResult {
                divides: true,
                length,
                k,
                pattern: Some(space.label(n * length, &s)),
                patterns_checked: checked,
            });
        }
    }
    Ok(DividingResult {
        divides: false,
        length,
        k,
        pattern: None,
        patterns_checked: checked,
    })
}
