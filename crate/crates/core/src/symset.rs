//! Truncated symmetric simplicial sets stored as generator tables.
//!
//! Level `n` (for `1 <= n <= max_dim`) is a finite list of canonical identifiers.
//! The action of every finite-set map is recovered from the tables of three
//! generator families (adjacent swaps, forgetting a coordinate, duplicating a
//! coordinate) through [`FinSetMap::generator_word`].

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::{FinSetMap, Generator};
use crate::report::{Report, Witness};

#[derive(Clone, Debug)]
struct Level {
    ids: Vec<String>,
    index: HashMap<String, u32>,
    tables: BTreeMap<Generator, Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct TruncatedSymSS {
    name: String,
    max_dim: usize,
    levels: Vec<Level>,
    /// Per level `n < max_dim`: elements of level `n+1` grouped by their restriction
    /// to the first `n` coordinates, as (offsets, flat list).
    extensions: Vec<OnceLock<(Vec<u32>, Vec<u32>)>>,
}

impl PartialEq for TruncatedSymSS {
    fn eq(&self, other: &Self) -> bool {
        self.max_dim == other.max_dim
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.ids == b.ids && a.tables == b.tables)
    }
}

fn build_index(level: usize, ids: &[String]) -> Result<HashMap<String, u32>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i as u32).is_some() {
            return Err(Error::MalformedFunctor(format!("duplicate identifier `{id}` at level {level}")));
        }
    }
    Ok(index)
}

impl TruncatedSymSS {
    /// Builds a functor from its level identifiers and a generator action.
    ///
    /// `act(g, n, x)` must return the index (at level `g.output_level(n)`) of the
    /// image of element `x` of level `n`.
    pub fn from_action(
        name: impl Into<String>,
        max_dim: usize,
        ids: Vec<Vec<String>>,
        mut act: impl FnMut(Generator, usize, u32) -> u32,
    ) -> Result<Self> {
        if max_dim == 0 || ids.len() != max_dim {
            return Err(Error::MalformedFunctor(format!(
                "expected {max_dim} levels, got {}",
                ids.len()
            )));
        }
        let sizes: Vec<usize> = ids.iter().map(Vec::len).collect();
        let mut levels = Vec::with_capacity(max_dim);
        for (i, level_ids) in ids.into_iter().enumerate() {
            let n = i + 1;
            let index = build_index(n, &level_ids)?;
            let mut tables = BTreeMap::new();
            for g in Generator::all_at(n, max_dim) {
                let out_size = sizes[g.output_level(n) - 1];
                let table: Vec<u32> = (0..level_ids.len() as u32).map(|x| act(g, n, x)).collect();
                if let Some(&bad) = table.iter().find(|&&y| y as usize >= out_size) {
                    return Err(Error::MalformedFunctor(format!(
                        "{} at level {n} produced index {bad} outside a level of size {out_size}",
                        g.name()
                    )));
                }
                tables.insert(g, table);
            }
            levels.push(Level {
                ids: level_ids,
                index,
                tables,
            });
        }
        Ok(Self {
            name: name.into(),
            max_dim,
            levels,
            extensions: (0..max_dim).map(|_| OnceLock::new()).collect(),
        })
    }

    /// The representable functor of a finite set: level `n` is the set of `n`-tuples.
    pub fn representable(points: &[String], max_dim: usize, cap: usize) -> Result<Self> {
        let base = points.len();
        if base == 0 {
            return Err(Error::InvalidArgument("representable functor needs at least one point".into()));
        }
        let mut ids = Vec::with_capacity(max_dim);
        for n in 1..=max_dim {
            let size = base.checked_pow(n as u32).unwrap_or(usize::MAX);
            if size > cap {
                return Err(Error::CapExceeded { level: n, size, cap });
            }
            ids.push((0..size).map(|code| tuple_label(&decode(code, n, base), points)).collect());
        }
        Self::from_action("representable", max_dim, ids, |g, n, x| {
            let tuple = decode(x as usize, n, base);
            let map = g.map_at(n);
            let image: Vec<usize> = map.values().iter().map(|&v| tuple[v]).collect();
            encode(&image, base) as u32
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    fn level(&self, n: usize) -> Result<&Level> {
        if n == 0 || n > self.max_dim {
            return Err(Error::DimensionExceedsTruncation {
                requested: n,
                max_dim: self.max_dim,
            });
        }
        Ok(&self.levels[n - 1])
    }

    /// Panicking accessor for levels already known to be in range.
    fn lvl(&self, n: usize) -> &Level {
        &self.levels[n - 1]
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.level(n).map(|l| l.ids.len()).unwrap_or(0)
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.ids.len()).collect()
    }

    pub fn ids(&self, n: usize) -> &[String] {
        &self.lvl(n).ids
    }

    pub fn label(&self, n: usize, x: u32) -> &str {
        &self.lvl(n).ids[x as usize]
    }

    pub fn index_of(&self, n: usize, label: &str) -> Option<u32> {
        self.level(n).ok()?.index.get(label).copied()
    }

    pub fn lookup(&self, n: usize, label: &str) -> Result<u32> {
        self.level(n)?;
        self.index_of(n, label).ok_or_else(|| Error::UnknownElement {
            level: n,
            label: label.to_string(),
        })
    }

    /// Table of generator `g` acting on level `n`.
    pub fn generator_table(&self, g: Generator, n: usize) -> &[u32] {
        self.lvl(n)
            .tables
            .get(&g)
            .unwrap_or_else(|| panic!("{} does not act on level {n}", g.name()))
    }

    fn check_map(&self, f: &FinSetMap) -> Result<()> {
        for size in [f.source_size(), f.target_size()] {
            if size > self.max_dim {
                return Err(Error::DimensionExceedsTruncation {
                    requested: size,
                    max_dim: self.max_dim,
                });
            }
        }
        Ok(())
    }

    /// Elements of level `n + 1` whose restriction to the first `n` coordinates is `x`.
    pub fn extensions(&self, n: usize, x: u32) -> &[u32] {
        let (offsets, flat) = self.extensions[n - 1].get_or_init(|| {
            let forget = self.generator_table(Generator::Forget(n + 1), n + 1);
            let mut offsets = vec![0u32; self.level_size(n) + 1];
            for &y in forget {
                offsets[y as usize + 1] += 1;
            }
            for i in 0..self.level_size(n) {
                offsets[i + 1] += offsets[i];
            }
            let mut fill = offsets.clone();
            let mut flat = vec![0u32; forget.len()];
            for (z, &y) in forget.iter().enumerate() {
                flat[fill[y as usize] as usize] = z as u32;
                fill[y as usize] += 1;
            }
            (offsets, flat)
        });
        &flat[offsets[x as usize] as usize..offsets[x as usize + 1] as usize]
    }

    /// The action of `f: {1..m} -> {1..n}` as a table from level `n` to level `m`.
    pub fn induced_map(&self, f: &FinSetMap) -> Result<Vec<u32>> {
        self.check_map(f)?;
        let n = f.target_size();
        let mut table: Vec<u32> = (0..self.lvl(n).ids.len() as u32).collect();
        for step in f.generator_word() {
            let g = self.generator_table(step.generator, step.level);
            for x in table.iter_mut() {
                *x = g[*x as usize];
            }
        }
        Ok(table)
    }

    /// The action of `f` on a single element of level `f.target_size()`.
    pub fn act(&self, f: &FinSetMap, x: u32) -> Result<u32> {
        self.check_map(f)?;
        Ok(f.generator_word()
            .iter()
            .fold(x, |x, step| self.generator_table(step.generator, step.level)[x as usize]))
    }

    /// Restriction of level `n` to the coordinates in `coords` (zero-based, any order).
    pub fn restriction_table(&self, n: usize, coords: &[usize]) -> Result<Vec<u32>> {
        self.induced_map(&FinSetMap::new(n, coords.to_vec())?)
    }

    /// Checks the composition laws of the generator tables on every element.
    ///
    /// Every composable pair of generators and every braid triple of adjacent
    /// swaps is compared with the canonical word of its composite. These are the
    /// defining relations of the category of finite sets in these generators, so
    /// passing means the tables define a functor.
    pub fn validate_functor(&self) -> Report {
        let mut report = Report::new("validate_functor");
        let d = self.max_dim;
        for n in 1..=d {
            let size = self.lvl(n).ids.len();
            let mut words: Vec<Vec<Generator>> = Vec::new();
            for g1 in Generator::all_at(n, d) {
                let n1 = g1.output_level(n);
                for g2 in Generator::all_at(n1, d) {
                    words.push(vec![g1, g2]);
                }
            }
            for i in 1..n.saturating_sub(1) {
                words.push(vec![Generator::Swap(i), Generator::Swap(i + 1), Generator::Swap(i)]);
                words.push(vec![Generator::Swap(i + 1), Generator::Swap(i), Generator::Swap(i + 1)]);
            }
            for word in words {
                let mut level = n;
                let mut composite = FinSetMap::identity(n);
                let mut table: Vec<u32> = (0..size as u32).collect();
                for &g in &word {
                    composite = composite.compose(&g.map_at(level)).expect("generator word composes");
                    let gt = self.generator_table(g, level);
                    for x in table.iter_mut() {
                        *x = gt[*x as usize];
                    }
                    level = g.output_level(level);
                }
                let canonical = self.induced_map(&composite).expect("composite stays within truncation");
                report.count("checks", size as u64);
                if let Some(x) = (0..size).find(|&x| table[x] != canonical[x]) {
                    let names: Vec<String> = word.iter().map(|g| g.name()).collect();
                    report.push_witness(
                        Witness::new("composition law")
                            .element(n, self.label(n, x as u32))
                            .element(level, self.label(level, table[x]))
                            .element(level, self.label(level, canonical[x]))
                            .map(names.join(" then "))
                            .map(composite.to_string()),
                    );
                }
            }
        }
        report
    }

    /// Level `j` of the result is level `j + s`, with the first `s` coordinates held fixed.
    pub fn shifted(&self, s: usize) -> Result<TruncatedSymSS> {
        if s == 0 || s >= self.max_dim {
            return Err(Error::ShiftTooLarge {
                shift: s,
                max_dim: self.max_dim,
            });
        }
        let d = self.max_dim - s;
        let ids = (1..=d).map(|j| self.lvl(j + s).ids.clone()).collect();
        let shift = |g: Generator| match g {
            Generator::Swap(i) => Generator::Swap(i + s),
            Generator::Forget(i) => Generator::Forget(i + s),
            Generator::Dup(i) => Generator::Dup(i + s),
        };
        Self::from_action(format!("{}[+{s}]", self.name), d, ids, |g, j, x| {
            self.generator_table(shift(g), j + s)[x as usize]
        })
    }

    /// Keeps the marked elements, which must form a sub-functor.
    pub fn subfunctor(&self, keep: &[Vec<bool>]) -> Result<TruncatedSymSS> {
        let renumber: Vec<Vec<Option<u32>>> = keep
            .iter()
            .map(|k| {
                let mut next = 0u32;
                k.iter()
                    .map(|&kept| {
                        kept.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        for n in 1..=self.max_dim {
            for g in Generator::all_at(n, self.max_dim) {
                let out = g.output_level(n);
                for (x, &y) in self.generator_table(g, n).iter().enumerate() {
                    if keep[n - 1][x] && !keep[out - 1][y as usize] {
                        return Err(Error::InvalidArgument(format!(
                            "kept element {} is sent by {} to removed element {}",
                            self.label(n, x as u32),
                            g.name(),
                            self.label(out, y)
                        )));
                    }
                }
            }
        }
        let ids = (1..=self.max_dim)
            .map(|n| {
                self.lvl(n)
                    .ids
                    .iter()
                    .zip(&keep[n - 1])
                    .filter(|(_, &k)| k)
                    .map(|(id, _)| id.clone())
                    .collect()
            })
            .collect();
        let originals: Vec<Vec<u32>> = keep
            .iter()
            .map(|k| (0..k.len() as u32).filter(|&x| k[x as usize]).collect())
            .collect();
        Self::from_action(self.name.clone(), self.max_dim, ids, |g, n, x| {
            let y = self.generator_table(g, n)[originals[n - 1][x as usize] as usize];
            renumber[g.output_level(n) - 1][y as usize].expect("closure checked above")
        })
    }

    /// Removes one simplex together with everything that restricts to it.
    pub fn puncture(&self, level: usize, label: &str) -> Result<TruncatedSymSS> {
        let target = self.lookup(level, label)?;
        let mut keep: Vec<Vec<bool>> = self.levels.iter().map(|l| vec![true; l.ids.len()]).collect();
        keep[level - 1][target as usize] = false;
        let mut changed = true;
        while changed {
            changed = false;
            for n in 1..=self.max_dim {
                for g in Generator::all_at(n, self.max_dim) {
                    let out = g.output_level(n);
                    let table = self.generator_table(g, n);
                    for x in 0..table.len() {
                        if keep[n - 1][x] && !keep[out - 1][table[x] as usize] {
                            keep[n - 1][x] = false;
                            changed = true;
                        }
                    }
                }
            }
        }
        Ok(self.subfunctor(&keep)?.with_name(format!("{} minus {label}", self.name)))
    }

    /// An isomorphic copy: element `x` of level `n` moves to position `perm[n-1][x]`
    /// and is renamed by `rename`.
    pub fn relabeled(&self, perm: &[Vec<u32>], rename: impl Fn(usize, &str) -> String) -> Result<TruncatedSymSS> {
        let inverse: Vec<Vec<u32>> = perm
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; p.len()];
                for (x, &y) in p.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
            .collect();
        let ids = (1..=self.max_dim)
            .map(|n| inverse[n - 1].iter().map(|&x| rename(n, self.label(n, x))).collect())
            .collect();
        Self::from_action(self.name.clone(), self.max_dim, ids, |g, n, y| {
            let x = inverse[n - 1][y as usize];
            perm[g.output_level(n) - 1][self.generator_table(g, n)[x as usize] as usize]
        })
    }

    pub fn to_json(&self) -> String {
        let mut action: BTreeMap<String, Vec<Vec<u32>>> = BTreeMap::new();
        for n in 1..=self.max_dim {
            for (g, table) in &self.lvl(n).tables {
                action.entry(g.name()).or_insert_with(|| vec![Vec::new(); self.max_dim])[n - 1] = table.clone();
            }
        }
        let doc = FunctorDoc {
            max_dim: self.max_dim,
            levels: self.levels.iter().map(|l| l.ids.clone()).collect(),
            action,
        };
        serde_json::to_string(&doc).expect("functor documents serialize")
    }

    pub fn from_json(text: &str) -> Result<TruncatedSymSS> {
        let doc: FunctorDoc = serde_json::from_str(text).map_err(|e| Error::MalformedFunctor(e.to_string()))?;
        let d = doc.max_dim;
        if d == 0 || doc.levels.len() != d {
            return Err(Error::MalformedFunctor(format!(
                "max_dim {d} but {} levels present",
                doc.levels.len()
            )));
        }
        let mut expected = 0usize;
        for n in 1..=d {
            expected += Generator::all_at(n, d).len();
        }
        let mut found = 0usize;
        for (name, tables) in &doc.action {
            let g = Generator::parse(name)
                .ok_or_else(|| Error::MalformedFunctor(format!("unknown generator `{name}`")))?;
            if tables.len() != d {
                return Err(Error::MalformedFunctor(format!("{name} lists {} levels, expected {d}", tables.len())));
            }
            for (i, table) in tables.iter().enumerate() {
                let n = i + 1;
                if g.applies_at(n, d) {
                    if table.len() != doc.levels[i].len() {
                        return Err(Error::MalformedFunctor(format!("{name} table at level {n} has wrong length")));
                    }
                    found += 1;
                } else if !table.is_empty() {
                    return Err(Error::MalformedFunctor(format!("{name} does not act on level {n}")));
                }
            }
        }
        if found != expected {
            return Err(Error::MalformedFunctor(format!(
                "expected {expected} generator tables, found {found}"
            )));
        }
        Self::from_action("functor", d, doc.levels, |g, n, x| doc.action[&g.name()][n - 1][x as usize])
    }
}

#[derive(Serialize, Deserialize)]
struct FunctorDoc {
    max_dim: usize,
    levels: Vec<Vec<String>>,
    action: BTreeMap<String, Vec<Vec<u32>>>,
}

fn decode(mut code: usize, n: usize, base: usize) -> Vec<usize> {
    let mut tuple = vec![0; n];
    for slot in tuple.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    tuple
}

fn encode(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * base + v)
}

pub(crate) fn tuple_label(tuple: &[usize], points: &[String]) -> String {
    let names: Vec<&str> = tuple.iter().map(|&p| points[p].as_str()).collect();
    format!("({})", names.join(","))
}

/// A levelwise map between truncated functors, defined on levels `1..=levels()`.
#[derive(Clone, Debug)]
pub struct SimplicialMapHandle {
    source: Arc<TruncatedSymSS>,
    target: Arc<TruncatedSymSS>,
    components: Vec<Vec<u32>>,
}

impl SimplicialMapHandle {
    pub fn new(source: Arc<TruncatedSymSS>, target: Arc<TruncatedSymSS>, components: Vec<Vec<u32>>) -> Result<Self> {
        let shared = source.max_dim().min(target.max_dim());
        if components.is_empty() || components.len() > shared {
            return Err(Error::MismatchedTruncation(format!(
                "{} components for truncations {} and {}",
                components.len(),
                source.max_dim(),
                target.max_dim()
            )));
        }
        for (i, comp) in components.iter().enumerate() {
            let n = i + 1;
            if comp.len() != source.level_size(n) {
                return Err(Error::MismatchedTruncation(format!(
                    "component at level {n} has {} entries for a level of size {}",
                    comp.len(),
                    source.level_size(n)
                )));
            }
            if comp.iter().any(|&y| y as usize >= target.level_size(n)) {
                return Err(Error::MismatchedTruncation(format!(
                    "component at level {n} leaves the target level"
                )));
            }
        }
        Ok(Self {
            source,
            target,
            components,
        })
    }

    pub fn from_fn(
        source: Arc<TruncatedSymSS>,
        target: Arc<TruncatedSymSS>,
        levels: usize,
        f: impl Fn(usize, u32) -> u32,
    ) -> Result<Self> {
        let components = (1..=levels)
            .map(|n| (0..source.level_size(n) as u32).map(|x| f(n, x)).collect())
            .collect();
        Self::new(source, target, components)
    }

    pub fn identity(t: Arc<TruncatedSymSS>) -> Self {
        let components = t.level_sizes().into_iter().map(|s| (0..s as u32).collect()).collect();
        Self {
            source: t.clone(),
            target: t,
            components,
        }
    }

    pub fn source(&self) -> &Arc<TruncatedSymSS> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncatedSymSS> {
        &self.target
    }

    /// Number of levels on which the map is defined.
    pub fn levels(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, n: usize) -> &[u32] {
        &self.components[n - 1]
    }

    pub fn apply(&self, n: usize, x: u32) -> u32 {
        self.components[n - 1][x as usize]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMapHandle) -> Result<SimplicialMapHandle> {
        if !Arc::ptr_eq(&self.target, &other.source) && *self.target != *other.source {
            return Err(Error::InvalidArgument("maps are not composable".into()));
        }
        let levels = self.levels().min(other.levels());
        let components = (1..=levels)
            .map(|n| self.component(n).iter().map(|&y| other.apply(n, y)).collect())
            .collect();
        Self::new(self.source.clone(), other.target.clone(), components)
    }

    pub fn is_levelwise_surjective(&self) -> bool {
        (1..=self.levels()).all(|n| {
            let mut hit = vec![false; self.target.level_size(n)];
            for &y in self.component(n) {
                hit[y as usize] = true;
            }
            hit.into_iter().all(|h| h)
        })
    }

    /// Naturality against every generator acting within the shared levels.
    pub fn validate(&self) -> Report {
        let mut report = Report::new("simplicial_map_validate");
        let d = self.levels();
        for n in 1..=d {
            for g in Generator::all_at(n, d) {
                let out = g.output_level(n);
                let src = self.source.generator_table(g, n);
                let tgt = self.target.generator_table(g, n);
                report.count("checks", src.len() as u64);
                for x in 0..src.len() {
                    let down_then_map = self.apply(out, src[x]);
                    let map_then_down = tgt[self.apply(n, x as u32) as usize];
                    if down_then_map != map_then_down {
                        report.push_witness(
                            Witness::new("naturality")
                                .element(n, self.source.label(n, x as u32))
                                .element(out, self.target.label(out, down_then_map))
                                .element(out, self.target.label(out, map_then_down))
                                .map(g.name()),
                        );
                        break;
                    }
                }
            }
        }
        report
    }
}

/// Validates naturality of `map`. Errors when the map is defined on fewer levels than `bound`.
pub fn simplicial_map_validate(map: &SimplicialMapHandle) -> Report {
    map.validate()
}

/// The shifted functor together with its head projections.
#[derive(Clone, Debug)]
pub struct Decalage {
    pub shift: usize,
    pub shifted: Arc<TruncatedSymSS>,
    /// `head_projections[i]` forgets head coordinate `i + 1`, landing in the shift by `s - 1`.
    pub head_projections: Vec<SimplicialMapHandle>,
    /// Forgets all head coordinates, landing in the base functor.
    pub total_projection: SimplicialMapHandle,
}

pub fn decalage(t: &Arc<TruncatedSymSS>, s: usize) -> Result<Decalage> {
    let shifted = Arc::new(t.shifted(s)?);
    let below = if s == 1 { t.clone() } else { Arc::new(t.shifted(s - 1)?) };
    let levels = shifted.max_dim();
    let head_projections = (1..=s)
        .map(|i| {
            SimplicialMapHandle::from_fn(shifted.clone(), below.clone(), levels, |j, x| {
                t.generator_table(Generator::Forget(i), j + s)[x as usize]
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let components = (1..=levels)
        .map(|j| t.restriction_table(j + s, &(s..s + j).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let total_projection = SimplicialMapHandle::new(shifted.clone(), t.clone(), components)?;
    Ok(Decalage {
        shift: s,
        shifted,
        head_projections,
        total_projection,
    })
}
