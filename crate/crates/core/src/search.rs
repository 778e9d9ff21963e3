//! Finding simplices with prescribed restrictions.

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::finmap::{FinSetMap, GeneratorStep};
use crate::oracle::{Key, LazyTheory};
use crate::symset::TruncatedSymSS;

/// Read access to a truncated functor, materialized or not.
pub trait SimplexSpace: Sync {
    type Elem: Clone + Eq + Hash + Ord + Send + Sync + Debug;
    /// A finite-set map prepared for repeated application.
    type Compiled: Send + Sync;

    fn max_dim(&self) -> usize;
    fn level(&self, n: usize) -> Vec<Self::Elem>;
    /// Elements of level `n + 1` whose restriction to the first `n` coordinates is `e`.
    fn extensions(&self, n: usize, e: &Self::Elem) -> Vec<Self::Elem>;
    fn compile(&self, f: &FinSetMap) -> Self::Compiled;
    fn apply(&self, f: &Self::Compiled, e: &Self::Elem) -> Self::Elem;
    fn label(&self, n: usize, e: &Self::Elem) -> String;
    /// Finds an element of level `n` by label.
    fn parse(&self, n: usize, label: &str) -> Result<Self::Elem>;

    fn act(&self, f: &FinSetMap, e: &Self::Elem) -> Self::Elem {
        self.apply(&self.compile(f), e)
    }
}

impl SimplexSpace for TruncatedSymSS {
    type Elem = u32;
    type Compiled = Vec<GeneratorStep>;

    fn max_dim(&self) -> usize {
        TruncatedSymSS::max_dim(self)
    }

    fn level(&self, n: usize) -> Vec<u32> {
        (0..self.level_size(n) as u32).collect()
    }

    fn extensions(&self, n: usize, e: &u32) -> Vec<u32> {
        TruncatedSymSS::extensions(self, n, *e).to_vec()
    }

    fn compile(&self, f: &FinSetMap) -> Vec<GeneratorStep> {
        f.generator_word()
    }

    fn apply(&self, word: &Vec<GeneratorStep>, e: &u32) -> u32 {
        word.iter()
            .fold(*e, |x, step| self.generator_table(step.generator, step.level)[x as usize])
    }

    fn label(&self, n: usize, e: &u32) -> String {
        TruncatedSymSS::label(self, n, *e).to_string()
    }

    fn parse(&self, n: usize, label: &str) -> Result<u32> {
        self.lookup(n, label)
    }
}

impl SimplexSpace for LazyTheory {
    type Elem = Key;
    type Compiled = FinSetMap;

    fn max_dim(&self) -> usize {
        LazyTheory::max_dim(self)
    }

    fn level(&self, n: usize) -> Vec<Key> {
        LazyTheory::level(self, n).to_vec()
    }

    fn extensions(&self, n: usize, e: &Key) -> Vec<Key> {
        self.oracle().extensions(n, e)
    }

    fn compile(&self, f: &FinSetMap) -> FinSetMap {
        f.clone()
    }

    fn apply(&self, f: &FinSetMap, e: &Key) -> Key {
        self.oracle().act(f, e)
    }

    fn label(&self, n: usize, e: &Key) -> String {
        LazyTheory::label(self, n, e)
    }

    fn parse(&self, n: usize, label: &str) -> Result<Key> {
        LazyTheory::level(self, n)
            .iter()
            .find(|k| self.oracle().label(n, k) == label)
            .cloned()
            .ok_or_else(|| Error::UnknownElement {
                level: n,
                label: label.to_string(),
            })
    }
}

/// Requires the restriction along `map` to lie in `allowed`.
#[derive(Clone, Debug)]
pub struct Constraint<E> {
    pub map: FinSetMap,
    pub allowed: HashSet<E>,
}

impl<E: Eq + Hash + Clone> Constraint<E> {
    pub fn equals(map: FinSetMap, element: E) -> Self {
        Self {
            map,
            allowed: HashSet::from([element]),
        }
    }

    pub fn member(map: FinSetMap, allowed: impl IntoIterator<Item = E>) -> Self {
        Self {
            map,
            allowed: allowed.into_iter().collect(),
        }
    }

    /// Requires the restriction to avoid `forbidden`, by complementing within the level.
    pub fn not_member<S: SimplexSpace<Elem = E>>(space: &S, map: FinSetMap, forbidden: &HashSet<E>) -> Self {
        let level = map.source_size();
        Self {
            map,
            allowed: space.level(level).into_iter().filter(|e| !forbidden.contains(e)).collect(),
        }
    }
}

struct Plan<S: SimplexSpace> {
    n: usize,
    /// constraints to test once the first `depth` positions are assigned, by depth
    checks: Vec<Vec<(S::Compiled, usize)>>,
    /// maps the search order back to the caller's coordinates
    restore: S::Compiled,
}

fn plan<S: SimplexSpace>(space: &S, n: usize, constraints: &[Constraint<S::Elem>]) -> Result<Plan<S>> {
    if n == 0 || n > space.max_dim() {
        return Err(Error::DimensionExceedsTruncation {
            requested: n,
            max_dim: space.max_dim(),
        });
    }
    for c in constraints {
        if c.map.target_size() != n {
            return Err(Error::ConstraintTarget {
                expected: n,
                found: c.map.target_size(),
            });
        }
        if c.map.source_size() > space.max_dim() {
            return Err(Error::DimensionExceedsTruncation {
                requested: c.map.source_size(),
                max_dim: space.max_dim(),
            });
        }
    }
    // most constrained coordinates first
    let mut degree = vec![0usize; n];
    for c in constraints {
        for v in c.map.image() {
            degree[v] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(degree[c]));
    let mut pos = vec![0usize; n];
    for (p, &c) in order.iter().enumerate() {
        pos[c] = p;
    }
    let mut checks: Vec<Vec<(S::Compiled, usize)>> = (0..=n).map(|_| Vec::new()).collect();
    for (i, c) in constraints.iter().enumerate() {
        let moved: Vec<usize> = c.map.values().iter().map(|&v| pos[v]).collect();
        let depth = moved.iter().max().expect("maps are nonempty") + 1;
        let local = FinSetMap::new(depth, moved).expect("positions lie below depth");
        checks[depth].push((space.compile(&local), i));
    }
    let restore = space.compile(&FinSetMap::new(n, pos).expect("positions form a permutation"));
    Ok(Plan { n, checks, restore })
}

fn explore<S: SimplexSpace, B>(
    space: &S,
    plan: &Plan<S>,
    constraints: &[Constraint<S::Elem>],
    depth: usize,
    e: &S::Elem,
    visit: &mut impl FnMut(S::Elem) -> ControlFlow<B>,
) -> ControlFlow<B> {
    for (map, i) in &plan.checks[depth] {
        if !constraints[*i].allowed.contains(&space.apply(map, e)) {
            return ControlFlow::Continue(());
        }
    }
    if depth == plan.n {
        return visit(space.apply(&plan.restore, e));
    }
    for next in space.extensions(depth, e) {
        explore(space, plan, constraints, depth + 1, &next, visit)?;
    }
    ControlFlow::Continue(())
}

fn run<S: SimplexSpace, B>(
    space: &S,
    n: usize,
    constraints: &[Constraint<S::Elem>],
    mut visit: impl FnMut(S::Elem) -> ControlFlow<B>,
) -> Result<Option<B>> {
    let plan = plan(space, n, constraints)?;
    if constraints.iter().any(|c| c.allowed.is_empty()) {
        return Ok(None);
    }
    for root in space.level(1) {
        if let ControlFlow::Break(b) = explore(space, &plan, constraints, 1, &root, &mut visit) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Some element of level `n` satisfying every constraint, or `None` when there is none.
///
/// The search assigns one coordinate at a time (most constrained first) and
/// prunes with every constraint whose coordinates are all assigned, so it
/// never misses a solution.
pub fn simplex_search<S: SimplexSpace>(
    space: &S,
    n: usize,
    constraints: &[Constraint<S::Elem>],
) -> Result<Option<S::Elem>> {
    run(space, n, constraints, ControlFlow::Break)
}

/// Every element of level `n` satisfying the constraints, sorted.
pub fn simplex_search_all<S: SimplexSpace>(
    space: &S,
    n: usize,
    constraints: &[Constraint<S::Elem>],
) -> Result<Vec<S::Elem>> {
    let mut found = Vec::new();
    run::<S, ()>(space, n, constraints, |e| {
        found.push(e);
        ControlFlow::Continue(())
    })?;
    found.sort();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;

    fn pair(n: usize, a: usize, b: usize) -> FinSetMap {
        FinSetMap::from_one_based(n, &[a, b]).unwrap()
    }

    #[test]
    fn strict_chain_in_dlo() {
        let t = builtin("dlo", 4).unwrap();
        let lt = t.lookup(2, "x1<x2").unwrap();
        let found = simplex_search(
            &t,
            3,
            &[Constraint::equals(pair(3, 1, 2), lt), Constraint::equals(pair(3, 2, 3), lt)],
        )
        .unwrap()
        .unwrap();
        assert_eq!(t.label(3, found), "x1<x2<x3");
        assert_eq!(t.act(&pair(3, 1, 3), found).unwrap(), lt);
    }

    #[test]
    fn contradictory_constraints() {
        let t = builtin("equality", 3).unwrap();
        let eq = t.lookup(2, "{1,2}").unwrap();
        let ne = t.lookup(2, "{1}{2}").unwrap();
        let found = simplex_search(
            &t,
            2,
            &[Constraint::equals(pair(2, 1, 2), eq), Constraint::equals(pair(2, 1, 2), ne)],
        )
        .unwrap();
        assert_eq!(found, None);
    }

    #[test]
    fn wrong_target_is_rejected() {
        let t = builtin("equality", 3).unwrap();
        let err = simplex_search(&t, 3, &[Constraint::equals(pair(2, 1, 2), 0)]).unwrap_err();
        assert!(matches!(err, Error::ConstraintTarget { expected: 3, found: 2 }));
    }

    #[test]
    fn unconstrained_search_lists_the_level() {
        let t = builtin("dlo", 4).unwrap();
        let all = simplex_search_all(&t, 4, &[]).unwrap();
        assert_eq!(all, (0..75).collect::<Vec<u32>>());
    }
}
