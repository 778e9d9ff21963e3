//! Maps between standard finite sets `{1..m} -> {1..n}`.
//!
//! A [`FinSetMap`] `f: {1..m} -> {1..n}` acts contravariantly on a symmetric
//! simplicial set, sending level `n` to level `m`: coordinate `j` of the result
//! is coordinate `f(j)` of the input. Internally values are zero-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinSetMap {
    target_size: usize,
    values: Vec<usize>,
}

impl FinSetMap {
    /// Builds a map from zero-based values.
    pub fn new(target_size: usize, values: Vec<usize>) -> Result<Self> {
        if target_size == 0 || values.is_empty() {
            return Err(Error::EmptyMap {
                source_size: values.len(),
                target_size,
            });
        }
        if let Some((position, &value)) = values.iter().enumerate().find(|(_, &v)| v >= target_size) {
            return Err(Error::MalformedMap {
                position: position + 1,
                value: value + 1,
                target_size,
            });
        }
        Ok(Self { target_size, values })
    }

    /// Builds a map from one-based values, the way maps are usually written down.
    pub fn from_one_based(target_size: usize, values: &[usize]) -> Result<Self> {
        if let Some((position, &value)) = values.iter().enumerate().find(|(_, &v)| v == 0 || v > target_size) {
            return Err(Error::MalformedMap {
                position: position + 1,
                value,
                target_size,
            });
        }
        Self::new(target_size, values.iter().map(|v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            target_size: n,
            values: (0..n).collect(),
        }
    }

    /// The increasing inclusion of `{1..m}` onto `image` (sorted, zero-based).
    pub fn inclusion(target_size: usize, image: &[usize]) -> Result<Self> {
        Self::new(target_size, image.to_vec())
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// Zero-based values.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, j: usize) -> usize {
        self.values[j]
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &FinSetMap) -> Result<FinSetMap> {
        if inner.target_size != self.source_size() {
            return Err(Error::InvalidArgument(format!(
                "cannot compose: inner target {} differs from outer source {}",
                inner.target_size,
                self.source_size()
            )));
        }
        Ok(FinSetMap {
            target_size: self.target_size,
            values: inner.values.iter().map(|&v| self.values[v]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        for &v in &self.values {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_identity(&self) -> bool {
        self.target_size == self.values.len() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Sorted, deduplicated image (zero-based).
    pub fn image(&self) -> Vec<usize> {
        let mut image = self.values.clone();
        image.sort_unstable();
        image.dedup();
        image
    }

    /// Epi-mono factorization `f = injection ∘ surjection`, where the injection
    /// lists the image in increasing order.
    pub fn canonical_factorization(&self) -> (FinSetMap, FinSetMap) {
        let image = self.image();
        let rank_of = |v: usize| image.binary_search(&v).expect("value lies in its own image");
        let surjection = FinSetMap {
            target_size: image.len(),
            values: self.values.iter().map(|&v| rank_of(v)).collect(),
        };
        let injection = FinSetMap {
            target_size: self.target_size,
            values: image,
        };
        (surjection, injection)
    }

    /// `id_s ⊔ self`: the first `s` coordinates are fixed, the rest shifted by `s`.
    pub fn shift(&self, s: usize) -> FinSetMap {
        FinSetMap {
            target_size: self.target_size + s,
            values: (0..s).chain(self.values.iter().map(|&v| v + s)).collect(),
        }
    }

    /// Word of generators whose successive actions compute the action of `self`.
    ///
    /// The word is listed in application order: starting from level
    /// `target_size`, apply each generator in turn to end at level `source_size`.
    pub fn generator_word(&self) -> Vec<GeneratorStep> {
        let n = self.target_size;
        let image = self.image();
        let mut word = Vec::new();
        // Coordinate list semantics: `coords[p]` names the original coordinate at position p.
        let mut coords: Vec<usize> = (0..n).collect();

        for c in (0..n).rev() {
            if image.binary_search(&c).is_err() {
                word.push(GeneratorStep {
                    generator: Generator::Forget(c + 1),
                    level: coords.len(),
                });
                coords.remove(c);
            }
        }

        let mut multiplicity = vec![0usize; n];
        for &v in &self.values {
            multiplicity[v] += 1;
        }
        for block in (0..image.len()).rev() {
            for _ in 1..multiplicity[image[block]] {
                word.push(GeneratorStep {
                    generator: Generator::Dup(block + 1),
                    level: coords.len(),
                });
                coords.insert(block + 1, coords[block]);
            }
        }

        for j in 0..self.values.len() {
            let want = self.values[j];
            let mut p = (j..coords.len())
                .find(|&p| coords[p] == want)
                .expect("every wanted coordinate is present");
            while p > j {
                word.push(GeneratorStep {
                    generator: Generator::Swap(p),
                    level: coords.len(),
                });
                coords.swap(p - 1, p);
                p -= 1;
            }
        }
        debug_assert_eq!(coords, self.values);
        word
    }
}

impl fmt::Display for FinSetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]:{}->{}", self.values.len(), self.target_size)
    }
}

/// The generators used to store and validate actions. Positions are one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Exchange coordinates `i` and `i+1`; level `n` to level `n`.
    Swap(usize),
    /// Drop coordinate `i`; level `n` to level `n-1`.
    Forget(usize),
    /// Repeat coordinate `i`; level `n` to level `n+1`.
    Dup(usize),
}

impl Generator {
    /// The level reached when acting on an element of level `n`.
    pub fn output_level(self, n: usize) -> usize {
        match self {
            Generator::Swap(_) => n,
            Generator::Forget(_) => n - 1,
            Generator::Dup(_) => n + 1,
        }
    }

    pub fn applies_at(self, n: usize, max_dim: usize) -> bool {
        match self {
            Generator::Swap(i) => i >= 1 && i < n,
            Generator::Forget(i) => n >= 2 && i >= 1 && i <= n,
            Generator::Dup(i) => n < max_dim && i >= 1 && i <= n,
        }
    }

    /// All generators acting on level `n` within truncation `max_dim`.
    pub fn all_at(n: usize, max_dim: usize) -> Vec<Generator> {
        let mut gens = Vec::new();
        gens.extend((1..n).map(Generator::Swap));
        if n >= 2 {
            gens.extend((1..=n).map(Generator::Forget));
        }
        if n < max_dim {
            gens.extend((1..=n).map(Generator::Dup));
        }
        gens
    }

    /// The underlying finite-set map `{1..out} -> {1..n}`.
    pub fn map_at(self, n: usize) -> FinSetMap {
        let values = match self {
            Generator::Swap(i) => {
                let mut v: Vec<usize> = (0..n).collect();
                v.swap(i - 1, i);
                v
            }
            Generator::Forget(i) => (0..n).filter(|&c| c != i - 1).collect(),
            Generator::Dup(i) => (0..=n).map(|j| if j < i { j } else { j - 1 }).collect(),
        };
        FinSetMap { target_size: n, values }
    }

    pub fn name(self) -> String {
        match self {
            Generator::Swap(i) => format!("swap_{i}"),
            Generator::Forget(i) => format!("forget_{i}"),
            Generator::Dup(i) => format!("dup_{i}"),
        }
    }

    pub fn parse(name: &str) -> Option<Generator> {
        let (kind, index) = name.split_once('_')?;
        let i: usize = index.parse().ok()?;
        if i == 0 {
            return None;
        }
        match kind {
            "swap" => Some(Generator::Swap(i)),
            "forget" => Some(Generator::Forget(i)),
            "dup" => Some(Generator::Dup(i)),
            _ => None,
        }
    }
}

/// A generator applied to an element of `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorStep {
    pub generator: Generator,
    pub level: usize,
}

/// Composite of a generator word as a single map (the word's first step is the outermost).
pub fn compose_word(word: &[GeneratorStep], start_level: usize) -> FinSetMap {
    word.iter().fold(FinSetMap::identity(start_level), |acc, step| {
        acc.compose(&step.generator.map_at(step.level))
            .expect("generator word is composable")
    })
}

/// Enumerates every map `{1..m} -> {1..n}` in lexicographic order of values.
pub fn all_maps(m: usize, n: usize) -> impl Iterator<Item = FinSetMap> {
    let total = n.checked_pow(m as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut values = vec![0; m];
        for slot in values.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        FinSetMap { target_size: n, values }
    })
}

/// Permutations of `{0..n}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}
