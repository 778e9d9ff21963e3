//! The cochain complex of coherent cochains.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::snf::{invariant_factors, SparseMatrix};
use crate::error::{Error, Result};
use crate::finmap::Generator;
use crate::symset::{SimplicialMapHandle, TruncatedSymSS};

/// Classes of level `degree + 2` elements (head of `degree + 1` coordinates, one tail
/// coordinate) identified when they arise as the two one-tail restrictions of a
/// single element with two tail coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceClasses {
    pub degree: usize,
    pub level: usize,
    pub class_of: Vec<u32>,
    pub count: usize,
    /// Least element of each class.
    pub representatives: Vec<u32>,
    /// False when the witness level lies past the truncation and every class is a
    /// single element.
    pub witnessed: bool,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let next = parent[parent[x as usize] as usize];
        parent[x as usize] = next;
        x = next;
    }
    x
}

pub fn coherence_classes(t: &TruncatedSymSS, degree: usize) -> Result<CoherenceClasses> {
    let level = degree + 2;
    if level > t.max_dim() {
        return Err(Error::DimensionExceedsTruncation {
            requested: level,
            max_dim: t.max_dim(),
        });
    }
    let size = t.level_size(level);
    let mut parent: Vec<u32> = (0..size as u32).collect();
    let witnessed = level < t.max_dim();
    if witnessed {
        let top = level + 1;
        let drop_last = t.generator_table(Generator::Forget(top), top);
        let drop_before = t.generator_table(Generator::Forget(top - 1), top);
        for (&a, &b) in drop_last.iter().zip(drop_before) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi as usize] = lo;
            }
        }
    }
    let mut class_of = vec![0u32; size];
    let mut representatives = Vec::new();
    let mut number = vec![u32::MAX; size];
    for x in 0..size as u32 {
        let root = find(&mut parent, x) as usize;
        if number[root] == u32::MAX {
            number[root] = representatives.len() as u32;
            representatives.push(x);
        }
        class_of[x as usize] = number[root];
    }
    Ok(CoherenceClasses {
        degree,
        level,
        class_of,
        count: representatives.len(),
        representatives,
        witnessed,
    })
}

/// Coherent cochains in degrees `0..=max_degree + 1` and the coboundaries between them.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub name: String,
    pub truncation: usize,
    pub max_degree: usize,
    pub classes: Vec<CoherenceClasses>,
    /// `coboundaries[d]` maps degree `d` to degree `d + 1`, with a row per class of
    /// degree `d + 1`.
    pub coboundaries: Vec<SparseMatrix>,
}

impl CochainComplex {
    pub fn rank(&self, degree: usize) -> usize {
        self.classes[degree].count
    }

    /// Checks that consecutive coboundaries compose to zero.
    pub fn verify(&self) -> Result<()> {
        for d in 1..self.coboundaries.len() {
            let product = self.coboundaries[d]
                .multiply(&self.coboundaries[d - 1])
                .ok_or_else(|| Error::ComplexInvariant(format!("overflow composing coboundaries at degree {d}")))?;
            if !product.is_zero() {
                return Err(Error::ComplexInvariant(format!(
                    "coboundaries at degrees {} and {d} do not compose to zero",
                    d - 1
                )));
            }
        }
        Ok(())
    }
}

/// Row of the coboundary out of degree `d` for the level `d + 3` element `x`.
fn coboundary_row(t: &TruncatedSymSS, lower: &CoherenceClasses, x: u32) -> Vec<(u32, i64)> {
    let level = lower.level + 1;
    let mut row: Vec<(u32, i64)> = Vec::new();
    for i in 0..=lower.degree + 1 {
        let face = t.generator_table(Generator::Forget(i + 1), level)[x as usize];
        let class = lower.class_of[face as usize];
        let sign = if i % 2 == 0 { 1 } else { -1 };
        match row.iter_mut().find(|(c, _)| *c == class) {
            Some(slot) => slot.1 += sign,
            None => row.push((class, sign)),
        }
    }
    row.retain(|&(_, v)| v != 0);
    row.sort_unstable();
    row
}

/// Builds the complex through degree `max_degree + 1`; needs `max_degree + 3 <= max_dim`.
pub fn build_complex(t: &TruncatedSymSS, max_degree: usize) -> Result<CochainComplex> {
    if max_degree + 3 > t.max_dim() {
        return Err(Error::DimensionExceedsTruncation {
            requested: max_degree + 3,
            max_dim: t.max_dim(),
        });
    }
    let classes = (0..=max_degree + 1)
        .map(|d| coherence_classes(t, d))
        .collect::<Result<Vec<_>>>()?;
    let mut coboundaries = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let (lower, upper) = (&classes[d], &classes[d + 1]);
        let mut rows: Vec<Option<Vec<(u32, i64)>>> = vec![None; upper.count];
        for x in 0..t.level_size(upper.level) as u32 {
            let row = coboundary_row(t, lower, x);
            let slot = &mut rows[upper.class_of[x as usize] as usize];
            match slot {
                None => *slot = Some(row),
                Some(existing) if *existing == row => {}
                Some(_) => {
                    return Err(Error::ComplexInvariant(format!(
                        "coboundary out of degree {d} is not constant on the class of {}",
                        t.label(upper.level, x)
                    )))
                }
            }
        }
        coboundaries.push(SparseMatrix {
            rows: upper.count,
            cols: lower.count,
            entries: rows.into_iter().map(|r| r.unwrap_or_default()).collect(),
        });
    }
    let complex = CochainComplex {
        name: t.name().to_string(),
        truncation: t.max_dim(),
        max_degree,
        classes,
        coboundaries,
    };
    complex.verify()?;
    Ok(complex)
}

/// Builds the complex for the source of a validated map `p: C -> Dec(T)`.
pub fn build_complex_over(p: &SimplicialMapHandle, max_degree: usize) -> Result<CochainComplex> {
    let report = p.validate();
    if !report.passed() {
        return Err(Error::UnvalidatedMap {
            witnesses: report.witnesses.len(),
        });
    }
    build_complex(p.source(), max_degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub rank: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigInt>,
    pub truncation: usize,
}

fn serialize_torsion<S: serde::Serializer>(torsion: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(torsion.len()))?;
    for t in torsion {
        match u64::try_from(t) {
            Ok(small) => seq.serialize_element(&small)?,
            Err(_) => seq.serialize_element(&t.to_string())?,
        }
    }
    seq.end()
}

/// Cohomology in degrees `0..=max_degree` of a built complex.
pub fn cohomology(c: &CochainComplex) -> Result<Vec<CohomologyGroup>> {
    c.verify()?;
    let factors: Vec<Vec<BigInt>> = c.coboundaries.iter().map(invariant_factors).collect();
    Ok((0..=c.max_degree)
        .map(|k| {
            let outgoing = factors[k].len();
            let incoming = if k == 0 { 0 } else { factors[k - 1].len() };
            let torsion = if k == 0 {
                Vec::new()
            } else {
                factors[k - 1].iter().filter(|f| !f.is_one()).cloned().collect()
            };
            CohomologyGroup {
                degree: k,
                rank: c.rank(k) - outgoing - incoming,
                torsion,
                truncation: c.truncation,
            }
        })
        .collect())
}
