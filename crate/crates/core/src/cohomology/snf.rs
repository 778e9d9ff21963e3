//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `diagonal = u * a * v` with `u`, `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// The `min(rows, cols)` diagonal entries: nonnegative, each dividing the next
    /// (zeros last).
    pub diagonal: Vec<BigInt>,
    pub u: Matrix,
    pub v: Matrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn to_big(a: &[Vec<i64>]) -> Matrix {
    a.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(a: &Matrix) -> BigInt {
    let n = a.len();
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = value;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}

struct Work {
    a: Matrix,
    u: Option<Matrix>,
    v: Option<Matrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        fn apply(m: &mut Matrix, target: usize, source: usize, factor: &BigInt) {
            let src = m[source].clone();
            for (x, s) in m[target].iter_mut().zip(&src) {
                if !s.is_zero() {
                    *x += factor * s;
                }
            }
        }
        apply(&mut self.a, target, source, factor);
        if let Some(u) = &mut self.u {
            apply(u, target, source, factor);
        }
    }

    /// col[target] += factor * col[source]
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        fn apply(m: &mut Matrix, target: usize, source: usize, factor: &BigInt) {
            for row in m.iter_mut() {
                if !row[source].is_zero() {
                    let delta = factor * &row[source];
                    row[target] += delta;
                }
            }
        }
        apply(&mut self.a, target, source, factor);
        if let Some(v) = &mut self.v {
            apply(v, target, source, factor);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
}

fn reduce(a: Matrix, rows: usize, cols: usize, transforms: bool) -> SnfResult {
    let mut w = Work {
        a,
        u: transforms.then(|| identity(rows)),
        v: transforms.then(|| identity(cols)),
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        // smallest nonzero entry of the remaining block becomes the pivot
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !w.a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| w.a[i][j].abs().cmp(&w.a[k][l].abs()));
        let Some((pi, pj)) = pivot else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.add_row(i, t, &-q);
                    if !w.a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.add_col(j, t, &-q);
                    if !w.a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // a smaller remainder sits in the pivot row or column
                let best_row = (t + 1..rows)
                    .filter(|&i| !w.a[i][t].is_zero())
                    .min_by(|&i, &k| w.a[i][t].abs().cmp(&w.a[k][t].abs()));
                let best_col = (t + 1..cols)
                    .filter(|&j| !w.a[t][j].is_zero())
                    .min_by(|&j, &l| w.a[t][j].abs().cmp(&w.a[t][l].abs()));
                match (best_row, best_col) {
                    (Some(i), Some(j)) => {
                        if w.a[i][t].abs() <= w.a[t][j].abs() {
                            w.swap_rows(t, i);
                        } else {
                            w.swap_cols(t, j);
                        }
                    }
                    (Some(i), None) => w.swap_rows(t, i),
                    (None, Some(j)) => w.swap_cols(t, j),
                    (None, None) => {}
                }
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&w.a[i][j] % &w.a[t][t]).is_zero()));
            match offending {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    let diagonal = (0..steps).map(|i| w.a[i][i].clone()).collect();
    SnfResult {
        diagonal,
        u: w.u.unwrap_or_default(),
        v: w.v.unwrap_or_default(),
    }
}

/// Smith normal form with its unimodular transforms.
pub fn smith_normal_form(a: &Matrix) -> SnfResult {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    reduce(a.clone(), rows, cols, true)
}

/// Diagonal entries only, skipping the transforms.
pub fn smith_diagonal(a: &Matrix) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    reduce(a.clone(), rows, cols, false).diagonal
}

/// A sparse integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Sorted `(column, value)` pairs per row, zero values omitted.
    pub entries: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Vec::new(); rows],
        }
    }

    pub fn from_dense(a: &[Vec<i64>]) -> Self {
        let cols = a.first().map_or(0, Vec::len);
        let entries = a
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j as u32, x))
                    .collect()
            })
            .collect();
        Self {
            rows: a.len(),
            cols,
            entries,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .map(|row| {
                let mut dense = vec![0; self.cols];
                for &(j, x) in row {
                    dense[j as usize] = x;
                }
                dense
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    /// `self * other`, failing on overflow.
    pub fn multiply(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        let mut entries = Vec::with_capacity(self.rows);
        for row in &self.entries {
            let mut acc: std::collections::BTreeMap<u32, i64> = std::collections::BTreeMap::new();
            for &(k, x) in row {
                for &(j, y) in &other.entries[k as usize] {
                    let slot = acc.entry(j).or_insert(0);
                    *slot = slot.checked_add(x.checked_mul(y)?)?;
                }
            }
            entries.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Some(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }
}

/// Nonzero invariant factors of `a`, in divisibility order.
///
/// Unit pivots are eliminated sparsely first; whatever remains is reduced densely.
pub fn invariant_factors(a: &SparseMatrix) -> Vec<BigInt> {
    sparse_factors(a).unwrap_or_else(|| {
        smith_diagonal(&to_big(&a.to_dense()))
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    })
}

fn sparse_factors(a: &SparseMatrix) -> Option<Vec<BigInt>> {
    let mut rows: Vec<Vec<(u32, i128)>> = {
        let mut unique: std::collections::HashSet<&Vec<(u32, i64)>> = std::collections::HashSet::new();
        a.entries
            .iter()
            .filter(|r| !r.is_empty() && unique.insert(r))
            .map(|r| r.iter().map(|&(j, x)| (j, x as i128)).collect())
            .collect()
    };
    let mut alive = vec![true; rows.len()];
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); a.cols];
    for (i, row) in rows.iter().enumerate() {
        for &(j, _) in row {
            columns[j as usize].push(i);
        }
    }
    let mut units = 0usize;
    loop {
        // the sparsest row holding a unit entry, and within it the sparsest column
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !alive[i] || row.is_empty() {
                continue;
            }
            if best.is_some_and(|(len, _, _)| row.len() >= len) {
                continue;
            }
            let unit = row
                .iter()
                .filter(|&&(_, x)| x == 1 || x == -1)
                .min_by_key(|&&(j, _)| columns[j as usize].len());
            if let Some(&(j, _)) = unit {
                best = Some((row.len(), i, j));
            }
        }
        let Some((_, p, c)) = best else {
            break;
        };
        units += 1;
        alive[p] = false;
        let pivot_row = std::mem::take(&mut rows[p]);
        let pivot_value = pivot_row.iter().find(|&&(j, _)| j == c).expect("pivot present").1;
        let users = std::mem::take(&mut columns[c as usize]);
        for r in users {
            if r == p || !alive[r] {
                continue;
            }
            let Some(&(_, x)) = rows[r].iter().find(|&&(j, _)| j == c) else {
                continue;
            };
            // row_r -= (x / pivot) * row_p, exact since the pivot is a unit
            let factor = x.checked_mul(pivot_value)?;
            let merged = combine(&rows[r], &pivot_row, factor)?;
            for &(j, _) in &merged {
                if j != c && !rows[r].iter().any(|&(k, _)| k == j) {
                    columns[j as usize].push(r);
                }
            }
            rows[r] = merged;
        }
        for &(j, _) in &pivot_row {
            columns[j as usize].retain(|&r| r != p);
        }
    }
    let rest: Vec<Vec<(u32, i128)>> = rows
        .into_iter()
        .zip(alive)
        .filter(|(r, a)| *a && !r.is_empty())
        .map(|(r, _)| r)
        .collect();
    let mut factors = vec![BigInt::one(); units];
    if !rest.is_empty() {
        let mut used: Vec<u32> = rest.iter().flat_map(|r| r.iter().map(|&(j, _)| j)).collect();
        used.sort_unstable();
        used.dedup();
        let dense: Matrix = rest
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); used.len()];
                for &(j, x) in r {
                    row[used.binary_search(&j).expect("column listed")] = BigInt::from(x);
                }
                row
            })
            .collect();
        factors.extend(smith_diagonal(&dense).into_iter().filter(|d| !d.is_zero()));
    }
    Some(factors)
}

/// `a - factor * b` on sorted sparse rows.
fn combine(a: &[(u32, i128)], b: &[(u32, i128)], factor: i128) -> Option<Vec<(u32, i128)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, factor.checked_mul(b[j].1)?.checked_neg()?));
            j += 1;
        } else {
            let v = a[i].1.checked_sub(factor.checked_mul(b[j].1)?)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&to_big(a))
            .diagonal
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(diag(&[vec![2, 0], vec![0, 0]]), vec![2, 0]);
        assert_eq!(diag(&[vec![1, 2], vec![3, 4]]), vec![1, 2]);
        assert_eq!(diag(&[vec![0, 0, 0], vec![0, 0, 0]]), vec![0, 0]);
        assert_eq!(diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn transforms_reproduce_the_diagonal() {
        let a = to_big(&[vec![4, 6, 2], vec![8, 3, 1], vec![0, 5, 7]]);
        let r = smith_normal_form(&a);
        let d = multiply(&multiply(&r.u, &a), &r.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j { r.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, expected);
            }
        }
        assert_eq!(determinant(&r.u).abs(), BigInt::one());
        assert_eq!(determinant(&r.v).abs(), BigInt::one());
    }

    #[test]
    fn sparse_and_dense_agree() {
        let a = vec![vec![1, -1, 0, 0], vec![0, 1, -1, 0], vec![2, 0, 0, 2], vec![1, -1, 0, 0]];
        let sparse = invariant_factors(&SparseMatrix::from_dense(&a));
        let dense: Vec<BigInt> = smith_diagonal(&to_big(&a)).into_iter().filter(|d| !d.is_zero()).collect();
        assert_eq!(sparse, dense);
    }

    #[test]
    fn determinant_of_known_matrix() {
        assert_eq!(determinant(&to_big(&[vec![1, 2], vec![3, 4]])), BigInt::from(-2));
    }
}
