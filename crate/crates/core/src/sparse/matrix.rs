use crate::error::{Error, Result};
use crate::sparse::{Permutation, SymmetricPattern};

/// Symmetric sparse matrix stored as its lower triangle.
///
/// Values line up with the pattern's row indices. Diagonals that were absent
/// from the source are stored as explicit zeros and remembered in
/// [`inserted_diagonals`](Self::inserted_diagonals); positivity is checked when
/// a factorization starts, not here.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    pattern: SymmetricPattern,
    values: Vec<f64>,
    inserted_diagonals: Vec<usize>,
}

impl SymmetricMatrix {
    pub fn new(pattern: SymmetricPattern, values: Vec<f64>) -> Result<Self> {
        if values.len() != pattern.nnz() {
            return Err(Error::DimensionMismatch {
                expected: pattern.nnz(),
                found: values.len(),
            });
        }
        Ok(SymmetricMatrix {
            pattern,
            values,
            inserted_diagonals: Vec::new(),
        })
    }

    /// Assembles a matrix from `(row, col, value)` triplets with 0-based
    /// indices. Upper-triangle entries are mirrored, duplicates summed, and
    /// missing diagonals inserted as zeros.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut has_diag = vec![false; n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidPattern(format!(
                    "entry ({}, {}) outside dimension {}",
                    i + 1,
                    j + 1,
                    n
                )));
            }
            let (r, c) = if i >= j { (i, j) } else { (j, i) };
            if r == c {
                has_diag[c] = true;
            }
            cols[c].push((r, v));
        }
        let mut inserted = Vec::new();
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowind = Vec::new();
        let mut values = Vec::new();
        colptr.push(0);
        for (c, mut col) in cols.into_iter().enumerate() {
            if !has_diag[c] {
                inserted.push(c);
                col.push((c, 0.0));
            }
            col.sort_by_key(|&(r, _)| r);
            for (r, v) in col {
                if rowind.len() > colptr[c] && *rowind.last().unwrap() == r {
                    *values.last_mut().unwrap() += v;
                } else {
                    rowind.push(r);
                    values.push(v);
                }
            }
            colptr.push(rowind.len());
        }
        let pattern = SymmetricPattern::new(n, colptr, rowind)?;
        Ok(SymmetricMatrix {
            pattern,
            values,
            inserted_diagonals: inserted,
        })
    }

    pub(crate) fn with_inserted_diagonals(mut self, inserted: Vec<usize>) -> Self {
        self.inserted_diagonals = inserted;
        self
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn nnz(&self) -> usize {
        self.pattern.nnz()
    }

    pub fn pattern(&self) -> &SymmetricPattern {
        &self.pattern
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Columns whose diagonal was missing from the source data.
    pub fn inserted_diagonals(&self) -> &[usize] {
        &self.inserted_diagonals
    }

    /// Rows and values of lower-triangle column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.pattern.colptr()[j]..self.pattern.colptr()[j + 1];
        (&self.pattern.rowind()[range.clone()], &self.values[range])
    }

    /// Entry `(i, j)` of the full symmetric matrix; zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let (rows, vals) = self.column(c);
        rows.binary_search(&r).map_or(0.0, |p| vals[p])
    }

    /// Fails on the first diagonal that is not strictly positive.
    pub fn check_diagonal(&self) -> Result<()> {
        for j in 0..self.n() {
            let (_, vals) = self.column(j);
            if !(vals[0] > 0.0) {
                return Err(Error::NonPositiveDiagonal { column: j + 1 });
            }
        }
        Ok(())
    }

    /// `y = A x` using the symmetric lower-triangle storage.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for j in 0..n {
            let (rows, vals) = self.column(j);
            y[j] += vals[0] * x[j];
            for (&i, &v) in rows[1..].iter().zip(&vals[1..]) {
                y[i] += v * x[j];
                y[j] += v * x[i];
            }
        }
        y
    }

    /// Dense column-major copy of the full symmetric matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut d = vec![0.0; n * n];
        for j in 0..n {
            let (rows, vals) = self.column(j);
            for (&i, &v) in rows.iter().zip(vals) {
                d[i + j * n] = v;
                d[j + i * n] = v;
            }
        }
        d
    }
}

/// Symmetric permutation of a pattern: entry `(i, j)` moves to
/// `(p(i), p(j))`, folded back into the lower triangle.
pub fn permute_pattern(a: &SymmetricPattern, p: &Permutation) -> Result<SymmetricPattern> {
    let (pattern, _) = permute_impl(a, None, p)?;
    Ok(pattern)
}

/// Returns `P A Pᵀ` in lower-triangle form with rows re-sorted.
pub fn apply_symmetric_permutation(a: &SymmetricMatrix, p: &Permutation) -> Result<SymmetricMatrix> {
    let (pattern, values) = permute_impl(a.pattern(), Some(a.values()), p)?;
    let mut inserted: Vec<usize> = a.inserted_diagonals.iter().map(|&j| p.new_of(j)).collect();
    inserted.sort_unstable();
    Ok(SymmetricMatrix::new(pattern, values.unwrap())?.with_inserted_diagonals(inserted))
}

fn permute_impl(
    a: &SymmetricPattern,
    values: Option<&[f64]>,
    p: &Permutation,
) -> Result<(SymmetricPattern, Option<Vec<f64>>)> {
    let n = a.n();
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        });
    }
    let mut counts = vec![0usize; n + 1];
    for j in 0..n {
        for &i in a.column(j) {
            let c = p.new_of(i).min(p.new_of(j));
            counts[c + 1] += 1;
        }
    }
    for c in 0..n {
        counts[c + 1] += counts[c];
    }
    let colptr = counts.clone();
    let mut next = counts;
    let mut rowind = vec![0usize; a.nnz()];
    let mut newvals = values.map(|_| vec![0.0; a.nnz()]);
    for j in 0..n {
        let start = a.colptr()[j];
        for (k, &i) in a.column(j).iter().enumerate() {
            let (pi, pj) = (p.new_of(i), p.new_of(j));
            let (r, c) = if pi >= pj { (pi, pj) } else { (pj, pi) };
            let slot = next[c];
            next[c] += 1;
            rowind[slot] = r;
            if let (Some(nv), Some(v)) = (newvals.as_mut(), values) {
                nv[slot] = v[start + k];
            }
        }
    }
    for c in 0..n {
        let range = colptr[c]..colptr[c + 1];
        match newvals.as_mut() {
            Some(nv) => {
                let mut pairs: Vec<(usize, f64)> = rowind[range.clone()]
                    .iter()
                    .copied()
                    .zip(nv[range.clone()].iter().copied())
                    .collect();
                pairs.sort_unstable_by_key(|&(r, _)| r);
                for (k, (r, v)) in pairs.into_iter().enumerate() {
                    rowind[range.start + k] = r;
                    nv[range.start + k] = v;
                }
            }
            None => rowind[range].sort_unstable(),
        }
    }
    Ok((SymmetricPattern::new(n, colptr, rowind)?, newvals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_mirror_and_sum() {
        let a = SymmetricMatrix::from_triplets(3, &[(0, 0, 2.0), (1, 2, 1.5), (2, 1, 0.5), (1, 1, 3.0)]).unwrap();
        assert_eq!(a.inserted_diagonals(), &[2]);
        assert_eq!(a.get(2, 1), 2.0);
        assert_eq!(a.get(1, 2), 2.0);
        assert_eq!(a.get(2, 2), 0.0);
        assert!(a.check_diagonal().is_err());
    }

    #[test]
    fn identity_permutation_is_a_no_op() {
        let a = SymmetricMatrix::from_triplets(4, &[(0, 0, 4.0), (1, 1, 4.0), (2, 2, 4.0), (3, 3, 4.0), (3, 0, -1.0), (2, 1, -1.0)]).unwrap();
        let b = apply_symmetric_permutation(&a, &Permutation::identity(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = SymmetricMatrix::from_triplets(2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(
            apply_symmetric_permutation(&a, &Permutation::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
