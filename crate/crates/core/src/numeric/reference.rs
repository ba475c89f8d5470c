//! Column-at-a-time left-looking Cholesky, the oracle for the supernodal
//! drivers.

use crate::error::{Error, Result};
use crate::sparse::SymmetricMatrix;
use crate::symbolic::ColumnStructure;

/// A factor stored column by column on a given row structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnFactor {
    colptr: Vec<usize>,
    rowind: Vec<usize>,
    values: Vec<f64>,
    flops: u64,
}

impl ColumnFactor {
    pub fn n(&self) -> usize {
        self.colptr.len() - 1
    }

    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let r = self.colptr[j]..self.colptr[j + 1];
        (&self.rowind[r.clone()], &self.values[r])
    }

    /// `L[i, j]`, zero outside the structure.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (rows, vals) = self.column(j);
        rows.binary_search(&i).map_or(0.0, |k| vals[k])
    }

    pub fn flops(&self) -> u64 {
        self.flops
    }

    pub fn to_dense_lower(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        for j in 0..n {
            let (rows, vals) = self.column(j);
            for (&i, &v) in rows.iter().zip(vals) {
                out[i + j * n] = v;
            }
        }
        out
    }
}

/// Factors `a` column by column.
///
/// For each column `j`: scatter `A[j.., j]` into a dense work vector, subtract
/// `L[i, k] L[j, k]` for every earlier column `k` with `L[j, k] != 0` (the
/// rows of such `k` at or below `j` all lie in `j`'s structure), gather the
/// structure of `j` back and scale by the square root of the pivot.
pub fn factor_reference(a: &SymmetricMatrix, structure: &ColumnStructure) -> Result<ColumnFactor> {
    let n = a.n();
    if structure.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: structure.n(),
        });
    }
    let colptr = structure.colptr().to_vec();
    let rowind = structure.rowind().to_vec();
    let mut values = vec![0.0; rowind.len()];
    let mut t = vec![0.0; n];
    // for each row j, the columns k < j with L[j, k] != 0 and where row j sits
    // in column k
    let mut row_cols: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for k in 0..n {
        for p in colptr[k] + 1..colptr[k + 1] {
            row_cols[rowind[p]].push((k, p));
        }
    }
    let mut flops = 0u64;
    for j in 0..n {
        let (ai, av) = a.column(j);
        for (&i, &v) in ai.iter().zip(av) {
            t[i] = v;
        }
        for &(k, pj) in &row_cols[j] {
            let ljk = values[pj];
            for p in pj..colptr[k + 1] {
                t[rowind[p]] -= values[p] * ljk;
            }
            flops += 2 * (colptr[k + 1] - pj) as u64;
        }
        let col = colptr[j]..colptr[j + 1];
        let d = t[j];
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { supernode: j, column: j });
        }
        let d = d.sqrt();
        values[col.start] = d;
        t[j] = 0.0;
        for p in col.start + 1..col.end {
            let i = rowind[p];
            values[p] = t[i] / d;
            t[i] = 0.0;
        }
        flops += (col.end - col.start) as u64;
    }
    Ok(ColumnFactor {
        colptr,
        rowind,
        values,
        flops,
    })
}
