use crate::error::{Error, Result};

/// Lower triangle of a symmetric sparsity pattern in compressed column form.
///
/// Row indices inside a column are strictly ascending and the first entry of
/// column `j` is `j` itself, so every diagonal is present. Indices are 0-based
/// internally; file formats and user-facing reports convert to 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPattern {
    n: usize,
    colptr: Vec<usize>,
    rowind: Vec<usize>,
}

impl SymmetricPattern {
    pub fn new(n: usize, colptr: Vec<usize>, rowind: Vec<usize>) -> Result<Self> {
        if colptr.len() != n + 1 {
            return Err(Error::InvalidPattern(format!(
                "colptr has length {}, expected {}",
                colptr.len(),
                n + 1
            )));
        }
        if colptr[0] != 0 || colptr[n] != rowind.len() {
            return Err(Error::InvalidPattern("colptr does not span rowind".into()));
        }
        for j in 0..n {
            if colptr[j] > colptr[j + 1] {
                return Err(Error::InvalidPattern(format!(
                    "colptr decreases at column {}",
                    j + 1
                )));
            }
            let col = &rowind[colptr[j]..colptr[j + 1]];
            if col.first() != Some(&j) {
                return Err(Error::InvalidPattern(format!(
                    "column {} does not start with its diagonal",
                    j + 1
                )));
            }
            if col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPattern(format!(
                    "rows of column {} are not strictly ascending",
                    j + 1
                )));
            }
            if col.last().is_some_and(|&r| r >= n) {
                return Err(Error::InvalidPattern(format!(
                    "row index out of range in column {}",
                    j + 1
                )));
            }
        }
        Ok(SymmetricPattern { n, colptr, rowind })
    }

    /// Builds a pattern from arbitrary `(row, col)` pairs. Upper-triangle pairs
    /// are mirrored, duplicates collapsed, and missing diagonals inserted.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut cols: Vec<Vec<usize>> = (0..n).map(|j| vec![j]).collect();
        for (i, j) in entries {
            if i >= n || j >= n {
                return Err(Error::InvalidPattern(format!(
                    "entry ({}, {}) outside dimension {}",
                    i + 1,
                    j + 1,
                    n
                )));
            }
            let (r, c) = if i >= j { (i, j) } else { (j, i) };
            if r != c {
                cols[c].push(r);
            }
        }
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowind = Vec::new();
        colptr.push(0);
        for mut col in cols {
            col.sort_unstable();
            col.dedup();
            rowind.extend_from_slice(&col);
            colptr.push(rowind.len());
        }
        Ok(SymmetricPattern { n, colptr, rowind })
    }

    /// Pattern of the `n x n` identity.
    pub fn diagonal(n: usize) -> Self {
        SymmetricPattern {
            n,
            colptr: (0..=n).collect(),
            rowind: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored entries of the lower triangle, diagonal included.
    pub fn nnz(&self) -> usize {
        self.rowind.len()
    }

    pub fn off_diagonal_nnz(&self) -> usize {
        self.rowind.len() - self.n
    }

    pub fn colptr(&self) -> &[usize] {
        &self.colptr
    }

    pub fn rowind(&self) -> &[usize] {
        &self.rowind
    }

    /// Row indices of column `j` (diagonal first).
    pub fn column(&self, j: usize) -> &[usize] {
        &self.rowind[self.colptr[j]..self.colptr[j + 1]]
    }

    /// For every row `i`, the columns `j < i` holding an entry `(i, j)`,
    /// ascending.
    pub fn row_lists(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.n];
        for j in 0..self.n {
            for &i in &self.column(j)[1..] {
                rows[i].push(j);
            }
        }
        rows
    }

    /// Full symmetric adjacency without self loops, each list ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for j in 0..self.n {
            for &i in &self.column(j)[1..] {
                adj[j].push(i);
                adj[i].push(j);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}
