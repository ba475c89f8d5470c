use crate::sparse::SymmetricPattern;
use crate::symbolic::EliminationTree;

/// Row structure of every column of the Cholesky factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnStructure {
    colptr: Vec<usize>,
    rowind: Vec<usize>,
}

impl ColumnStructure {
    pub fn n(&self) -> usize {
        self.colptr.len() - 1
    }

    /// `{ i : L[i, j] != 0 }` ascending, starting with `j`.
    pub fn column(&self, j: usize) -> &[usize] {
        &self.rowind[self.colptr[j]..self.colptr[j + 1]]
    }

    pub fn count(&self, j: usize) -> usize {
        self.colptr[j + 1] - self.colptr[j]
    }

    /// Nonzeros of `L`, diagonal included.
    pub fn nnz(&self) -> usize {
        self.rowind.len()
    }

    pub fn colptr(&self) -> &[usize] {
        &self.colptr
    }

    pub fn rowind(&self) -> &[usize] {
        &self.rowind
    }

    /// Fill entries: positions of `L` that are not stored in `A`.
    pub fn fill(&self, a: &SymmetricPattern) -> usize {
        self.nnz() - a.nnz()
    }

    /// `sum_j |L_{*,j}|^2`, the usual proxy for factorization work.
    pub fn work(&self) -> u64 {
        (0..self.n()).map(|j| (self.count(j) as u64).pow(2)).sum()
    }
}

/// Column structures of `L` from the pattern and its elimination tree:
/// column `j` is the union of `A`'s column `j` with every child's structure
/// minus the child itself.
pub fn symbolic_factorization(a: &SymmetricPattern, tree: &EliminationTree) -> ColumnStructure {
    let n = a.n();
    let mut colptr = Vec::with_capacity(n + 1);
    let mut rowind: Vec<usize> = Vec::with_capacity(a.nnz());
    let mut mark = vec![usize::MAX; n];
    colptr.push(0);
    let mut scratch = Vec::new();
    for j in 0..n {
        scratch.clear();
        for &i in a.column(j) {
            mark[i] = j;
            scratch.push(i);
        }
        for &c in tree.children(j) {
            for &i in &rowind[colptr[c] + 1..colptr[c + 1]] {
                if mark[i] != j {
                    mark[i] = j;
                    scratch.push(i);
                }
            }
        }
        scratch.sort_unstable();
        rowind.extend_from_slice(&scratch);
        colptr.push(rowind.len());
    }
    ColumnStructure { colptr, rowind }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::elimination_tree;

    #[test]
    fn tridiagonal_has_no_fill() {
        let a = SymmetricPattern::from_entries(6, (0..5).map(|j| (j + 1, j))).unwrap();
        let s = symbolic_factorization(&a, &elimination_tree(&a));
        for j in 0..5 {
            assert_eq!(s.column(j), &[j, j + 1]);
        }
        assert_eq!(s.fill(&a), 0);
    }
}
