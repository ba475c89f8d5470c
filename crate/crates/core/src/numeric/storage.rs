use crate::error::{Error, Result};
use crate::kernels::{PanelMut, PanelRef};
use crate::sparse::SymmetricMatrix;
use crate::symbolic::SymbolicFactor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StorageState {
    /// Panels hold the entries of `A`.
    HoldsA,
    /// Panels hold the Cholesky factor.
    HoldsL,
    /// A factorization started and did not finish.
    Partial,
}

impl StorageState {
    pub(crate) fn name(self) -> &'static str {
        match self {
            StorageState::HoldsA => "A",
            StorageState::HoldsL => "L",
            StorageState::Partial => "a partial factor",
        }
    }
}

/// One dense column-major panel per supernode, `|glbind(J)|` rows by `|J|`
/// columns, packed back to back in a single allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorStorage {
    values: Vec<f64>,
    state: StorageState,
}

fn panel_range(s: &SymbolicFactor, j: usize) -> (usize, usize, usize) {
    let rows = s.glbind(j).len();
    let cols = s.partition().size(j);
    (s.panel_offset(j), rows, cols)
}

impl FactorStorage {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn state(&self) -> StorageState {
        self.state
    }

    pub(crate) fn set_state(&mut self, state: StorageState) {
        self.state = state;
    }

    pub(crate) fn expect(&self, state: StorageState) -> Result<()> {
        if self.state == state {
            Ok(())
        } else {
            Err(Error::InvalidState {
                expected: state.name(),
                found: self.state.name(),
            })
        }
    }

    pub fn panel<'a>(&'a self, s: &SymbolicFactor, j: usize) -> PanelRef<'a> {
        let (off, rows, cols) = panel_range(s, j);
        PanelRef::new(&self.values[off..off + rows * cols], rows, cols, rows)
    }

    pub(crate) fn panel_mut<'a>(&'a mut self, s: &SymbolicFactor, j: usize) -> PanelMut<'a> {
        let (off, rows, cols) = panel_range(s, j);
        PanelMut::new(&mut self.values[off..off + rows * cols], rows, cols, rows)
    }

    /// Panel `source` for reading and panel `target` for writing; `source`
    /// must precede `target`.
    pub(crate) fn pair_mut<'a>(&'a mut self, s: &SymbolicFactor, source: usize, target: usize) -> (PanelRef<'a>, PanelMut<'a>) {
        assert!(source < target);
        let (so, sr, sc) = panel_range(s, source);
        let (to, tr, tc) = panel_range(s, target);
        let (head, tail) = self.values.split_at_mut(to);
        (
            PanelRef::new(&head[so..so + sr * sc], sr, sc, sr),
            PanelMut::new(&mut tail[..tr * tc], tr, tc, tr),
        )
    }

    /// `L[i, j]` (or `A[i, j]` before factorization) for `i >= j`, in factor
    /// ordering; zero where the symbolic factor stores nothing.
    pub fn entry(&self, s: &SymbolicFactor, i: usize, j: usize) -> f64 {
        assert!(i >= j);
        let sn = s.partition().supernode_of(j);
        let c = j - s.partition().first(sn);
        match s.glbind(sn).binary_search(&i) {
            Ok(r) => self.panel(s, sn).get(r, c),
            Err(_) => 0.0,
        }
    }

    /// Lower triangle as a dense column-major `n x n` array.
    pub fn to_dense_lower(&self, s: &SymbolicFactor) -> Vec<f64> {
        let n = s.n();
        let mut out = vec![0.0; n * n];
        for j in 0..s.nsuper() {
            let p = self.panel(s, j);
            let f = s.partition().first(j);
            for c in 0..p.cols() {
                for (r, &row) in s.glbind(j).iter().enumerate().skip(c) {
                    out[row + (f + c) * n] = p.get(r, c);
                }
            }
        }
        out
    }
}

/// Places every entry of `a` (already in factor ordering) at its row in the
/// owning supernode's panel; all other panel entries are zero.
pub fn scatter_a_into_factor(a: &SymmetricMatrix, s: &SymbolicFactor) -> Result<FactorStorage> {
    if a.n() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: a.n(),
        });
    }
    let mut storage = FactorStorage {
        values: vec![0.0; s.panel_storage()],
        state: StorageState::HoldsA,
    };
    for j in 0..a.n() {
        let sn = s.partition().supernode_of(j);
        let c = j - s.partition().first(sn);
        let rows = s.glbind(sn);
        let (off, nrows, _) = panel_range(s, sn);
        let (idx, vals) = a.column(j);
        let mut cursor = 0;
        for (&i, &v) in idx.iter().zip(vals) {
            cursor += rows[cursor..].partition_point(|&r| r < i);
            if rows.get(cursor) != Some(&i) {
                return Err(Error::SymbolicMismatch { row: i + 1, col: j + 1 });
            }
            storage.values[off + cursor + c * nrows] = v;
        }
    }
    Ok(storage)
}
