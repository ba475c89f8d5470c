//! Numerical factorization drivers, triangular solves and run accounting.

mod ll;
mod mf;
mod reference;
mod rl;
mod rlb;
mod solve;
mod stats;
mod storage;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use reference::{factor_reference, ColumnFactor};
pub use solve::solve_in_place;
pub use stats::RunStats;
pub use storage::{scatter_a_into_factor, FactorStorage, StorageState};

use crate::error::{Error, Result};
use crate::kernels::KernelBackend;
use crate::sparse::SymmetricMatrix;
use crate::symbolic::{IndexMode, RelativeIndexMap, SymbolicFactor};
use stats::Ops;

/// Factorization algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Column-by-column left-looking algorithm (the oracle).
    Reference,
    /// Multifrontal.
    Multifrontal,
    /// Left-looking supernodal.
    LeftLooking,
    /// Right-looking supernodal.
    RightLooking,
    /// Right-looking blocked supernodal, without scratch.
    RightLookingBlocked,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Reference,
        Method::Multifrontal,
        Method::LeftLooking,
        Method::RightLooking,
        Method::RightLookingBlocked,
    ];

    /// The four supernodal methods.
    pub const SUPERNODAL: [Method; 4] = [
        Method::Multifrontal,
        Method::LeftLooking,
        Method::RightLooking,
        Method::RightLookingBlocked,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Reference => "ref",
            Method::Multifrontal => "mf",
            Method::LeftLooking => "ll",
            Method::RightLooking => "rl",
            Method::RightLookingBlocked => "rlb",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName {
                what: "method",
                value: s.to_string(),
            })
    }
}

/// A completed factorization: the panels, the index map (back in global
/// mode), and the run's counters.
#[derive(Debug, Clone)]
pub struct Factorization<'s> {
    symbolic: &'s SymbolicFactor,
    storage: FactorStorage,
    map: RelativeIndexMap,
    stats: RunStats,
}

impl<'s> Factorization<'s> {
    pub fn symbolic(&self) -> &'s SymbolicFactor {
        self.symbolic
    }

    pub fn storage(&self) -> &FactorStorage {
        &self.storage
    }

    pub fn index_map(&self) -> &RelativeIndexMap {
        &self.map
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    /// `L[i, j]` in factor ordering.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.storage.entry(self.symbolic, i, j)
    }

    pub fn to_dense_lower(&self) -> Vec<f64> {
        self.storage.to_dense_lower(self.symbolic)
    }

    /// Solves `P A Pᵀ x = b` where `P` is the factor ordering.
    pub fn solve_permuted(&self, b: &[f64]) -> Result<Vec<f64>> {
        if self.map.mode() != IndexMode::Global {
            return Err(Error::WrongIndexMode {
                expected: "global",
                found: "relative",
            });
        }
        let mut x = b.to_vec();
        solve_in_place(&self.storage, self.symbolic, &mut x)?;
        Ok(x)
    }

    /// Solves `A x = b` in the original ordering.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.symbolic.n();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let perm = self.symbolic.perm();
        let mut pb = vec![0.0; n];
        for (i, &v) in b.iter().enumerate() {
            pb[perm.new_of(i)] = v;
        }
        let px = self.solve_permuted(&pb)?;
        Ok((0..n).map(|i| px[perm.new_of(i)]).collect())
    }
}

/// Factors `a`, which must already be in the symbolic factor's ordering
/// (see [`SymbolicFactor::perm`]).
pub fn factorize<'s>(
    a: &SymmetricMatrix,
    s: &'s SymbolicFactor,
    method: Method,
    backend: &dyn KernelBackend,
) -> Result<Factorization<'s>> {
    a.check_diagonal()?;
    let mut storage = scatter_a_into_factor(a, s)?;
    let mut map = RelativeIndexMap::new(s);
    let mut ops = Ops::new(backend);
    storage.set_state(StorageState::Partial);

    let started = Instant::now();
    let outcome = match method {
        Method::Reference => run_reference(a, s, &mut storage, &mut ops),
        Method::LeftLooking => ll::factor_ll(&mut storage, s, &mut ops),
        Method::Multifrontal | Method::RightLooking | Method::RightLookingBlocked => {
            map.to_relative(s)?;
            let result = match method {
                Method::Multifrontal => mf::factor_mf(&mut storage, s, &map, &mut ops),
                Method::RightLooking => rl::factor_rl(&mut storage, s, &map, &mut ops),
                _ => rlb::factor_rlb(&mut storage, s, &map, &mut ops).map(|()| 0),
            };
            // restore global indices whatever happened
            map.to_global(s)?;
            result
        }
    };
    let seconds = started.elapsed().as_secs_f64();
    let workspace_allocated = outcome?;
    storage.set_state(StorageState::HoldsL);

    let stats = RunStats {
        method,
        backend: if method == Method::Reference {
            "builtin".to_string()
        } else {
            ops.backend_name().to_string()
        },
        seconds,
        potrf_calls: ops.potrf,
        trsm_calls: ops.trsm,
        syrk_calls: ops.syrk,
        gemm_calls: ops.gemm,
        flops: ops.flops,
        factor_nnz: s.factor_nnz(),
        panel_storage: s.panel_storage(),
        workspace_allocated,
        workspace_peak: ops.workspace_peak,
        assembly_ops: ops.assembly,
        pair_calls: ops.pair_calls,
    };
    Ok(Factorization {
        symbolic: s,
        storage,
        map,
        stats,
    })
}

/// Runs the column algorithm on the true structure and copies the result into
/// the panels, so that every method yields the same storage format.
fn run_reference(a: &SymmetricMatrix, s: &SymbolicFactor, storage: &mut FactorStorage, ops: &mut Ops) -> Result<usize> {
    let l = factor_reference(a, s.columns())?;
    ops.flops += l.flops();
    for j in 0..s.nsuper() {
        let first = s.partition().first(j);
        let rows = s.glbind(j);
        let mut panel = storage.panel_mut(s, j);
        for c in 0..panel.cols() {
            let col = panel.col_mut(c);
            col.fill(0.0);
            let (li, lv) = l.column(first + c);
            let mut at = 0;
            for (&i, &v) in li.iter().zip(lv) {
                at += rows[at..].partition_point(|&r| r < i);
                debug_assert_eq!(rows[at], i, "true structure escapes the panel");
                col[at] = v;
            }
        }
    }
    // the dense work vector
    ops.touch_workspace(s.n());
    Ok(s.n())
}
