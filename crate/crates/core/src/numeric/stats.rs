use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernels::{KernelBackend, KernelError, PanelMut, PanelRef};
use crate::numeric::Method;

/// Counters and sizes reported for one factorization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub method: Method,
    pub backend: String,
    /// Wall time of the numerical factorization alone.
    pub seconds: f64,
    pub potrf_calls: usize,
    pub trsm_calls: usize,
    pub syrk_calls: usize,
    pub gemm_calls: usize,
    /// Floating-point operations: multiply-add = 2, division = 1, square
    /// root = 1.
    pub flops: u64,
    /// Entries of the factor, diagonal included.
    pub factor_nnz: usize,
    /// Reals held by the factor panels.
    pub panel_storage: usize,
    /// Floating-point scratch allocated, in reals.
    pub workspace_allocated: usize,
    /// Largest amount of that scratch in use at once, in reals.
    pub workspace_peak: usize,
    /// Scatter-add operations through index lists.
    pub assembly_ops: u64,
    /// Kernel calls issued from each (source, target) supernode pair by the
    /// blocked right-looking driver.
    pub pair_calls: BTreeMap<(usize, usize), usize>,
}

impl RunStats {
    pub fn kernel_calls(&self) -> usize {
        self.potrf_calls + self.trsm_calls + self.syrk_calls + self.gemm_calls
    }

    /// Factor panels plus scratch, in reals.
    pub fn total_storage(&self) -> usize {
        self.panel_storage + self.workspace_allocated
    }
}

pub(crate) fn potrf_flops(n: u64) -> u64 {
    // n square roots, n(n-1)/2 divisions and sum_m m(m+1) multiply-add flops
    n + n * n.saturating_sub(1) / 2 + n.saturating_sub(1) * n * (n + 1) / 3
}

pub(crate) fn trsm_flops(m: u64, n: u64) -> u64 {
    m * n * n
}

pub(crate) fn syrk_flops(m: u64, k: u64) -> u64 {
    k * m * (m + 1)
}

pub(crate) fn gemm_flops(m: u64, n: u64, k: u64) -> u64 {
    2 * m * n * k
}

/// Counting front end to a kernel backend.
pub(crate) struct Ops<'a> {
    backend: &'a dyn KernelBackend,
    pub potrf: usize,
    pub trsm: usize,
    pub syrk: usize,
    pub gemm: usize,
    pub flops: u64,
    pub assembly: u64,
    pub workspace_peak: usize,
    pub pair_calls: BTreeMap<(usize, usize), usize>,
}

impl<'a> Ops<'a> {
    pub fn new(backend: &'a dyn KernelBackend) -> Self {
        Ops {
            backend,
            potrf: 0,
            trsm: 0,
            syrk: 0,
            gemm: 0,
            flops: 0,
            assembly: 0,
            workspace_peak: 0,
            pair_calls: BTreeMap::new(),
        }
    }

    pub fn backend_name(&self) -> &'static str {
        self.backend.name()
    }

    pub fn touch_workspace(&mut self, reals: usize) {
        self.workspace_peak = self.workspace_peak.max(reals);
    }

    /// Dense Cholesky of the diagonal block of supernode `j` followed by the
    /// triangular solve for the rows below it.
    pub fn cdiv(&mut self, panel: PanelMut<'_>, j: usize, first_col: usize) -> Result<()> {
        let ncols = panel.cols();
        let (mut top, bottom) = panel.split_at_row(ncols);
        self.potrf += 1;
        self.flops += potrf_flops(ncols as u64);
        self.backend.potrf(top.rb_mut()).map_err(|e| match e {
            KernelError::NotPositiveDefinite { index } => Error::NotPositiveDefinite {
                supernode: j,
                column: first_col + index,
            },
            other => Error::Kernel(other),
        })?;
        if bottom.rows() > 0 {
            self.trsm += 1;
            self.flops += trsm_flops(bottom.rows() as u64, ncols as u64);
            self.backend.trsm_right_lt(top.into_ref(), bottom)?;
        }
        Ok(())
    }

    pub fn syrk(&mut self, c: PanelMut<'_>, x: PanelRef<'_>) -> Result<()> {
        if c.rows() == 0 || x.cols() == 0 {
            return Ok(());
        }
        self.syrk += 1;
        self.flops += syrk_flops(c.rows() as u64, x.cols() as u64);
        Ok(self.backend.syrk_lower(c, x)?)
    }

    pub fn gemm(&mut self, c: PanelMut<'_>, x: PanelRef<'_>, y: PanelRef<'_>) -> Result<()> {
        if c.rows() == 0 || c.cols() == 0 || x.cols() == 0 {
            return Ok(());
        }
        self.gemm += 1;
        self.flops += gemm_flops(c.rows() as u64, c.cols() as u64, x.cols() as u64);
        Ok(self.backend.gemm_nt(c, x, y)?)
    }

    pub fn count_pair(&mut self, source: usize, target: usize, calls: usize) {
        if calls > 0 {
            *self.pair_calls.entry((source, target)).or_insert(0) += calls;
        }
    }
}
