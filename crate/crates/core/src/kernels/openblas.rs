use std::os::raw::{c_char, c_int};
use std::sync::Once;

use cblas_sys::{
    cblas_dgemm, cblas_dsyrk, cblas_dtrsm, CblasColMajor, CblasLower, CblasNoTrans, CblasNonUnit, CblasRight,
    CblasTrans,
};
use lapack_sys::dpotrf_;

use super::{check_gemm, check_potrf, check_syrk, check_trsm, KernelBackend, KernelError, PanelMut, PanelRef, THREADS_ENV};

// libopenblas provides the CBLAS and LAPACK symbols used above
#[link(name = "openblas")]
extern "C" {
    fn openblas_set_num_threads(n: c_int);
}

static THREADS: Once = Once::new();

/// Kernels backed by the system OpenBLAS.
#[derive(Debug, Clone, Copy)]
pub struct OpenBlasKernels(());

impl OpenBlasKernels {
    /// Initializes the library and checks it against the reference kernels
    /// on a small factorization. Some OpenBLAS builds pick broken kernels for
    /// the host CPU; `OPENBLAS_CORETYPE` (e.g. `Haswell`) overrides the choice.
    pub fn try_new() -> Result<Self, String> {
        let k = Self::new();
        let n = 64;
        let mut a = vec![0.0; n * n];
        for j in 0..n {
            a[j + j * n] = n as f64;
            for i in j + 1..n {
                a[i + j * n] = 0.5;
            }
        }
        let mut b = a.clone();
        super::ReferenceKernels.potrf(PanelMut::new(&mut a, n, n, n)).map_err(|e| e.to_string())?;
        let ok = k.potrf(PanelMut::new(&mut b, n, n, n)).is_ok()
            && (0..n).all(|j| (j..n).all(|i| (a[i + j * n] - b[i + j * n]).abs() <= 1e-12 * n as f64));
        if ok {
            Ok(k)
        } else {
            Err("system OpenBLAS failed its self-check; try OPENBLAS_CORETYPE=Haswell".to_string())
        }
    }

    pub fn new() -> Self {
        THREADS.call_once(|| {
            if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<c_int>().ok()) {
                if n > 0 {
                    // SAFETY: plain setter in the linked library
                    unsafe { openblas_set_num_threads(n) }
                }
            }
        });
        OpenBlasKernels(())
    }
}

impl Default for OpenBlasKernels {
    fn default() -> Self {
        Self::new()
    }
}

fn int(x: usize) -> c_int {
    c_int::try_from(x).expect("dimension exceeds the BLAS integer range")
}

impl KernelBackend for OpenBlasKernels {
    fn name(&self) -> &'static str {
        "openblas"
    }

    fn potrf(&self, mut a: PanelMut<'_>) -> Result<(), KernelError> {
        check_potrf(&a)?;
        if a.rows() == 0 {
            return Ok(());
        }
        let (n, ld) = (int(a.rows()), int(a.ld()));
        let mut info: c_int = 0;
        let uplo = b'L' as c_char;
        // SAFETY: the view is n x n with leading dimension ld
        unsafe { dpotrf_(&uplo, &n, a.as_mut_ptr(), &ld, &mut info) };
        match info {
            0 => Ok(()),
            i if i > 0 => Err(KernelError::NotPositiveDefinite { index: i as usize - 1 }),
            i => Err(KernelError::ShapeMismatch {
                kernel: "potrf",
                detail: format!("argument {} rejected", -i),
            }),
        }
    }

    fn trsm_right_lt(&self, t: PanelRef<'_>, mut b: PanelMut<'_>) -> Result<(), KernelError> {
        check_trsm(&t, &b)?;
        if let Some(j) = (0..t.rows()).find(|&j| t.get(j, j) == 0.0) {
            return Err(KernelError::ZeroDiagonal { index: j });
        }
        if b.rows() == 0 || b.cols() == 0 {
            return Ok(());
        }
        unsafe {
            cblas_dtrsm(
                CblasColMajor,
                CblasRight,
                CblasLower,
                CblasTrans,
                CblasNonUnit,
                int(b.rows()),
                int(b.cols()),
                1.0,
                t.as_ptr(),
                int(t.ld()),
                b.as_mut_ptr(),
                int(b.ld()),
            )
        };
        Ok(())
    }

    fn syrk_lower(&self, mut c: PanelMut<'_>, x: PanelRef<'_>) -> Result<(), KernelError> {
        check_syrk(&c, &x)?;
        if c.rows() == 0 || x.cols() == 0 {
            return Ok(());
        }
        unsafe {
            cblas_dsyrk(
                CblasColMajor,
                CblasLower,
                CblasNoTrans,
                int(c.rows()),
                int(x.cols()),
                -1.0,
                x.as_ptr(),
                int(x.ld()),
                1.0,
                c.as_mut_ptr(),
                int(c.ld()),
            )
        };
        Ok(())
    }

    fn gemm_nt(&self, mut c: PanelMut<'_>, x: PanelRef<'_>, y: PanelRef<'_>) -> Result<(), KernelError> {
        check_gemm(&c, &x, &y)?;
        if c.rows() == 0 || c.cols() == 0 || x.cols() == 0 {
            return Ok(());
        }
        unsafe {
            cblas_dgemm(
                CblasColMajor,
                CblasNoTrans,
                CblasTrans,
                int(c.rows()),
                int(c.cols()),
                int(x.cols()),
                -1.0,
                x.as_ptr(),
                int(x.ld()),
                y.as_ptr(),
                int(y.ld()),
                1.0,
                c.as_mut_ptr(),
                int(c.ld()),
            )
        };
        Ok(())
    }
}
