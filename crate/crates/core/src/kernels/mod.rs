//! Dense kernels on column-major panels.
//!
//! All updates subtract: `syrk_lower` computes `C -= X Xᵀ` and `gemm_nt`
//! computes `C -= X Yᵀ`. The reference backend is portable Rust; enabling the
//! `openblas` feature adds a backend that calls the system BLAS and LAPACK.

mod view;

#[cfg(feature = "openblas")]
mod openblas;

pub use view::{PanelMut, PanelRef};

/// Environment variable read once, when the vendor backend is first
/// created, to size its thread pool.
pub const THREADS_ENV: &str = "SNCHOL_NUM_THREADS";

#[cfg(feature = "openblas")]
pub use openblas::OpenBlasKernels;

use thiserror::Error;

/// Failures reported by a kernel. Indices are 0-based within the kernel's
/// operands.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("non-positive pivot at local column {index}")]
    NotPositiveDefinite { index: usize },
    #[error("zero diagonal at local column {index}")]
    ZeroDiagonal { index: usize },
    #[error("{kernel}: shape mismatch ({detail})")]
    ShapeMismatch { kernel: &'static str, detail: String },
}

/// The four dense operations every factorization driver is written against.
pub trait KernelBackend: Send + Sync {
    fn name(&self) -> &'static str;

    /// Lower Cholesky factor of the square `a`, in place. The strict upper
    /// triangle is not touched.
    fn potrf(&self, a: PanelMut<'_>) -> Result<(), KernelError>;

    /// `b <- b · t⁻ᵀ` with `t` lower triangular.
    fn trsm_right_lt(&self, t: PanelRef<'_>, b: PanelMut<'_>) -> Result<(), KernelError>;

    /// Lower triangle of `c -= x · xᵀ`.
    fn syrk_lower(&self, c: PanelMut<'_>, x: PanelRef<'_>) -> Result<(), KernelError>;

    /// `c -= x · yᵀ`.
    fn gemm_nt(&self, c: PanelMut<'_>, x: PanelRef<'_>, y: PanelRef<'_>) -> Result<(), KernelError>;
}

fn shape(kernel: &'static str, detail: String) -> KernelError {
    KernelError::ShapeMismatch { kernel, detail }
}

pub(crate) fn check_potrf(a: &PanelMut<'_>) -> Result<(), KernelError> {
    if a.rows() != a.cols() {
        return Err(shape("potrf", format!("{} x {} is not square", a.rows(), a.cols())));
    }
    Ok(())
}

pub(crate) fn check_trsm(t: &PanelRef<'_>, b: &PanelMut<'_>) -> Result<(), KernelError> {
    if t.rows() != t.cols() || b.cols() != t.rows() {
        return Err(shape(
            "trsm",
            format!("triangle {} x {}, panel {} x {}", t.rows(), t.cols(), b.rows(), b.cols()),
        ));
    }
    Ok(())
}

pub(crate) fn check_syrk(c: &PanelMut<'_>, x: &PanelRef<'_>) -> Result<(), KernelError> {
    if c.rows() != c.cols() || c.rows() != x.rows() {
        return Err(shape(
            "syrk",
            format!("target {} x {}, operand {} x {}", c.rows(), c.cols(), x.rows(), x.cols()),
        ));
    }
    Ok(())
}

pub(crate) fn check_gemm(c: &PanelMut<'_>, x: &PanelRef<'_>, y: &PanelRef<'_>) -> Result<(), KernelError> {
    if x.cols() != y.cols() || c.rows() != x.rows() || c.cols() != y.rows() {
        return Err(shape(
            "gemm",
            format!(
                "target {} x {}, operands {} x {} and {} x {}",
                c.rows(),
                c.cols(),
                x.rows(),
                x.cols(),
                y.rows(),
                y.cols()
            ),
        ));
    }
    Ok(())
}

/// Portable kernels: column-oriented loops with four-way unrolling over the
/// inner dimension.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReferenceKernels;

/// `y -= a * x`
#[inline]
fn axpy_sub(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= a * xi;
    }
}

/// `y -= sum_p a[p] * x_p` for four columns at once.
#[inline]
fn axpy4_sub(y: &mut [f64], a: [f64; 4], x: [&[f64]; 4]) {
    let n = y.len();
    let (x0, x1, x2, x3) = (&x[0][..n], &x[1][..n], &x[2][..n], &x[3][..n]);
    for i in 0..n {
        y[i] -= a[0] * x0[i] + a[1] * x1[i] + a[2] * x2[i] + a[3] * x3[i];
    }
}

impl KernelBackend for ReferenceKernels {
    fn name(&self) -> &'static str {
        "reference"
    }

    fn potrf(&self, mut a: PanelMut<'_>) -> Result<(), KernelError> {
        check_potrf(&a)?;
        let n = a.rows();
        for k in 0..n {
            let d = a.get(k, k);
            if !(d > 0.0) || !d.is_finite() {
                return Err(KernelError::NotPositiveDefinite { index: k });
            }
            let d = d.sqrt();
            let col = a.col_mut(k);
            col[k] = d;
            let inv = 1.0 / d;
            for v in &mut col[k + 1..] {
                *v *= inv;
            }
            for j in k + 1..n {
                let (target, source) = a.two_cols(j, k, j);
                axpy_sub(target, source[0], source);
            }
        }
        Ok(())
    }

    fn trsm_right_lt(&self, t: PanelRef<'_>, mut b: PanelMut<'_>) -> Result<(), KernelError> {
        check_trsm(&t, &b)?;
        let n = t.rows();
        for j in 0..n {
            let d = t.get(j, j);
            if d == 0.0 {
                return Err(KernelError::ZeroDiagonal { index: j });
            }
            let (target, done) = b.col_and_prefix(j, 0);
            let mut k = 0;
            while k + 4 <= j {
                let a = [t.get(j, k), t.get(j, k + 1), t.get(j, k + 2), t.get(j, k + 3)];
                axpy4_sub(target, a, [done.col(k), done.col(k + 1), done.col(k + 2), done.col(k + 3)]);
                k += 4;
            }
            for k in k..j {
                axpy_sub(target, t.get(j, k), done.col(k));
            }
            let inv = 1.0 / d;
            for v in target {
                *v *= inv;
            }
        }
        Ok(())
    }

    fn syrk_lower(&self, mut c: PanelMut<'_>, x: PanelRef<'_>) -> Result<(), KernelError> {
        check_syrk(&c, &x)?;
        let (m, k) = (x.rows(), x.cols());
        for j in 0..m {
            let target = &mut c.col_mut(j)[j..];
            let mut p = 0;
            while p + 4 <= k {
                let a = [x.get(j, p), x.get(j, p + 1), x.get(j, p + 2), x.get(j, p + 3)];
                let cols = [&x.col(p)[j..], &x.col(p + 1)[j..], &x.col(p + 2)[j..], &x.col(p + 3)[j..]];
                axpy4_sub(target, a, cols);
                p += 4;
            }
            for p in p..k {
                axpy_sub(target, x.get(j, p), &x.col(p)[j..]);
            }
        }
        Ok(())
    }

    fn gemm_nt(&self, mut c: PanelMut<'_>, x: PanelRef<'_>, y: PanelRef<'_>) -> Result<(), KernelError> {
        check_gemm(&c, &x, &y)?;
        let (n, k) = (y.rows(), x.cols());
        for j in 0..n {
            let target = c.col_mut(j);
            let mut p = 0;
            while p + 4 <= k {
                let a = [y.get(j, p), y.get(j, p + 1), y.get(j, p + 2), y.get(j, p + 3)];
                axpy4_sub(target, a, [x.col(p), x.col(p + 1), x.col(p + 2), x.col(p + 3)]);
                p += 4;
            }
            for p in p..k {
                axpy_sub(target, y.get(j, p), x.col(p));
            }
        }
        Ok(())
    }
}

/// Looks a backend up by its command-line name: `reference`, or `vendor`
/// (also `openblas`) when built with the `openblas` feature.
pub fn backend_by_name(name: &str) -> crate::error::Result<Box<dyn KernelBackend>> {
    match name {
        "reference" | "ref" => Ok(Box::new(ReferenceKernels)),
        #[cfg(feature = "openblas")]
        "vendor" | "openblas" => OpenBlasKernels::try_new()
            .map(|k| Box::new(k) as Box<dyn KernelBackend>)
            .map_err(crate::error::Error::BackendUnavailable),
        #[cfg(not(feature = "openblas"))]
        "vendor" | "openblas" => Err(crate::error::Error::BackendUnavailable(format!(
            "{name} (built without the openblas feature)"
        ))),
        other => Err(crate::error::Error::UnknownName {
            what: "backend",
            value: other.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const K: ReferenceKernels = ReferenceKernels;

    fn random(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    /// Column-major SPD matrix `B Bᵀ + n I`.
    fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let b = random(rng, n * n);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i + j * n] = (0..n).map(|k| b[i + k * n] * b[j + k * n]).sum::<f64>();
            }
            a[i + i * n] += n as f64;
        }
        a
    }

    fn frobenius(a: &[f64]) -> f64 {
        a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn potrf_small_cases() {
        let mut a = vec![4.0];
        K.potrf(PanelMut::new(&mut a, 1, 1, 1)).unwrap();
        assert_eq!(a, vec![2.0]);

        let mut a = vec![4.0, 2.0, f64::NAN, 5.0];
        K.potrf(PanelMut::new(&mut a, 2, 2, 2)).unwrap();
        assert_eq!((a[0], a[1], a[3]), (2.0, 1.0, 2.0));
        assert!(a[2].is_nan(), "strict upper triangle must not be touched");
    }

    #[test]
    fn potrf_reports_the_failing_pivot() {
        let mut a = vec![1.0, 2.0, 0.0, 1.0];
        let err = K.potrf(PanelMut::new(&mut a, 2, 2, 2)).unwrap_err();
        assert_eq!(err, KernelError::NotPositiveDefinite { index: 1 });
    }

    #[test]
    fn potrf_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 8;
        let a = random_spd(&mut rng, n);
        let mut l = a.clone();
        K.potrf(PanelMut::new(&mut l, n, n, n)).unwrap();
        let mut diff = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let llt: f64 = (0..=j).map(|k| l[i + k * n] * l[j + k * n]).sum();
                diff[i + j * n] = a[i + j * n] - llt;
            }
        }
        assert!(frobenius(&diff) / frobenius(&a) <= 64.0 * f64::EPSILON);
    }

    #[test]
    fn trsm_cases() {
        let t = [2.0];
        let mut b = vec![6.0];
        K.trsm_right_lt(PanelRef::new(&t, 1, 1, 1), PanelMut::new(&mut b, 1, 1, 1)).unwrap();
        assert_eq!(b, vec![3.0]);

        let eye = [1.0, 0.0, 0.0, 1.0];
        let mut b = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let orig = b.clone();
        K.trsm_right_lt(PanelRef::new(&eye, 2, 2, 2), PanelMut::new(&mut b, 3, 2, 3)).unwrap();
        assert_eq!(b, orig);

        let zero = [0.0];
        let mut b = vec![1.0];
        assert_eq!(
            K.trsm_right_lt(PanelRef::new(&zero, 1, 1, 1), PanelMut::new(&mut b, 1, 1, 1)),
            Err(KernelError::ZeroDiagonal { index: 0 })
        );
    }

    #[test]
    fn trsm_multiplies_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (m, n) = (6, 7);
        let mut t = random_spd(&mut rng, n);
        K.potrf(PanelMut::new(&mut t, n, n, n)).unwrap();
        let b0 = random(&mut rng, m * n);
        let mut x = b0.clone();
        K.trsm_right_lt(PanelRef::new(&t, n, n, n), PanelMut::new(&mut x, m, n, m)).unwrap();
        for i in 0..m {
            for j in 0..n {
                let back: f64 = (0..=j).map(|k| x[i + k * m] * t[j + k * n]).sum();
                assert!((back - b0[i + j * m]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn syrk_cases() {
        let x = [1.0, 2.0];
        let mut c = vec![0.0, 0.0, f64::NAN, 0.0];
        K.syrk_lower(PanelMut::new(&mut c, 2, 2, 2), PanelRef::new(&x, 2, 1, 2)).unwrap();
        assert_eq!((c[0], c[1], c[3]), (-1.0, -2.0, -4.0));
        assert!(c[2].is_nan());

        let mut c = vec![3.0; 4];
        K.syrk_lower(PanelMut::new(&mut c, 2, 2, 2), PanelRef::new(&[], 2, 0, 2)).unwrap();
        assert_eq!(c, vec![3.0; 4]);

        let mut c = vec![0.0; 4];
        assert!(matches!(
            K.syrk_lower(PanelMut::new(&mut c, 2, 2, 2), PanelRef::new(&x, 1, 1, 1)),
            Err(KernelError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn syrk_and_gemm_match_triple_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(m, n, k) in &[(1, 1, 1), (5, 3, 4), (9, 7, 11), (13, 2, 6)] {
            let ld = m + 2;
            let x = random(&mut rng, ld * k);
            let y = random(&mut rng, n * k);
            let c0 = random(&mut rng, ld * m);
            let mut c = c0.clone();
            K.syrk_lower(PanelMut::new(&mut c, m, m, ld), PanelRef::new(&x, m, k, ld)).unwrap();
            for j in 0..m {
                for i in 0..m {
                    let got = c[i + j * ld];
                    if i < j {
                        assert_eq!(got, c0[i + j * ld], "upper triangle modified");
                    } else {
                        let want = c0[i + j * ld] - (0..k).map(|p| x[i + p * ld] * x[j + p * ld]).sum::<f64>();
                        assert!((got - want).abs() <= 2.0 * k as f64 * f64::EPSILON * 4.0);
                    }
                }
            }

            let mut c = c0.clone();
            K.gemm_nt(PanelMut::new(&mut c, m, n, ld), PanelRef::new(&x, m, k, ld), PanelRef::new(&y, n, k, n))
                .unwrap();
            for j in 0..n {
                for i in 0..m {
                    let want = c0[i + j * ld] - (0..k).map(|p| x[i + p * ld] * y[j + p * n]).sum::<f64>();
                    assert!((c[i + j * ld] - want).abs() <= 2.0 * k as f64 * f64::EPSILON * 4.0);
                }
            }
        }
    }

    #[test]
    fn gemm_cases() {
        let mut c = vec![0.0];
        K.gemm_nt(PanelMut::new(&mut c, 1, 1, 1), PanelRef::new(&[1.0], 1, 1, 1), PanelRef::new(&[2.0], 1, 1, 1))
            .unwrap();
        assert_eq!(c, vec![-2.0]);

        let mut c = vec![1.0, 2.0];
        K.gemm_nt(
            PanelMut::new(&mut c, 2, 1, 2),
            PanelRef::new(&[3.0, 4.0], 2, 1, 2),
            PanelRef::new(&[0.0], 1, 1, 1),
        )
        .unwrap();
        assert_eq!(c, vec![1.0, 2.0]);
    }

    #[test]
    fn cdiv_matches_dense_columns() {
        // factor the leading 3 columns of an SPD matrix as a 3-column panel
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 7;
        let a = random_spd(&mut rng, n);
        let mut dense = a.clone();
        K.potrf(PanelMut::new(&mut dense, n, n, n)).unwrap();
        let mut panel: Vec<f64> = a[..3 * n].to_vec();
        let (top, bottom) = PanelMut::new(&mut panel, n, 3, n).split_at_row(3);
        let mut top = top;
        K.potrf(top.rb_mut()).unwrap();
        K.trsm_right_lt(top.rb(), bottom).unwrap();
        for j in 0..3 {
            for i in j..n {
                assert!((panel[i + j * n] - dense[i + j * n]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn backend_names() {
        assert_eq!(backend_by_name("reference").unwrap().name(), "reference");
        assert!(backend_by_name("cuda").is_err());
    }
}
