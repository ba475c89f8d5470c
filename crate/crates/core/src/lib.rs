//! Serial supernodal sparse Cholesky factorization.
//!
//! The pipeline is: choose a fill-reducing ordering, run the symbolic
//! analysis ([`symbolic::build_symbolic_factor`]), which also merges
//! supernodes and reorders columns within them, permute the matrix into the
//! factor ordering, and factor it with one of five interchangeable drivers
//! ([`numeric::factorize`]).
//!
//! ```
//! use snchol::{analyze, factorize, kernels::ReferenceKernels, Method, Ordering, SymbolicOptions};
//! use snchol::sparse::{apply_symmetric_permutation, grid_laplacian};
//!
//! let a = grid_laplacian(6, 5);
//! let s = analyze(a.pattern(), &Ordering::MinimumDegree, &SymbolicOptions::default()).unwrap();
//! let pa = apply_symmetric_permutation(&a, s.perm()).unwrap();
//! let f = factorize(&pa, &s, Method::RightLookingBlocked, &ReferenceKernels).unwrap();
//! let x = f.solve(&vec![1.0; a.n()]).unwrap();
//! assert_eq!(f.stats().workspace_peak, 0);
//! assert_eq!(x.len(), 30);
//! ```

pub mod error;
pub mod kernels;
pub mod numeric;
pub mod pr;
pub mod sparse;
pub mod symbolic;

pub use error::{Error, Result};
pub use numeric::{factorize, Factorization, Method, RunStats};
pub use symbolic::{build_symbolic_factor, Ordering, SymbolicFactor, SymbolicOptions};

/// Computes the ordering and builds the symbolic factor in one call.
pub fn analyze(a: &sparse::SymmetricPattern, ordering: &Ordering, options: &SymbolicOptions) -> Result<SymbolicFactor> {
    let p = ordering.permutation(a)?;
    build_symbolic_factor(a, &p, options)
}
