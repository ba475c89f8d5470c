//! Sparse symmetric matrices, permutations, file I/O and test-matrix
//! generation.

mod generate;
mod matrix;
mod mm;
mod ordering;
mod pattern;
mod permutation;

pub use generate::{generate_spd, grid_laplacian};
pub use matrix::{apply_symmetric_permutation, permute_pattern, SymmetricMatrix};
pub use mm::{parse_matrix_market, read_matrix_market, write_matrix_market};
pub use ordering::minimum_degree_order;
pub use pattern::SymmetricPattern;
pub use permutation::Permutation;
