//! Reproducible SPD test matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sparse::SymmetricMatrix;

/// Random symmetric, strictly diagonally dominant matrix.
///
/// Each strictly-lower position is kept with probability `density` and given
/// a value in `[-1, 1)`. Every diagonal is `1 +` the sum of absolute
/// off-diagonals in its row. Identical `(n, density, seed)` give bit-identical
/// output.
pub fn generate_spd(n: usize, density: f64, seed: u64) -> SymmetricMatrix {
    assert!(n >= 1, "dimension must be at least 1");
    assert!(density > 0.0 && density <= 1.0, "density must lie in (0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row_sum = vec![0.0f64; n];
    let mut triplets = Vec::new();
    for j in 0..n {
        for i in j + 1..n {
            if rng.random::<f64>() < density {
                let v: f64 = rng.random_range(-1.0..1.0);
                row_sum[i] += v.abs();
                row_sum[j] += v.abs();
                triplets.push((i, j, v));
            }
        }
    }
    triplets.extend((0..n).map(|j| (j, j, 1.0 + row_sum[j])));
    SymmetricMatrix::from_triplets(n, &triplets).expect("generated entries are in range")
}

/// Five-point Laplacian on an `nx x ny` grid with Dirichlet boundary, numbered
/// row by row.
pub fn grid_laplacian(nx: usize, ny: usize) -> SymmetricMatrix {
    assert!(nx >= 1 && ny >= 1);
    let id = |x: usize, y: usize| y * nx + x;
    let mut triplets = Vec::with_capacity(3 * nx * ny);
    for y in 0..ny {
        for x in 0..nx {
            let k = id(x, y);
            triplets.push((k, k, 4.0));
            if x + 1 < nx {
                triplets.push((id(x + 1, y), k, -1.0));
            }
            if y + 1 < ny {
                triplets.push((id(x, y + 1), k, -1.0));
            }
        }
    }
    SymmetricMatrix::from_triplets(nx * ny, &triplets).expect("grid entries are in range")
}
