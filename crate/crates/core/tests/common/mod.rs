//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use snchol::sparse::{SymmetricMatrix, SymmetricPattern};

/// Strictly-lower entries of the 9 x 9 worked example, 0-based `(row, col)`.
pub const EXAMPLE_LOWER: [(usize, usize); 17] = [
    (1, 0),
    (4, 0),
    (5, 0),
    (8, 0),
    (4, 1),
    (8, 1),
    (3, 2),
    (4, 2),
    (6, 2),
    (7, 2),
    (4, 3),
    (7, 3),
    (5, 4),
    (7, 4),
    (6, 5),
    (8, 5),
    (7, 6),
];

pub fn example_pattern() -> SymmetricPattern {
    SymmetricPattern::from_entries(9, EXAMPLE_LOWER.iter().copied().chain([(8, 7)])).unwrap()
}

/// The example with unit off-diagonals and 10 on the diagonal.
pub fn example_matrix() -> SymmetricMatrix {
    let mut t: Vec<(usize, usize, f64)> = EXAMPLE_LOWER.iter().chain(&[(8, 7)]).map(|&(i, j)| (i, j, 1.0)).collect();
    t.extend((0..9).map(|i| (i, i, 10.0)));
    SymmetricMatrix::from_triplets(9, &t).unwrap()
}

/// Dense lower Cholesky of a column-major symmetric matrix; `None` when a
/// pivot is not positive.
pub fn dense_cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j + j * n];
        for k in 0..j {
            d -= l[j + k * n] * l[j + k * n];
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        l[j + j * n] = d;
        for i in j + 1..n {
            let mut v = a[i + j * n];
            for k in 0..j {
                v -= l[i + k * n] * l[j + k * n];
            }
            l[i + j * n] = v / d;
        }
    }
    Some(l)
}

/// Largest entrywise difference relative to the largest entry of `want`.
pub fn max_rel_diff(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

pub fn relative_residual(a: &SymmetricMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let num: f64 = ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    num / den
}

/// Column structures of `L` by eliminating a dense boolean copy of the
/// pattern.
pub fn brute_force_structure(p: &SymmetricPattern) -> Vec<Vec<usize>> {
    let n = p.n();
    let mut m = vec![vec![false; n]; n];
    for j in 0..n {
        for &i in p.column(j) {
            m[i][j] = true;
            m[j][i] = true;
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let below: Vec<usize> = (k + 1..n).filter(|&i| m[i][k]).collect();
        for &a in &below {
            for &b in &below {
                m[a][b] = true;
            }
        }
        let mut col = vec![k];
        col.extend(below);
        out.push(col);
    }
    out
}

/// Random symmetric pattern with about `density` of the strictly lower
/// entries present.
pub fn random_pattern(n: usize, density: f64, seed: u64) -> SymmetricPattern {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for j in 0..n {
        for i in j + 1..n {
            if rng.random::<f64>() < density {
                entries.push((i, j));
            }
        }
    }
    SymmetricPattern::from_entries(n, entries).unwrap()
}
