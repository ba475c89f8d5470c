//! Matrix sources: Matrix Market files or built-in generators.

use std::path::Path;

use anyhow::{bail, Context, Result};
use snchol::sparse::{generate_spd, grid_laplacian, read_matrix_market, SymmetricMatrix};

/// Loads a matrix named on the command line.
///
/// Besides a file path, two generators are accepted:
///
/// * `gen:grid:NXxNY` — five-point Laplacian on an `NX x NY` grid;
/// * `gen:spd:N:DENSITY` — random diagonally dominant matrix, drawn from `seed`.
pub fn load_matrix(spec: &str, seed: u64) -> Result<SymmetricMatrix> {
    let Some(generator) = spec.strip_prefix("gen:") else {
        return read_matrix_market(Path::new(spec)).with_context(|| format!("reading matrix {spec}"));
    };
    let parts: Vec<&str> = generator.split(':').collect();
    match parts.as_slice() {
        ["grid", dims] => {
            let (nx, ny) = dims.split_once('x').with_context(|| format!("grid size {dims:?} is not NXxNY"))?;
            let nx: usize = nx.parse().with_context(|| format!("bad grid width {nx:?}"))?;
            let ny: usize = ny.parse().with_context(|| format!("bad grid height {ny:?}"))?;
            if nx == 0 || ny == 0 {
                bail!("grid dimensions must be positive");
            }
            Ok(grid_laplacian(nx, ny))
        }
        ["spd", n, density] => {
            let n: usize = n.parse().with_context(|| format!("bad dimension {n:?}"))?;
            let density: f64 = density.parse().with_context(|| format!("bad density {density:?}"))?;
            if n == 0 || !(density > 0.0 && density <= 1.0) {
                bail!("gen:spd needs N >= 1 and DENSITY in (0, 1]");
            }
            Ok(generate_spd(n, density, seed))
        }
        _ => bail!("unknown generator {spec:?}; expected gen:grid:NXxNY or gen:spd:N:DENSITY"),
    }
}

/// Reads a matrix list: one source per line, blank lines and `#` comments
/// ignored.
pub fn read_list(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading matrix list {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            // relative paths are taken from the list's directory
            if l.starts_with("gen:") || Path::new(l).is_absolute() {
                l.to_string()
            } else {
                base.join(l).to_string_lossy().into_owned()
            }
        })
        .collect())
}

/// Reads a right-hand side: whitespace-separated numbers.
pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading vector {}", path.display()))?;
    text.split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("bad number {t:?} in {}", path.display())))
        .collect()
}

/// Short display name: the file stem, or the generator spec.
pub fn display_name(spec: &str) -> String {
    if spec.starts_with("gen:") {
        spec.to_string()
    } else {
        Path::new(spec)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_string())
    }
}
