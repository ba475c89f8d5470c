use crate::error::{Error, Result};
use crate::numeric::{FactorStorage, StorageState};
use crate::symbolic::SymbolicFactor;

/// Solves `L Lᵀ x = b` in place, in factor ordering, by a supernodal forward
/// substitution followed by a backward substitution.
pub fn solve_in_place(f: &FactorStorage, s: &SymbolicFactor, x: &mut [f64]) -> Result<()> {
    f.expect(StorageState::HoldsL)?;
    if x.len() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: x.len(),
        });
    }
    for j in 0..s.nsuper() {
        let panel = f.panel(s, j);
        let rows = s.glbind(j);
        let first = s.partition().first(j);
        for c in 0..panel.cols() {
            let col = panel.col(c);
            let v = x[first + c] / col[c];
            x[first + c] = v;
            for (&r, &l) in rows[c + 1..].iter().zip(&col[c + 1..]) {
                x[r] -= l * v;
            }
        }
    }
    for j in (0..s.nsuper()).rev() {
        let panel = f.panel(s, j);
        let rows = s.glbind(j);
        let first = s.partition().first(j);
        for c in (0..panel.cols()).rev() {
            let col = panel.col(c);
            let dot: f64 = rows[c + 1..].iter().zip(&col[c + 1..]).map(|(&r, &l)| l * x[r]).sum();
            x[first + c] = (x[first + c] - dot) / col[c];
        }
    }
    Ok(())
}
