use crate::error::{Error, Result};
use crate::kernels::PanelMut;
use crate::numeric::stats::Ops;
use crate::numeric::FactorStorage;
use crate::symbolic::{compose_in_place, RelativeIndexMap, SymbolicFactor};

/// Right-looking supernodal factorization with one square update matrix.
///
/// Each supernode is completed as soon as it is reached, its whole update
/// matrix is formed in scratch, and the matrix is then distributed up the
/// tree: the columns belonging to the parent are assembled first, the
/// remaining rows are re-indexed into the grandparent's list by composing
/// relative indices, and so on until nothing is left. Returns the scratch
/// size allocated.
pub(crate) fn factor_rl(f: &mut FactorStorage, s: &SymbolicFactor, map: &RelativeIndexMap, ops: &mut Ops) -> Result<usize> {
    let capacity = s.plan().rl_update;
    let mut u = vec![0.0; capacity];
    let mut rel: Vec<usize> = Vec::new();
    for j in 0..s.nsuper() {
        let first = s.partition().first(j);
        let nj = s.partition().size(j);
        ops.cdiv(f.panel_mut(s, j), j, first)?;
        let m = s.below(j).len();
        if m == 0 {
            continue;
        }
        let need = m * m;
        if need > capacity {
            return Err(Error::WorkspaceOverflow {
                needed: need,
                available: capacity,
            });
        }
        ops.touch_workspace(need);
        for c in 0..m {
            u[c * m + c..(c + 1) * m].fill(0.0);
        }
        let below = f.panel(s, j).submatrix(nj, 0, m, nj);
        ops.syrk(PanelMut::new(&mut u[..need], m, m, m), below)?;

        rel.clear();
        rel.extend_from_slice(map.relind(j)?);
        let mut start = 0;
        let mut p = s.parent(j).expect("supernode with off-diagonal rows has a parent");
        loop {
            let len = s.glbind(p).len();
            let np = s.partition().size(p);
            let q = rel[start..].iter().take_while(|&&d| len - 1 - d < np).count();
            let mut target = f.panel_mut(s, p);
            for c in start..start + q {
                let col = target.col_mut(len - 1 - rel[c]);
                let src = &u[c * m..(c + 1) * m];
                for r in c..m {
                    col[len - 1 - rel[r]] += src[r];
                }
                ops.assembly += (m - c) as u64;
            }
            start += q;
            if start == m {
                break;
            }
            compose_in_place(&mut rel[start..], map.relind(p)?);
            p = s.parent(p).expect("remaining rows belong to an ancestor");
        }
    }
    Ok(capacity)
}
