use crate::error::{Error, Result};
use crate::kernels::PanelMut;
use crate::numeric::stats::Ops;
use crate::numeric::FactorStorage;
use crate::symbolic::{is_direct_target, SymbolicFactor};

/// Left-looking supernodal factorization.
///
/// Before supernode `J` is completed, every earlier supernode `K` whose rows
/// meet `J`'s columns contributes `L[R, K] L[R∩J, K]ᵀ`, where `R` are `K`'s
/// rows from `J`'s first column down. Positions in `J`'s panel come from
/// `indmap`, which holds the distance of each of `J`'s rows from the bottom of
/// its list. Single-column sources are applied as a fused scale-and-scatter;
/// sources whose rows land on consecutive panel rows are written by the
/// kernels in place; all others go through scratch and are assembled.
/// Returns the scratch size allocated.
pub(crate) fn factor_ll(f: &mut FactorStorage, s: &SymbolicFactor, ops: &mut Ops) -> Result<usize> {
    let capacity = s.plan().ll_update;
    let mut u = vec![0.0; capacity];
    let mut indmap = vec![0usize; s.n()];
    for j in 0..s.nsuper() {
        let list = s.glbind(j);
        let len = list.len();
        for (at, &r) in list.iter().enumerate() {
            indmap[r] = len - 1 - at;
        }
        let pos = |r: usize| len - 1 - indmap[r];

        for &k in s.updaters(j) {
            let (rows, q) = s.update_rows(k, j);
            let nr = rows.len();
            let nk = s.partition().size(k);
            let r0 = s.glbind(k).len() - nr;
            let (src, mut tgt) = f.pair_mut(s, k, j);
            let x = src.submatrix(r0, 0, nr, nk);
            let xq = x.submatrix(0, 0, q, nk);

            if nk == 1 {
                let xs = x.col(0);
                for c in 0..q {
                    let a = xs[c];
                    let col = tgt.col_mut(pos(rows[c]));
                    for r in c..nr {
                        col[pos(rows[r])] -= xs[r] * a;
                    }
                    ops.flops += 2 * (nr - c) as u64;
                    ops.assembly += (nr - c) as u64;
                }
            } else if is_direct_target(rows, q, pos) {
                let c0 = pos(rows[0]);
                ops.syrk(tgt.rb_mut().submatrix(c0, c0, q, q), xq)?;
                if nr > q {
                    let r1 = pos(rows[q]);
                    ops.gemm(tgt.rb_mut().submatrix(r1, c0, nr - q, q), x.submatrix(q, 0, nr - q, nk), xq)?;
                }
            } else {
                let need = nr * q;
                if need > capacity {
                    return Err(Error::WorkspaceOverflow {
                        needed: need,
                        available: capacity,
                    });
                }
                ops.touch_workspace(need);
                u[..need].fill(0.0);
                let mut uv = PanelMut::new(&mut u[..need], nr, q, nr);
                ops.syrk(uv.rb_mut().submatrix(0, 0, q, q), xq)?;
                ops.gemm(uv.submatrix(q, 0, nr - q, q), x.submatrix(q, 0, nr - q, nk), xq)?;
                for c in 0..q {
                    let col = tgt.col_mut(pos(rows[c]));
                    let src = &u[c * nr..(c + 1) * nr];
                    for r in c..nr {
                        col[pos(rows[r])] += src[r];
                    }
                    ops.assembly += (nr - c) as u64;
                }
            }
        }
        ops.cdiv(f.panel_mut(s, j), j, s.partition().first(j))?;
    }
    Ok(capacity)
}
