use crate::error::Result;
use crate::numeric::stats::Ops;
use crate::numeric::FactorStorage;
use crate::symbolic::{compose_in_place, extract_block_relind, RelativeIndexMap, SymbolicFactor};

/// Blocked right-looking factorization without floating-point scratch.
///
/// After `cdiv(J)`, each dense block `B` of `J` is applied straight into the
/// panel of the ancestor that owns `B`'s rows: one `syrk` for `L[B, B]` and
/// one `gemm` per maximal run `B′` of the blocks below `B` that is contiguous
/// in that ancestor's row list. Block positions are tracked by one relative
/// index per block, composed up the tree as in the right-looking driver.
pub(crate) fn factor_rlb(f: &mut FactorStorage, s: &SymbolicFactor, map: &RelativeIndexMap, ops: &mut Ops) -> Result<()> {
    let mut offsets: Vec<usize> = Vec::new();
    for j in 0..s.nsuper() {
        let nj = s.partition().size(j);
        ops.cdiv(f.panel_mut(s, j), j, s.partition().first(j))?;
        let blocks = s.blocks(j);
        let nb = blocks.len();
        if nb == 0 {
            continue;
        }
        let mut relb = extract_block_relind(map.relind(j)?, blocks)?;
        offsets.clear();
        let mut at = nj;
        for &b in blocks {
            offsets.push(at);
            at += b;
        }

        let mut b0 = 0;
        let mut p = s.parent(j).expect("supernode with off-diagonal rows has a parent");
        loop {
            let len = s.glbind(p).len();
            let np = s.partition().size(p);
            let b1 = b0 + relb[b0..].iter().take_while(|&&d| len - 1 - d < np).count();
            let (src, mut tgt) = f.pair_mut(s, j, p);
            let mut calls = 0;
            for b in b0..b1 {
                let cpos = len - 1 - relb[b];
                let size = blocks[b];
                let xb = src.submatrix(offsets[b], 0, size, nj);
                ops.syrk(tgt.rb_mut().submatrix(cpos, cpos, size, size), xb)?;
                calls += 1;
                let mut lo = b + 1;
                while lo < nb {
                    let mut hi = lo + 1;
                    let mut rows = blocks[lo];
                    while hi < nb && relb[hi] + blocks[hi - 1] == relb[hi - 1] {
                        rows += blocks[hi];
                        hi += 1;
                    }
                    let rpos = len - 1 - relb[lo];
                    ops.gemm(
                        tgt.rb_mut().submatrix(rpos, cpos, rows, size),
                        src.submatrix(offsets[lo], 0, rows, nj),
                        xb,
                    )?;
                    calls += 1;
                    lo = hi;
                }
            }
            ops.count_pair(j, p, calls);
            b0 = b1;
            if b0 == nb {
                break;
            }
            compose_in_place(&mut relb[b0..], map.relind(p)?);
            p = s.parent(p).expect("remaining blocks belong to an ancestor");
        }
    }
    Ok(())
}
