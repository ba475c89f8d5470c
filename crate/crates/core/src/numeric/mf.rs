use crate::error::{Error, Result};
use crate::kernels::PanelMut;
use crate::numeric::stats::Ops;
use crate::numeric::FactorStorage;
use crate::symbolic::{packed_size, RelativeIndexMap, SymbolicFactor};

/// A packed update matrix on the stack: owner, offset, order.
#[derive(Debug, Clone, Copy)]
struct Item {
    owner: usize,
    start: usize,
    rows: usize,
}

/// Multifrontal factorization over a single stack of packed update matrices.
///
/// Supernodes are visited in the sibling-optimized postorder. At `J` the
/// children's items are on top of the stack. The most recently pushed one is
/// expanded in place into `J`'s square update matrix (entries move to equal
/// or higher addresses, so a reverse sweep never overwrites unread data); the
/// others are scatter-added into it. After `cdiv(J)` and the `syrk` into the
/// square matrix, the columns belonging to the parent are assembled into the
/// parent's panel and the rest is packed down to where the first child's
/// item began. Space above the top of the stack is kept zero throughout.
/// Returns the arena size allocated.
pub(crate) fn factor_mf(f: &mut FactorStorage, s: &SymbolicFactor, map: &RelativeIndexMap, ops: &mut Ops) -> Result<usize> {
    let capacity = s.plan().mf_stack;
    let mut stack = vec![0.0; capacity];
    let mut items: Vec<Item> = Vec::new();
    let mut top = 0usize;

    for &j in s.mf_order() {
        let kids = s.mf_children(j);
        assert!(
            items.len() >= kids.len() && items[items.len() - kids.len()..].iter().map(|it| it.owner).eq(kids.iter().copied()),
            "children of supernode {j} are not on top of the stack"
        );
        let popped = items.split_off(items.len() - kids.len());
        let base = popped.first().map_or(top, |it| it.start);
        let frontal = popped.last().map_or(top, |it| it.start);
        let m = s.below(j).len();
        let end = frontal + m * m;
        if end > capacity {
            return Err(Error::WorkspaceOverflow {
                needed: end,
                available: capacity,
            });
        }
        ops.touch_workspace(end);

        // row of J's update matrix for each retained row of a child
        let child_rows = |c: usize, r: usize| -> Result<Vec<usize>> {
            let rel = map.relind(c)?;
            Ok(rel[rel.len() - r..].iter().map(|&d| m - 1 - d).collect())
        };

        if let Some(&last) = popped.last() {
            let at = child_rows(last.owner, last.rows)?;
            let r = last.rows;
            let mut k = packed_size(r);
            for b in (0..r).rev() {
                for a in (b..r).rev() {
                    k -= 1;
                    let src = last.start + k;
                    let dst = frontal + at[a] + at[b] * m;
                    debug_assert!(dst >= src);
                    let v = std::mem::replace(&mut stack[src], 0.0);
                    stack[dst] = v;
                }
            }
        }
        for item in &popped[..popped.len().saturating_sub(1)] {
            let at = child_rows(item.owner, item.rows)?;
            let r = item.rows;
            let mut k = item.start;
            for b in 0..r {
                for a in b..r {
                    let v = std::mem::replace(&mut stack[k], 0.0);
                    stack[frontal + at[a] + at[b] * m] += v;
                    k += 1;
                }
            }
            ops.assembly += packed_size(r) as u64;
        }

        let nj = s.partition().size(j);
        ops.cdiv(f.panel_mut(s, j), j, s.partition().first(j))?;

        if m == 0 {
            items.push(Item {
                owner: j,
                start: base,
                rows: 0,
            });
            top = base;
            continue;
        }

        let below = f.panel(s, j).submatrix(nj, 0, m, nj);
        ops.syrk(PanelMut::new(&mut stack[frontal..end], m, m, m), below)?;

        let p = s.parent(j).expect("supernode with off-diagonal rows has a parent");
        let rel = map.relind(j)?;
        let len = s.glbind(p).len();
        let np = s.partition().size(p);
        let q = rel.iter().take_while(|&&d| len - 1 - d < np).count();
        let mut target = f.panel_mut(s, p);
        for c in 0..q {
            let col = target.col_mut(len - 1 - rel[c]);
            let u = &mut stack[frontal + c * m..frontal + (c + 1) * m];
            for r in c..m {
                col[len - 1 - rel[r]] += std::mem::replace(&mut u[r], 0.0);
            }
            ops.assembly += (m - c) as u64;
        }

        // pack the trailing (m - q) x (m - q) triangle down to `base`
        let mut k = base;
        for b in q..m {
            for a in b..m {
                let src = frontal + a + b * m;
                debug_assert!(k <= src);
                let v = std::mem::replace(&mut stack[src], 0.0);
                stack[k] = v;
                k += 1;
            }
        }
        items.push(Item {
            owner: j,
            start: base,
            rows: m - q,
        });
        top = k;
    }
    debug_assert_eq!(top, 0, "stack not empty at termination");
    debug_assert!(stack.iter().all(|&v| v == 0.0));
    Ok(capacity)
}
