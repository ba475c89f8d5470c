//! Partition-refinement reordering of columns within supernodes.
//!
//! Every descendant `K` that updates a supernode `P` touches the rows
//! `glbind(K) ∩ P`. Each such set becomes one dense block of `K`'s panel when
//! its rows are consecutive in `P`. Refining an ordered partition of `P`'s
//! columns by these sets tends to make them consecutive.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::sparse::{permute_pattern, Permutation};
use crate::symbolic::{elimination_tree, symbolic_factorization, SymbolicFactor};

/// An ordered partition of a ground set into disjoint nonempty cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPartition {
    cells: Vec<Vec<usize>>,
    ground: HashSet<usize>,
}

impl OrderedPartition {
    /// The one-cell partition of `ground`, in the given order.
    pub fn new(ground: Vec<usize>) -> Self {
        let set: HashSet<usize> = ground.iter().copied().collect();
        assert_eq!(set.len(), ground.len(), "ground set has repeated elements");
        let cells = if ground.is_empty() { Vec::new() } else { vec![ground] };
        OrderedPartition { cells, ground: set }
    }

    /// Builds a partition from explicit cells.
    pub fn from_cells(cells: Vec<Vec<usize>>) -> Self {
        let cells: Vec<Vec<usize>> = cells.into_iter().filter(|c| !c.is_empty()).collect();
        let ground: HashSet<usize> = cells.iter().flatten().copied().collect();
        assert_eq!(ground.len(), cells.iter().map(Vec::len).sum::<usize>(), "cells overlap");
        OrderedPartition { cells, ground }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Ground elements in cell order.
    pub fn order(&self) -> Vec<usize> {
        self.cells.iter().flatten().copied().collect()
    }

    /// Splits every cell the pivot cuts into its part inside and outside the
    /// pivot, keeping the order of elements within each part.
    ///
    /// The inside part is placed next to whichever neighbour also meets the
    /// pivot, so runs of pivot elements that span cells stay together: after
    /// the previous cell if that one holds pivot elements, otherwise before the
    /// next cell if that one does, otherwise first.
    pub fn refine(&mut self, pivot: &[usize]) -> Result<()> {
        let pivot: HashSet<usize> = pivot.iter().copied().collect();
        if let Some(&x) = pivot.iter().find(|x| !self.ground.contains(x)) {
            return Err(Error::PivotOutsideGround(x));
        }
        let meets: Vec<bool> = self.cells.iter().map(|c| c.iter().any(|x| pivot.contains(x))).collect();
        let mut out: Vec<Vec<usize>> = Vec::with_capacity(self.cells.len() + 4);
        let mut prev_meets = false;
        for (i, cell) in std::mem::take(&mut self.cells).into_iter().enumerate() {
            let (inside, outside): (Vec<usize>, Vec<usize>) = cell.into_iter().partition(|x| pivot.contains(x));
            if inside.is_empty() || outside.is_empty() {
                out.push(if inside.is_empty() { outside } else { inside });
            } else if !prev_meets && meets.get(i + 1).copied().unwrap_or(false) {
                out.push(outside);
                out.push(inside);
            } else {
                out.push(inside);
                out.push(outside);
            }
            // the last emitted cell meets the pivot unless it is an outside part
            prev_meets = out.last().is_some_and(|c| pivot.contains(&c[0]));
        }
        self.cells = out;
        Ok(())
    }
}

/// Number of maximal runs of consecutive positions.
fn runs(positions: &mut [usize]) -> usize {
    positions.sort_unstable();
    positions.windows(2).filter(|w| w[1] != w[0] + 1).count() + usize::from(!positions.is_empty())
}

/// Pivot sets for supernode `p`: `glbind(K) ∩ P` for every updating `K`,
/// as local positions in `P`, largest first, ties by `K`.
fn pivots(s: &SymbolicFactor, p: usize) -> Vec<Vec<usize>> {
    let f = s.partition().first(p);
    let mut sets: Vec<(usize, Vec<usize>)> = s
        .updaters(p)
        .iter()
        .map(|&k| {
            let (rows, q) = s.update_rows(k, p);
            (k, rows[..q].iter().map(|&r| r - f).collect())
        })
        .collect();
    sets.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
    sets.into_iter().map(|(_, v)| v).collect()
}

fn block_count(sets: &[Vec<usize>], position: &[usize]) -> usize {
    sets.iter()
        .map(|set| runs(&mut set.iter().map(|&x| position[x]).collect::<Vec<_>>()))
        .sum()
}

/// Reorders columns within every supernode by partition refinement.
///
/// Returns the within-supernode permutation that was applied and the
/// symbolic factor rebuilt for the reordered matrix. Supernode boundaries,
/// row sets and the factor size are unchanged. A supernode keeps its old
/// order if refinement would not reduce its number of incoming blocks.
pub fn reorder_within_supernodes(s: &SymbolicFactor, sibling_order: bool) -> Result<(Permutation, SymbolicFactor)> {
    let n = s.n();
    let part = s.partition();
    let mut new_to_old: Vec<usize> = Vec::with_capacity(n);
    let blocks_before = s.block_count();

    for p in 0..part.nsuper() {
        let f = part.first(p);
        let size = part.size(p);
        let sets = pivots(s, p);
        let mut refinement = OrderedPartition::new((0..size).collect());
        for set in &sets {
            refinement.refine(set)?;
        }
        let order = refinement.order();
        let mut position = vec![0; size];
        for (at, &x) in order.iter().enumerate() {
            position[x] = at;
        }
        let identity: Vec<usize> = (0..size).collect();
        if block_count(&sets, &position) <= block_count(&sets, &identity) {
            new_to_old.extend(order.iter().map(|&x| f + x));
        } else {
            new_to_old.extend(f..f + size);
        }
    }
    let q = Permutation::from_new_to_old(new_to_old)?;

    let pattern = permute_pattern(s.pattern(), &q)?;
    let columns = symbolic_factorization(&pattern, &elimination_tree(&pattern));
    let lists: Vec<Vec<usize>> = (0..part.nsuper())
        .map(|j| {
            let mut list: Vec<usize> = s.glbind(j).iter().map(|&r| q.new_of(r)).collect();
            list.sort_unstable();
            list
        })
        .collect();
    let mut stats = s.stats().clone();
    stats.blocks_before_reorder = Some(blocks_before);
    let rebuilt = SymbolicFactor::assemble(
        s.perm().then(&q),
        pattern,
        part.clone(),
        lists,
        columns,
        sibling_order,
        stats,
    );
    Ok((q, rebuilt))
}
