//! Relative indices.
//!
//! For a supernode `J` with parent `P`, every row of `J` below its diagonal
//! block also appears in `P`'s row list. Its relative index is its distance
//! from the bottom of that list, so `0` is `P`'s last row. Distances are
//! independent of how far the list extends upward, which is what lets an
//! ancestor's indices be composed with a descendant's by a single gather.

use crate::error::{Error, Result};
use crate::symbolic::SymbolicFactor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexMode {
    Global,
    Relative,
}

impl IndexMode {
    fn name(self) -> &'static str {
        match self {
            IndexMode::Global => "global",
            IndexMode::Relative => "relative",
        }
    }
}

/// Below-diagonal row lists of every supernode in one arena, held either as
/// global row indices or as indices relative to the supernodal parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeIndexMap {
    offsets: Vec<usize>,
    lists: Vec<usize>,
    mode: IndexMode,
}

impl RelativeIndexMap {
    /// Copies the below-diagonal rows of each supernode, in global mode.
    pub fn new(s: &SymbolicFactor) -> Self {
        let mut offsets = Vec::with_capacity(s.nsuper() + 1);
        let mut lists = Vec::new();
        offsets.push(0);
        for j in 0..s.nsuper() {
            lists.extend_from_slice(s.below(j));
            offsets.push(lists.len());
        }
        RelativeIndexMap {
            offsets,
            lists,
            mode: IndexMode::Global,
        }
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    /// Current contents for supernode `j`, in whichever mode the map is in.
    pub fn list(&self, j: usize) -> &[usize] {
        &self.lists[self.offsets[j]..self.offsets[j + 1]]
    }

    /// `relind(j, parent(j))`; only available in relative mode.
    pub fn relind(&self, j: usize) -> Result<&[usize]> {
        self.expect(IndexMode::Relative)?;
        Ok(self.list(j))
    }

    fn expect(&self, mode: IndexMode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(Error::WrongIndexMode {
                expected: mode.name(),
                found: self.mode.name(),
            })
        }
    }

    /// Replaces every shared row by its distance from the bottom of the
    /// parent's row list.
    pub fn to_relative(&mut self, s: &SymbolicFactor) -> Result<()> {
        self.expect(IndexMode::Global)?;
        for j in 0..s.nsuper() {
            let Some(p) = s.parent(j) else { continue };
            let target = s.glbind(p);
            let len = target.len();
            let mut cursor = 0usize;
            for x in &mut self.lists[self.offsets[j]..self.offsets[j + 1]] {
                // rows ascend, so the search never moves backwards
                cursor += target[cursor..].partition_point(|&r| r < *x);
                debug_assert_eq!(target.get(cursor), Some(&*x), "row missing from parent structure");
                *x = len - 1 - cursor;
            }
        }
        self.mode = IndexMode::Relative;
        Ok(())
    }

    /// Inverse of [`to_relative`](Self::to_relative).
    pub fn to_global(&mut self, s: &SymbolicFactor) -> Result<()> {
        self.expect(IndexMode::Relative)?;
        for j in 0..s.nsuper() {
            let Some(p) = s.parent(j) else { continue };
            let target = s.glbind(p);
            let len = target.len();
            for x in &mut self.lists[self.offsets[j]..self.offsets[j + 1]] {
                *x = target[len - 1 - *x];
            }
        }
        self.mode = IndexMode::Global;
        Ok(())
    }
}

/// `relind(J, P)` from `relind(J, C)` and `relind(C, P)`: each distance in
/// the first list selects the entry that far from the bottom of the second.
pub fn compose_relative(rel_jc: &[usize], rel_cp: &[usize]) -> Result<Vec<usize>> {
    let len = rel_cp.len();
    rel_jc
        .iter()
        .map(|&d| {
            if d < len {
                Ok(rel_cp[len - 1 - d])
            } else {
                Err(Error::RelativeIndexOutOfRange { index: d, len })
            }
        })
        .collect()
}

/// In-place form of [`compose_relative`] used by the factorization drivers.
#[inline]
pub(crate) fn compose_in_place(rel: &mut [usize], rel_cp: &[usize]) {
    let len = rel_cp.len();
    for d in rel {
        debug_assert!(*d < len);
        *d = rel_cp[len - 1 - *d];
    }
}

/// Block-level relative indices: the entry of each block's first row.
///
/// `blocks` must partition `relind` into runs whose distances decrease by one
/// row at a time, i.e. runs that are contiguous in the target.
pub fn extract_block_relind(relind: &[usize], blocks: &[usize]) -> Result<Vec<usize>> {
    let total: usize = blocks.iter().sum();
    if total != relind.len() {
        return Err(Error::InconsistentBlocks(format!(
            "block sizes sum to {total}, index list has {} entries",
            relind.len()
        )));
    }
    let mut out = Vec::with_capacity(blocks.len());
    let mut at = 0;
    for &b in blocks {
        if b == 0 {
            return Err(Error::InconsistentBlocks("empty block".into()));
        }
        let run = &relind[at..at + b];
        if run.windows(2).any(|w| w[0] != w[1] + 1) {
            return Err(Error::InconsistentBlocks(format!(
                "rows {}..{} are not contiguous in the target",
                at,
                at + b
            )));
        }
        out.push(run[0]);
        at += b;
    }
    Ok(out)
}
