//! Symbolic analysis: elimination trees, column structures, supernodes,
//! merging, sibling ordering, relative indices and storage plans.

mod etree;
mod factor;
mod liu;
mod relind;
mod structure;
mod supernodes;

pub use etree::{elimination_tree, EliminationTree};
pub use factor::{build_symbolic_factor, SymbolicFactor, SymbolicOptions, SymbolicStats, WorkspacePlan};
pub(crate) use factor::{is_direct_target, packed_size};
pub use liu::{best_child_order, evaluate_order, liu_sibling_order, postorder_with, simulate_mf_stack, SiblingOrder};
pub use relind::{compose_relative, extract_block_relind, IndexMode, RelativeIndexMap};
pub(crate) use relind::compose_in_place;
pub use structure::{symbolic_factorization, ColumnStructure};
pub use supernodes::{fundamental_supernodes, merge_supernodes, SupernodeMerge, SupernodePartition};

use crate::error::Result;
use crate::sparse::{minimum_degree_order, Permutation, SymmetricPattern};

/// Source of the fill-reducing ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ordering {
    Natural,
    MinimumDegree,
    Given(Permutation),
}

impl Ordering {
    pub fn permutation(&self, a: &SymmetricPattern) -> Result<Permutation> {
        match self {
            Ordering::Natural => Ok(Permutation::identity(a.n())),
            Ordering::MinimumDegree => Ok(minimum_degree_order(a)),
            Ordering::Given(p) => {
                if p.len() != a.n() {
                    return Err(crate::error::Error::DimensionMismatch {
                        expected: a.n(),
                        found: p.len(),
                    });
                }
                Ok(p.clone())
            }
        }
    }
}
