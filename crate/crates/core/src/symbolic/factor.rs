use crate::error::Result;
use crate::sparse::{permute_pattern, Permutation, SymmetricPattern};
use crate::symbolic::liu::{liu_sibling_order, postorder_with, simulate_mf_stack, SiblingOrder};
use crate::symbolic::supernodes::trapezoid;
use crate::symbolic::{
    elimination_tree, fundamental_supernodes, merge_supernodes, symbolic_factorization, ColumnStructure,
    SupernodePartition,
};

/// Knobs for [`build_symbolic_factor`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicOptions {
    /// Merge cap in percent of the unmerged factor size; `None` disables
    /// merging.
    pub merge_cap: Option<f64>,
    /// Reorder columns within supernodes by partition refinement.
    pub reorder: bool,
    /// Order siblings to minimize the multifrontal stack.
    pub sibling_order: bool,
}

impl Default for SymbolicOptions {
    fn default() -> Self {
        SymbolicOptions {
            merge_cap: Some(12.5),
            reorder: true,
            sibling_order: true,
        }
    }
}

/// Floating-point workspace each driver needs, in reals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkspacePlan {
    /// Peak of the multifrontal update-matrix stack.
    pub mf_stack: usize,
    /// Largest left-looking update matrix that goes through scratch.
    pub ll_update: usize,
    /// Largest square right-looking update matrix.
    pub rl_update: usize,
}

/// Analysis statistics reported alongside the factor.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SymbolicStats {
    pub fundamental_supernodes: usize,
    pub fundamental_nnz: usize,
    pub fundamental_work: u64,
    pub merges: usize,
    /// Block count before within-supernode reordering, when it ran.
    pub blocks_before_reorder: Option<usize>,
}

/// Everything the numerical factorization needs to know about `L`.
#[derive(Debug, Clone)]
pub struct SymbolicFactor {
    perm: Permutation,
    pattern: SymmetricPattern,
    partition: SupernodePartition,
    parent: Vec<Option<usize>>,
    glbind_ptr: Vec<usize>,
    glbind: Vec<usize>,
    block_ptr: Vec<usize>,
    blocks: Vec<usize>,
    updater_ptr: Vec<usize>,
    updaters: Vec<usize>,
    panel_ptr: Vec<usize>,
    columns: ColumnStructure,
    mf: SiblingOrder,
    plan: WorkspacePlan,
    factor_nnz: usize,
    stats: SymbolicStats,
}

impl SymbolicFactor {
    /// Derives parents, blocks, updater lists, storage offsets and workspace
    /// plans from a supernode partition and its row lists.
    pub(crate) fn assemble(
        perm: Permutation,
        pattern: SymmetricPattern,
        partition: SupernodePartition,
        glbind_lists: Vec<Vec<usize>>,
        columns: ColumnStructure,
        sibling_order: bool,
        stats: SymbolicStats,
    ) -> Self {
        let ns = partition.nsuper();
        let n = partition.n();

        let mut glbind_ptr = Vec::with_capacity(ns + 1);
        let mut glbind = Vec::new();
        glbind_ptr.push(0);
        for list in &glbind_lists {
            glbind.extend_from_slice(list);
            glbind_ptr.push(glbind.len());
        }

        let parent: Vec<Option<usize>> = (0..ns)
            .map(|j| glbind_lists[j].get(partition.size(j)).map(|&r| partition.supernode_of(r)))
            .collect();

        let mut block_ptr = vec![0];
        let mut blocks = Vec::new();
        for (j, list) in glbind_lists.iter().enumerate() {
            let below = &list[partition.size(j)..];
            let mut run = 0usize;
            for (k, &r) in below.iter().enumerate() {
                let extends = k > 0 && below[k - 1] + 1 == r && partition.supernode_of(below[k - 1]) == partition.supernode_of(r);
                if extends {
                    run += 1;
                } else {
                    if run > 0 {
                        blocks.push(run);
                    }
                    run = 1;
                }
            }
            if run > 0 {
                blocks.push(run);
            }
            block_ptr.push(blocks.len());
        }

        let mut targets: Vec<Vec<usize>> = vec![Vec::new(); ns];
        for (k, list) in glbind_lists.iter().enumerate() {
            let mut last = usize::MAX;
            for &r in &list[partition.size(k)..] {
                let s = partition.supernode_of(r);
                if s != last {
                    targets[s].push(k);
                    last = s;
                }
            }
        }
        let mut updater_ptr = vec![0];
        let mut updaters = Vec::new();
        for t in targets {
            updaters.extend(t);
            updater_ptr.push(updaters.len());
        }

        let mut panel_ptr = Vec::with_capacity(ns + 1);
        panel_ptr.push(0);
        let mut factor_nnz = 0;
        for (j, list) in glbind_lists.iter().enumerate() {
            panel_ptr.push(panel_ptr[j] + list.len() * partition.size(j));
            factor_nnz += trapezoid(partition.size(j), list.len());
        }

        let mut sf = SymbolicFactor {
            perm,
            pattern,
            partition,
            parent,
            glbind_ptr,
            glbind,
            block_ptr,
            blocks,
            updater_ptr,
            updaters,
            panel_ptr,
            columns,
            mf: SiblingOrder {
                children: Vec::new(),
                postorder: Vec::new(),
                peak: 0,
            },
            plan: WorkspacePlan::default(),
            factor_nnz,
            stats,
        };
        debug_assert_eq!(sf.n(), n);

        let square: Vec<usize> = (0..ns).map(|j| sf.below(j).len().pow(2)).collect();
        let packed: Vec<usize> = (0..ns).map(|j| packed_size(sf.mf_retained_rows(j))).collect();
        sf.mf = if sibling_order {
            liu_sibling_order(&sf.parent, &square, &packed)
        } else {
            let mut children = vec![Vec::new(); ns];
            for (j, p) in sf.parent.iter().enumerate() {
                if let Some(p) = *p {
                    children[p].push(j);
                }
            }
            let postorder = postorder_with(&sf.parent, &children);
            let peak = simulate_mf_stack(&postorder, &sf.parent, &square, &packed);
            SiblingOrder {
                children,
                postorder,
                peak,
            }
        };
        sf.plan = WorkspacePlan {
            mf_stack: sf.mf.peak,
            ll_update: sf.ll_plan(),
            rl_update: square.iter().copied().max().unwrap_or(0),
        };
        sf
    }

    fn ll_plan(&self) -> usize {
        let mut best = 0;
        for j in 0..self.nsuper() {
            let target = self.glbind(j);
            let pos = |r: usize| target.binary_search(&r).expect("updater row missing from target");
            for &k in self.updaters(j) {
                if self.partition.size(k) == 1 {
                    continue;
                }
                let (rows, q) = self.update_rows(k, j);
                if !is_direct_target(rows, q, pos) {
                    best = best.max(rows.len() * q);
                }
            }
        }
        best
    }

    /// Rows of `k` at or below the first column of `j`, and how many of them
    /// fall inside `j`'s columns.
    pub fn update_rows(&self, k: usize, j: usize) -> (&[usize], usize) {
        let list = self.glbind(k);
        let f = self.partition.first(j);
        let l = self.partition.last(j);
        let p0 = list.partition_point(|&r| r < f);
        let rows = &list[p0..];
        let q = rows.partition_point(|&r| r <= l);
        (rows, q)
    }

    /// Rows of `j`'s update that survive assembly into the parent's columns.
    fn mf_retained_rows(&self, j: usize) -> usize {
        match self.parent[j] {
            None => 0,
            Some(p) => {
                let last = self.partition.last(p);
                self.below(j).iter().filter(|&&r| r > last).count()
            }
        }
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn nsuper(&self) -> usize {
        self.partition.nsuper()
    }

    /// Original-to-factor ordering (fill-reducing order, postorder, merge
    /// renumbering and within-supernode reordering, composed).
    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// Pattern of `A` in factor ordering.
    pub fn pattern(&self) -> &SymmetricPattern {
        &self.pattern
    }

    pub fn partition(&self) -> &SupernodePartition {
        &self.partition
    }

    pub fn parent(&self, j: usize) -> Option<usize> {
        self.parent[j]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Row list of supernode `j`: its own columns, then the rows below.
    pub fn glbind(&self, j: usize) -> &[usize] {
        &self.glbind[self.glbind_ptr[j]..self.glbind_ptr[j + 1]]
    }

    /// Rows of supernode `j` below its diagonal block.
    pub fn below(&self, j: usize) -> &[usize] {
        &self.glbind(j)[self.partition.size(j)..]
    }

    /// Sizes of the dense blocks below `j`'s diagonal block, top to bottom.
    /// A block is a run of consecutive rows inside one supernode.
    pub fn blocks(&self, j: usize) -> &[usize] {
        &self.blocks[self.block_ptr[j]..self.block_ptr[j + 1]]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Supernodes `k < j` whose rows intersect `j`'s columns, ascending.
    pub fn updaters(&self, j: usize) -> &[usize] {
        &self.updaters[self.updater_ptr[j]..self.updater_ptr[j + 1]]
    }

    /// Offset of `j`'s panel in factor storage.
    pub fn panel_offset(&self, j: usize) -> usize {
        self.panel_ptr[j]
    }

    /// Reals held by all panels, including the unused strict upper triangle
    /// of each diagonal block.
    pub fn panel_storage(&self) -> usize {
        *self.panel_ptr.last().unwrap()
    }

    /// Entries of the (possibly merged) factor, diagonal included.
    pub fn factor_nnz(&self) -> usize {
        self.factor_nnz
    }

    /// `sum_j |L_{*,j}|^2` over the stored (merged) structure.
    pub fn factor_work(&self) -> u64 {
        (0..self.nsuper())
            .map(|j| {
                let rows = self.glbind(j).len() as u64;
                (0..self.partition.size(j) as u64).map(|c| (rows - c).pow(2)).sum::<u64>()
            })
            .sum()
    }

    /// True structure of `L` (no merge padding), column by column.
    pub fn columns(&self) -> &ColumnStructure {
        &self.columns
    }

    /// Multifrontal processing order.
    pub fn mf_order(&self) -> &[usize] {
        &self.mf.postorder
    }

    /// Children of each supernode in multifrontal processing order.
    pub fn mf_children(&self, j: usize) -> &[usize] {
        &self.mf.children[j]
    }

    pub fn plan(&self) -> WorkspacePlan {
        self.plan
    }

    pub fn stats(&self) -> &SymbolicStats {
        &self.stats
    }

    /// Storage growth from merging, in percent of the unmerged factor.
    pub fn storage_growth_percent(&self) -> f64 {
        let base = self.stats.fundamental_nnz as f64;
        if base == 0.0 {
            0.0
        } else {
            100.0 * (self.factor_nnz as f64 - base) / base
        }
    }

    /// Work growth from merging, in percent.
    pub fn work_growth_percent(&self) -> f64 {
        let base = self.stats.fundamental_work as f64;
        if base == 0.0 {
            0.0
        } else {
            100.0 * (self.factor_work() as f64 - base) / base
        }
    }
}

pub(crate) fn packed_size(rows: usize) -> usize {
    rows * (rows + 1) / 2
}

/// Whether an update can be written straight into the target panel: the rows
/// inside the target's columns are consecutive, and the rows below them sit
/// at consecutive positions of the target's row list.
pub(crate) fn is_direct_target(rows: &[usize], q: usize, pos: impl Fn(usize) -> usize) -> bool {
    let contiguous = |s: &[usize]| s.windows(2).all(|w| pos(w[1]) == pos(w[0]) + 1);
    contiguous(&rows[..q]) && contiguous(&rows[q..])
}

/// Runs the symbolic pipeline: ordering, postorder, column structures,
/// fundamental supernodes, optional merging, optional within-supernode
/// reordering, then blocks, relative-index prerequisites and workspace plans.
pub fn build_symbolic_factor(
    a: &SymmetricPattern,
    ordering: &Permutation,
    options: &SymbolicOptions,
) -> Result<SymbolicFactor> {
    let a1 = permute_pattern(a, ordering)?;
    let post = elimination_tree(&a1).postorder_permutation();
    let mut perm = ordering.then(&post);
    let a2 = permute_pattern(&a1, &post)?;
    let t2 = elimination_tree(&a2);
    let s2 = symbolic_factorization(&a2, &t2);
    let fundamental = fundamental_supernodes(&t2, &s2);

    let mut stats = SymbolicStats {
        fundamental_supernodes: fundamental.nsuper(),
        fundamental_nnz: s2.nnz(),
        fundamental_work: s2.work(),
        merges: 0,
        blocks_before_reorder: None,
    };

    let (pattern, columns, partition) = match options.merge_cap {
        Some(cap) => {
            let merged = merge_supernodes(&fundamental, &s2, cap);
            stats.merges = merged.merges;
            perm = perm.then(&merged.permutation);
            let a3 = permute_pattern(&a2, &merged.permutation)?;
            let s3 = symbolic_factorization(&a3, &elimination_tree(&a3));
            (a3, s3, merged.partition)
        }
        None => (a2, s2, fundamental),
    };

    let glbind_lists: Vec<Vec<usize>> = (0..partition.nsuper())
        .map(|j| {
            let mut list: Vec<usize> = partition.range(j).collect();
            list.extend_from_slice(&columns.column(partition.last(j))[1..]);
            list
        })
        .collect();

    let sf = SymbolicFactor::assemble(perm, pattern, partition, glbind_lists, columns, options.sibling_order, stats);
    if options.reorder {
        let (_, reordered) = crate::pr::reorder_within_supernodes(&sf, options.sibling_order)?;
        Ok(reordered)
    } else {
        Ok(sf)
    }
}
