use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Range;

use crate::sparse::Permutation;
use crate::symbolic::{ColumnStructure, EliminationTree};

/// Partition of `0..n` into consecutive column intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupernodePartition {
    first: Vec<usize>,
    membership: Vec<usize>,
}

impl SupernodePartition {
    /// From the ascending first columns of each supernode. `firsts` must start
    /// at 0 when `n > 0`.
    pub fn from_firsts(n: usize, firsts: &[usize]) -> Self {
        assert!(n == 0 || firsts.first() == Some(&0), "first supernode must start at column 0");
        assert!(firsts.windows(2).all(|w| w[0] < w[1]), "first columns must ascend");
        assert!(firsts.last().is_none_or(|&f| f < n));
        let mut first = firsts.to_vec();
        first.push(n);
        let mut membership = vec![0; n];
        for s in 0..firsts.len() {
            membership[first[s]..first[s + 1]].fill(s);
        }
        SupernodePartition { first, membership }
    }

    /// One supernode per column.
    pub fn singletons(n: usize) -> Self {
        Self::from_firsts(n, &(0..n).collect::<Vec<_>>())
    }

    pub fn from_sizes(sizes: &[usize]) -> Self {
        let mut firsts = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for &s in sizes {
            assert!(s > 0, "empty supernode");
            firsts.push(at);
            at += s;
        }
        Self::from_firsts(at, &firsts)
    }

    pub fn n(&self) -> usize {
        self.membership.len()
    }

    pub fn nsuper(&self) -> usize {
        self.first.len() - 1
    }

    pub fn first(&self, s: usize) -> usize {
        self.first[s]
    }

    pub fn last(&self, s: usize) -> usize {
        self.first[s + 1] - 1
    }

    pub fn size(&self, s: usize) -> usize {
        self.first[s + 1] - self.first[s]
    }

    pub fn range(&self, s: usize) -> Range<usize> {
        self.first[s]..self.first[s + 1]
    }

    #[inline]
    pub fn supernode_of(&self, col: usize) -> usize {
        self.membership[col]
    }

    /// First column of every supernode followed by `n`.
    pub fn boundaries(&self) -> &[usize] {
        &self.first
    }
}

/// The fundamental supernode partition: column `j + 1` joins `j`'s supernode
/// exactly when it is `j`'s parent, `j` is its only child, and
/// `L_{*,j} \ {j}` equals `L_{*,j+1}`.
pub fn fundamental_supernodes(tree: &EliminationTree, structure: &ColumnStructure) -> SupernodePartition {
    let n = tree.n();
    let mut firsts = Vec::new();
    for j in 0..n {
        let joins_previous = j > 0
            && tree.parent(j - 1) == Some(j)
            && tree.children(j).len() == 1
            && structure.count(j - 1) == structure.count(j) + 1;
        if !joins_previous {
            firsts.push(j);
        }
    }
    SupernodePartition::from_firsts(n, &firsts)
}

/// Stored entries of a dense lower trapezoid with `cols` columns over `rows`
/// rows (`rows >= cols`).
pub(crate) fn trapezoid(cols: usize, rows: usize) -> usize {
    cols * rows - cols * cols.saturating_sub(1) / 2
}

/// Outcome of supernode merging.
#[derive(Debug, Clone)]
pub struct SupernodeMerge {
    /// Column renumbering that makes every merged supernode an interval.
    pub permutation: Permutation,
    /// The merged partition in the new numbering.
    pub partition: SupernodePartition,
    /// Factor entries before merging.
    pub base_nnz: usize,
    /// Factor entries after merging, explicit zeros included.
    pub merged_nnz: usize,
    pub merges: usize,
}

impl SupernodeMerge {
    /// Storage growth in percent of the unmerged factor.
    pub fn growth_percent(&self) -> f64 {
        if self.base_nnz == 0 {
            0.0
        } else {
            100.0 * (self.merged_nnz - self.base_nnz) as f64 / self.base_nnz as f64
        }
    }
}

#[derive(Debug, Clone)]
struct Group {
    /// Columns in elimination order: merged children first, then the parent.
    cols: Vec<usize>,
    below: usize,
    parent: Option<usize>,
    children: Vec<usize>,
    min_col: usize,
    version: u64,
    alive: bool,
}

/// Greedily merges child-parent supernode pairs in order of least added fill.
///
/// Candidates come off a min-heap keyed by the number of new factor entries,
/// ties broken by the child's smallest column. Merging stops at the first
/// candidate that would push cumulative growth above `cap_percent` of the
/// unmerged factor size. A merged supernode stores the parent's row structure
/// for all of its columns; entries that are structurally zero are kept as
/// explicit zeros.
///
/// Merging a child that is not adjacent to its parent breaks interval
/// contiguity, so the result carries a renumbering: a postorder of the merged
/// tree in which each merged supernode lists its absorbed columns before its
/// own. That renumbering is a topological order of the elimination tree and
/// does not change the fill.
pub fn merge_supernodes(partition: &SupernodePartition, structure: &ColumnStructure, cap_percent: f64) -> SupernodeMerge {
    assert!(cap_percent >= 0.0, "merge cap must be non-negative");
    let n = partition.n();
    let ns = partition.nsuper();

    let mut groups: Vec<Group> = (0..ns)
        .map(|s| {
            let f = partition.first(s);
            let l = partition.last(s);
            let parent = structure.column(l).get(1).map(|&r| partition.supernode_of(r));
            Group {
                cols: partition.range(s).collect(),
                below: structure.count(f) - partition.size(s),
                parent,
                children: Vec::new(),
                min_col: f,
                version: 0,
                alive: true,
            }
        })
        .collect();
    for s in 0..ns {
        if let Some(p) = groups[s].parent {
            groups[p].children.push(s);
        }
    }

    let nnz_of = |g: &Group| trapezoid(g.cols.len(), g.cols.len() + g.below);
    let base_nnz: usize = groups.iter().map(nnz_of).sum();
    let cost = |c: &Group, p: &Group| {
        let cols = c.cols.len() + p.cols.len();
        trapezoid(cols, cols + p.below) - nnz_of(c) - nnz_of(p)
    };

    // (cost, child min column, child, child version, parent, parent version)
    type Entry = Reverse<(usize, usize, usize, u64, usize, u64)>;
    let mut heap: BinaryHeap<Entry> = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Entry>, groups: &[Group], c: usize| {
        if let Some(p) = groups[c].parent {
            let (gc, gp) = (&groups[c], &groups[p]);
            heap.push(Reverse((cost(gc, gp), gc.min_col, c, gc.version, p, gp.version)));
        }
    };
    for s in 0..ns {
        push(&mut heap, &groups, s);
    }

    let limit = cap_percent / 100.0 * base_nnz as f64;
    let mut added = 0usize;
    let mut merges = 0usize;
    while let Some(Reverse((c_cost, _, c, cv, p, pv))) = heap.pop() {
        let stale = !groups[c].alive
            || !groups[p].alive
            || groups[c].version != cv
            || groups[p].version != pv
            || groups[c].parent != Some(p);
        if stale {
            continue;
        }
        if (added + c_cost) as f64 > limit {
            break;
        }
        added += c_cost;
        merges += 1;

        let child = std::mem::replace(
            &mut groups[c],
            Group {
                cols: Vec::new(),
                below: 0,
                parent: None,
                children: Vec::new(),
                min_col: usize::MAX,
                version: 0,
                alive: false,
            },
        );
        let parent = &mut groups[p];
        let mut cols = child.cols;
        cols.extend_from_slice(&parent.cols);
        parent.cols = cols;
        parent.min_col = parent.min_col.min(child.min_col);
        parent.version += 1;
        parent.children.retain(|&x| x != c);
        parent.children.extend_from_slice(&child.children);
        for &gc in &child.children {
            groups[gc].parent = Some(p);
        }
        let siblings = groups[p].children.clone();
        for s in siblings {
            push(&mut heap, &groups, s);
        }
        push(&mut heap, &groups, p);
    }
    let merged_nnz = base_nnz + added;

    // Postorder of the merged tree, siblings by smallest column.
    for g in groups.iter_mut() {
        g.children.sort_unstable();
    }
    let mut order = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    let mut roots: Vec<usize> = (0..ns).filter(|&s| groups[s].alive && groups[s].parent.is_none()).collect();
    roots.sort_by_key(|&s| groups[s].min_col);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in roots {
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let (g, next) = *top;
            let mut kids = groups[g].children.clone();
            kids.sort_by_key(|&k| groups[k].min_col);
            if let Some(&k) = kids.get(next) {
                top.1 += 1;
                stack.push((k, 0));
            } else {
                order.extend_from_slice(&groups[g].cols);
                sizes.push(groups[g].cols.len());
                stack.pop();
            }
        }
    }
    let permutation = Permutation::from_new_to_old(order).expect("merged groups cover every column once");
    SupernodeMerge {
        permutation,
        partition: SupernodePartition::from_sizes(&sizes),
        base_nnz,
        merged_nnz,
        merges,
    }
}
