//! Sibling ordering that minimizes the multifrontal update-matrix stack.
//!
//! Stack model: processing supernode `J` pops the packed update matrices of
//! its children (all on top of the stack), and `J`'s square frontal update
//! matrix is laid out starting at the first popped (most recently pushed)
//! child's storage. The peak while processing `J` is therefore
//! `base + sum(packed of all but the last child) + square(J)`. Afterwards `J`'s
//! packed update replaces the children at `base`.

/// Result of ordering siblings in a supernodal elimination forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiblingOrder {
    /// Children of each supernode in processing order.
    pub children: Vec<Vec<usize>>,
    /// Postorder of the forest induced by `children`, roots ascending.
    pub postorder: Vec<usize>,
    /// Stack peak (in reals) of the induced traversal.
    pub peak: usize,
}

/// Best processing order for one supernode's children given each child's
/// `(subtree peak, packed size)` profile and the parent's square update size.
///
/// Returns the order (indices into `profiles`) and the resulting peak. For a
/// fixed last child the remaining children are optimally ordered by
/// decreasing `peak - packed`; trying every last child makes the choice exact.
pub fn best_child_order(profiles: &[(usize, usize)], square: usize) -> (Vec<usize>, usize) {
    let k = profiles.len();
    if k == 0 {
        return (Vec::new(), square);
    }
    let mut by_slack: Vec<usize> = (0..k).collect();
    by_slack.sort_by(|&a, &b| {
        let sa = profiles[a].0 as i128 - profiles[a].1 as i128;
        let sb = profiles[b].0 as i128 - profiles[b].1 as i128;
        sb.cmp(&sa).then(a.cmp(&b))
    });
    let mut best: Option<(usize, Vec<usize>)> = None;
    for last in 0..k {
        let mut order: Vec<usize> = by_slack.iter().copied().filter(|&c| c != last).collect();
        order.push(last);
        let peak = evaluate_order(profiles, &order, square);
        if best.as_ref().is_none_or(|(p, _)| peak < *p) {
            best = Some((peak, order));
        }
    }
    let (peak, order) = best.unwrap();
    (order, peak)
}

/// Peak of one supernode's subtree for a given child order.
pub fn evaluate_order(profiles: &[(usize, usize)], order: &[usize], square: usize) -> usize {
    let mut below = 0usize;
    let mut peak = 0usize;
    for (pos, &c) in order.iter().enumerate() {
        peak = peak.max(below + profiles[c].0);
        if pos + 1 < order.len() {
            below += profiles[c].1;
        }
    }
    peak.max(below + square)
}

/// Orders siblings throughout a supernodal forest.
///
/// `parent` must be topologically numbered (every child index smaller than
/// its parent). `square[j]` is the size of `j`'s square update matrix and
/// `packed[j]` the size of the packed update it pushes.
pub fn liu_sibling_order(parent: &[Option<usize>], square: &[usize], packed: &[usize]) -> SiblingOrder {
    let ns = parent.len();
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); ns];
    for (j, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            assert!(p > j, "supernodal tree must be topologically numbered");
            kids[p].push(j);
        }
    }
    let mut peak = vec![0usize; ns];
    let mut children = vec![Vec::new(); ns];
    for j in 0..ns {
        let profiles: Vec<(usize, usize)> = kids[j].iter().map(|&c| (peak[c], packed[c])).collect();
        let (order, p) = best_child_order(&profiles, square[j]);
        peak[j] = p;
        children[j] = order.into_iter().map(|i| kids[j][i]).collect();
    }
    let postorder = postorder_with(parent, &children);
    let total = (0..ns).filter(|&j| parent[j].is_none()).map(|j| peak[j]).max().unwrap_or(0);
    SiblingOrder {
        children,
        postorder,
        peak: total,
    }
}

/// Postorder visiting children in the given order and roots ascending.
pub fn postorder_with(parent: &[Option<usize>], children: &[Vec<usize>]) -> Vec<usize> {
    let ns = parent.len();
    let mut out = Vec::with_capacity(ns);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in (0..ns).filter(|&j| parent[j].is_none()) {
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let (node, next) = *top;
            if let Some(&c) = children[node].get(next) {
                top.1 += 1;
                stack.push((c, 0));
            } else {
                out.push(node);
                stack.pop();
            }
        }
    }
    out
}

/// Replays a multifrontal traversal on a model stack and returns its peak.
///
/// Every supernode pushes exactly one (possibly empty) packed item, and the
/// items popped at `J` must be exactly `J`'s children.
pub fn simulate_mf_stack(order: &[usize], parent: &[Option<usize>], square: &[usize], packed: &[usize]) -> usize {
    let ns = parent.len();
    let mut nchildren = vec![0usize; ns];
    for p in parent.iter().flatten() {
        nchildren[*p] += 1;
    }
    // (owner, start)
    let mut items: Vec<(usize, usize)> = Vec::new();
    let mut top = 0usize;
    let mut peak = 0usize;
    for &j in order {
        let k = nchildren[j];
        assert!(items.len() >= k, "children of {j} are not on the stack");
        let popped = items.split_off(items.len() - k);
        assert!(popped.iter().all(|&(owner, _)| parent[owner] == Some(j)), "stack order violates the tree");
        let base = popped.first().map_or(top, |&(_, s)| s);
        let frontal = popped.last().map_or(top, |&(_, s)| s);
        peak = peak.max(frontal + square[j]);
        items.push((j, base));
        top = base + packed[j];
    }
    peak
}
