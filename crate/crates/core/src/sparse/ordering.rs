use std::collections::BTreeSet;

use crate::sparse::{Permutation, SymmetricPattern};

/// Greedy minimum-degree ordering on the explicit elimination graph.
///
/// At every step the vertex of smallest current degree is eliminated and its
/// neighbours become a clique. Ties go to the smaller degree in the original
/// graph, then to the smaller original index.
pub fn minimum_degree_order(a: &SymmetricPattern) -> Permutation {
    let n = a.n();
    let mut adj = a.adjacency();
    let original: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, usize, usize)> = (0..n).map(|v| (adj[v].len(), original[v], v)).collect();
    let mut eliminated = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while let Some((_, _, v)) = queue.pop_first() {
        eliminated[v] = true;
        order.push(v);
        let nbrs = std::mem::take(&mut adj[v]);
        for &u in &nbrs {
            queue.remove(&(adj[u].len(), original[u], u));
            let merged = merge_without(&adj[u], &nbrs, u, v);
            adj[u] = merged;
            queue.insert((adj[u].len(), original[u], u));
        }
    }
    debug_assert!(eliminated.iter().all(|&e| e));
    Permutation::from_new_to_old(order).expect("every vertex is eliminated once")
}

/// Sorted union of `a` and `b`, dropping `skip_self` and `skip_pivot`.
fn merge_without(a: &[usize], b: &[usize], skip_self: usize, skip_pivot: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if x != skip_self && x != skip_pivot {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_gives_identity() {
        assert!(minimum_degree_order(&SymmetricPattern::diagonal(7)).is_identity());
    }

    #[test]
    fn star_center_goes_last() {
        let star = SymmetricPattern::from_entries(5, (1..5).map(|i| (i, 0))).unwrap();
        let p = minimum_degree_order(&star);
        assert_eq!(p.new_of(0), 4);
    }

    #[test]
    fn merge_drops_self_and_pivot() {
        assert_eq!(merge_without(&[1, 3, 5], &[2, 3, 4], 4, 5), vec![1, 2, 3]);
    }
}
