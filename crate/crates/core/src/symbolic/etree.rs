use crate::sparse::{Permutation, SymmetricPattern};

/// Elimination forest of a symmetric pattern.
///
/// `parent(j)` is the smallest row index below the diagonal in column `j` of
/// the Cholesky factor, so it always exceeds `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    postorder: Vec<usize>,
}

impl EliminationTree {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        for (j, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(j);
            }
        }
        let postorder = postorder(&parent, &children);
        EliminationTree {
            parent,
            children,
            postorder,
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, j: usize) -> Option<usize> {
        self.parent[j]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Children of `j`, ascending.
    pub fn children(&self, j: usize) -> &[usize] {
        &self.children[j]
    }

    /// Columns in postorder: children before parents, subtrees contiguous,
    /// siblings visited in ascending order.
    pub fn postorder(&self) -> &[usize] {
        &self.postorder
    }

    /// Permutation sending each column to its postorder position.
    pub fn postorder_permutation(&self) -> Permutation {
        Permutation::from_new_to_old(self.postorder.clone()).expect("postorder visits every column once")
    }
}

/// Liu's algorithm with path compression; the factor is never formed.
pub fn elimination_tree(a: &SymmetricPattern) -> EliminationTree {
    let n = a.n();
    let rows = a.row_lists();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut ancestor: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        for &j in &rows[k] {
            let mut i = j;
            loop {
                match ancestor[i] {
                    Some(a) if a == k => break,
                    Some(a) => {
                        ancestor[i] = Some(k);
                        i = a;
                    }
                    None => {
                        ancestor[i] = Some(k);
                        parent[i] = Some(k);
                        break;
                    }
                }
            }
        }
    }
    EliminationTree::from_parents(parent)
}

fn postorder(parent: &[Option<usize>], children: &[Vec<usize>]) -> Vec<usize> {
    let n = parent.len();
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in (0..n).filter(|&j| parent[j].is_none()) {
        stack.push((root, 0));
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&child) = children[node].get(*next) {
                *next += 1;
                stack.push((child, 0));
            } else {
                order.push(node);
                stack.pop();
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_a_forest_of_roots() {
        let t = elimination_tree(&SymmetricPattern::diagonal(4));
        assert!(t.parents().iter().all(Option::is_none));
        assert_eq!(t.postorder(), &[0, 1, 2, 3]);
    }

    #[test]
    fn postorder_keeps_subtrees_contiguous() {
        // 0 -> 3, 1 -> 2 -> 3
        let t = EliminationTree::from_parents(vec![Some(3), Some(2), Some(3), None]);
        assert_eq!(t.postorder(), &[0, 1, 2, 3]);
        let t = EliminationTree::from_parents(vec![Some(2), Some(3), Some(3), None]);
        assert_eq!(t.postorder(), &[1, 0, 2, 3]);
    }
}
