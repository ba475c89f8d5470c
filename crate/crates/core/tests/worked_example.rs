//! The 9 x 9 worked example: structure, relative indices, blocks, merging,
//! within-supernode reordering and blocked kernel-call counts.

mod common;

use common::{dense_cholesky, example_matrix, example_pattern, max_rel_diff};
use snchol::kernels::ReferenceKernels;
use snchol::sparse::{apply_symmetric_permutation, Permutation};
use snchol::symbolic::{
    elimination_tree, extract_block_relind, fundamental_supernodes, merge_supernodes, symbolic_factorization,
    RelativeIndexMap,
};
use snchol::{build_symbolic_factor, factorize, Method, SymbolicOptions};

fn plain() -> SymbolicOptions {
    SymbolicOptions {
        merge_cap: None,
        reorder: false,
        sibling_order: true,
    }
}

fn with_pr() -> SymbolicOptions {
    SymbolicOptions {
        reorder: true,
        ..plain()
    }
}

#[test]
fn elimination_tree_parents() {
    let t = elimination_tree(&example_pattern());
    let want: Vec<Option<usize>> = vec![Some(1), Some(4), Some(3), Some(4), Some(5), Some(6), Some(7), Some(8), None];
    assert_eq!(t.parents(), want.as_slice());
}

#[test]
fn column_structures_and_fill() {
    let a = example_pattern();
    let s = symbolic_factorization(&a, &elimination_tree(&a));
    assert_eq!(s.column(0), &[0, 1, 4, 5, 8]);
    assert_eq!(s.column(2), &[2, 3, 4, 6, 7]);
    assert_eq!(s.column(4), &[4, 5, 6, 7, 8]);
    let mut fill = Vec::new();
    for j in 0..9 {
        for &i in &s.column(j)[1..] {
            if !a.column(j).contains(&i) {
                fill.push((i + 1, j + 1));
            }
        }
    }
    fill.sort_unstable_by_key(|&(i, j)| (j, i));
    assert_eq!(fill, vec![(6, 2), (7, 4), (7, 5), (9, 5), (8, 6), (9, 7)]);
}

#[test]
fn fundamental_partition() {
    let a = example_pattern();
    let t = elimination_tree(&a);
    let p = fundamental_supernodes(&t, &symbolic_factorization(&a, &t));
    assert_eq!(p.boundaries(), &[0, 2, 4, 9]);
}

#[test]
fn symbolic_factor_lists_relind_and_blocks() {
    let s = build_symbolic_factor(&example_pattern(), &Permutation::identity(9), &plain()).unwrap();
    assert!(s.perm().is_identity());
    assert_eq!(s.nsuper(), 3);
    assert_eq!(s.glbind(0), &[0, 1, 4, 5, 8]);
    assert_eq!(s.glbind(1), &[2, 3, 4, 6, 7]);
    assert_eq!(s.glbind(2), &[4, 5, 6, 7, 8]);
    assert_eq!(s.parents(), &[Some(2), Some(2), None]);
    assert_eq!(s.blocks(0), &[2, 1]);
    assert_eq!(s.blocks(1), &[1, 2]);
    assert!(s.blocks(2).is_empty());

    let mut map = RelativeIndexMap::new(&s);
    assert!(map.relind(0).is_err(), "global mode must refuse relative reads");
    map.to_relative(&s).unwrap();
    assert!(map.to_relative(&s).is_err(), "double transformation must be refused");
    assert_eq!(map.relind(0).unwrap(), &[4, 3, 0]);
    assert_eq!(map.relind(1).unwrap(), &[4, 2, 1]);
    assert_eq!(extract_block_relind(map.relind(0).unwrap(), s.blocks(0)).unwrap(), vec![4, 0]);
    assert_eq!(extract_block_relind(map.relind(1).unwrap(), s.blocks(1)).unwrap(), vec![4, 2]);
    map.to_global(&s).unwrap();
    assert_eq!(map, RelativeIndexMap::new(&s));
}

#[test]
fn partition_refinement_reproduces_the_reordered_example() {
    let s = build_symbolic_factor(&example_pattern(), &Permutation::identity(9), &with_pr()).unwrap();
    // old 6, 9, 5, 7, 8 become 5, 6, 7, 8, 9 (1-based)
    let want = Permutation::from_old_to_new(vec![0, 1, 2, 3, 6, 4, 7, 8, 5]).unwrap();
    assert_eq!(s.perm(), &want);
    assert_eq!(s.blocks(0), &[3]);
    assert_eq!(s.blocks(1), &[3]);
    assert_eq!(s.stats().blocks_before_reorder, Some(4));
    assert_eq!(s.factor_nnz(), 33);
    // the reordered matrix is the permuted original
    let a = example_matrix();
    let pa = apply_symmetric_permutation(&a, s.perm()).unwrap();
    assert_eq!(pa.pattern(), s.pattern());
    // new column 5 holds old column 6's neighbours (1-based): 1, 5, 7, 9
    let mut nbrs: Vec<usize> = (0..9)
        .filter(|&i| i != 4 && pa.get(i.max(4), i.min(4)) != 0.0)
        .map(|i| s.perm().old_of(i) + 1)
        .collect();
    nbrs.sort_unstable();
    assert_eq!(nbrs, vec![1, 5, 7, 9]);
}

#[test]
fn blocked_kernel_calls_drop_from_three_to_one() {
    let a = example_matrix();
    let mut calls = Vec::new();
    for opts in [plain(), with_pr()] {
        let s = build_symbolic_factor(a.pattern(), &Permutation::identity(9), &opts).unwrap();
        let pa = apply_symmetric_permutation(&a, s.perm()).unwrap();
        let f = factorize(&pa, &s, Method::RightLookingBlocked, &ReferenceKernels).unwrap();
        calls.push((f.stats().pair_calls[&(0, 2)], f.stats().pair_calls[&(1, 2)]));
        assert_eq!(f.stats().assembly_ops, 0);
        assert_eq!(f.stats().workspace_peak, 0);
        let l = dense_cholesky(&pa.to_dense(), 9).unwrap();
        assert!(max_rel_diff(&f.to_dense_lower(), &l) <= 1e-12);
    }
    assert_eq!(calls, vec![(3, 3), (1, 1)]);
}

#[test]
fn scatter_places_a_and_leaves_fill_zero() {
    let a = example_matrix();
    let s = build_symbolic_factor(a.pattern(), &Permutation::identity(9), &plain()).unwrap();
    let f = snchol::numeric::scatter_a_into_factor(&a, &s).unwrap();
    let p = f.panel(&s, 0);
    assert_eq!(p.col(0), &[10.0, 1.0, 1.0, 1.0, 1.0]);
    // row 6 of column 2 (1-based) is fill
    assert_eq!(f.entry(&s, 5, 1), 0.0);
}

#[test]
fn merging_takes_one_child_under_the_default_cap() {
    let a = example_pattern();
    let t = elimination_tree(&a);
    let st = symbolic_factorization(&a, &t);
    let fundamental = fundamental_supernodes(&t, &st);
    let m = merge_supernodes(&fundamental, &st, 12.5);
    assert_eq!(m.base_nnz, 33);
    assert_eq!(m.merges, 1);
    assert_eq!(m.merged_nnz, 37);
    assert_eq!(m.partition.boundaries(), &[0, 2, 9]);
    assert_eq!(m.permutation.new_to_old(), &[2, 3, 0, 1, 4, 5, 6, 7, 8]);
    assert!(m.growth_percent() <= 12.5);

    let none = merge_supernodes(&fundamental, &st, 0.0);
    assert_eq!(none.merges, 0);
    assert!(none.permutation.is_identity());
}
