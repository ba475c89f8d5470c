//! Randomized invariants of the analysis pipeline.

mod common;

use std::collections::BTreeSet;

use common::{brute_force_structure, random_pattern};
use proptest::prelude::*;
use snchol::pr::{reorder_within_supernodes, OrderedPartition};
use snchol::sparse::{
    apply_symmetric_permutation, generate_spd, parse_matrix_market, permute_pattern, write_matrix_market, Permutation,
};
use snchol::symbolic::{
    compose_relative, elimination_tree, fundamental_supernodes, liu_sibling_order, merge_supernodes, postorder_with,
    simulate_mf_stack, symbolic_factorization,
};
use snchol::{analyze, build_symbolic_factor, Ordering, SymbolicOptions};

fn pattern_strategy() -> impl Strategy<Value = snchol::sparse::SymmetricPattern> {
    (1usize..40, 0.0f64..0.35, any::<u64>()).prop_map(|(n, d, seed)| random_pattern(n, d, seed))
}

fn permutation_strategy(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..max).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
}

/// Distance of each element of `a` from the bottom of `b`.
fn rel(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|x| b.len() - 1 - b.binary_search(x).unwrap()).collect()
}

/// Blocks arriving at each supernode.
fn incoming_blocks(s: &snchol::SymbolicFactor) -> Vec<usize> {
    let mut count = vec![0; s.nsuper()];
    for j in 0..s.nsuper() {
        let mut at = 0;
        for &b in s.blocks(j) {
            count[s.partition().supernode_of(s.below(j)[at])] += 1;
            at += b;
        }
    }
    count
}

/// Every assignment of child orders in a forest of at most eight nodes.
fn all_child_orders(kids: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    fn perms(v: &[usize]) -> Vec<Vec<usize>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let x = rest.remove(i);
            for mut p in perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    let mut out = vec![Vec::new()];
    for k in kids {
        let options = perms(k);
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                options.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structure_matches_dense_elimination(p in pattern_strategy()) {
        let t = elimination_tree(&p);
        let s = symbolic_factorization(&p, &t);
        let brute = brute_force_structure(&p);
        for j in 0..p.n() {
            prop_assert_eq!(s.column(j), brute[j].as_slice());
            // parent is the first off-diagonal row
            prop_assert_eq!(t.parent(j), brute[j].get(1).copied());
        }
    }

    #[test]
    fn fundamental_supernodes_are_maximal_chains(p in pattern_strategy()) {
        let t = elimination_tree(&p);
        let post = permute_pattern(&p, &t.postorder_permutation()).unwrap();
        let t = elimination_tree(&post);
        let s = symbolic_factorization(&post, &t);
        let part = fundamental_supernodes(&t, &s);
        let chained = |j: usize| {
            t.parent(j) == Some(j + 1)
                && t.children(j + 1).len() == 1
                && s.count(j) == s.count(j + 1) + 1
        };
        for k in 0..part.nsuper() {
            for j in part.first(k)..part.last(k) {
                prop_assert!(chained(j));
            }
            if part.last(k) + 1 < post.n() {
                prop_assert!(!chained(part.last(k)));
            }
        }
    }

    #[test]
    fn merging_respects_the_cap(p in pattern_strategy(), cap in 0.0f64..60.0) {
        let t = elimination_tree(&p);
        let post = permute_pattern(&p, &t.postorder_permutation()).unwrap();
        let t = elimination_tree(&post);
        let s = symbolic_factorization(&post, &t);
        let fundamental = fundamental_supernodes(&t, &s);
        let m = merge_supernodes(&fundamental, &s, cap);
        prop_assert!(m.growth_percent() <= cap + 1e-9);
        prop_assert_eq!(fundamental.nsuper() - m.merges, m.partition.nsuper());
        // the renumbering is fill-preserving
        let renum = permute_pattern(&post, &m.permutation).unwrap();
        let s2 = symbolic_factorization(&renum, &elimination_tree(&renum));
        prop_assert_eq!(s2.nnz(), s.nnz());
    }

    #[test]
    fn sibling_order_is_optimal(
        parents in (1usize..=8).prop_flat_map(|n| {
            (0..n).map(|j| if j + 1 < n { (j + 1..=n).prop_map(move |p| if p == n { None } else { Some(p) }).boxed() } else { Just(None).boxed() })
                .collect::<Vec<_>>()
        }),
        sizes in proptest::collection::vec((0usize..50, 0usize..50), 8),
    ) {
        let ns = parents.len();
        let square: Vec<usize> = (0..ns).map(|j| sizes[j].0.max(sizes[j].1)).collect();
        // roots push nothing
        let packed: Vec<usize> = (0..ns).map(|j| if parents[j].is_some() { sizes[j].0.min(sizes[j].1) } else { 0 }).collect();
        let liu = liu_sibling_order(&parents, &square, &packed);
        prop_assert_eq!(simulate_mf_stack(&liu.postorder, &parents, &square, &packed), liu.peak);
        let mut kids = vec![Vec::new(); ns];
        for (j, p) in parents.iter().enumerate() {
            if let Some(p) = p { kids[*p].push(j); }
        }
        let best = all_child_orders(&kids)
            .iter()
            .map(|c| simulate_mf_stack(&postorder_with(&parents, c), &parents, &square, &packed))
            .min()
            .unwrap();
        prop_assert_eq!(liu.peak, best);
    }

    #[test]
    fn relative_indices_compose_associatively(
        c in proptest::collection::btree_set(0usize..60, 1..40),
        keep_b in any::<u64>(),
        keep_a in any::<u64>(),
        keep_x in any::<u64>(),
    ) {
        let c: Vec<usize> = c.into_iter().collect();
        let pick = |from: &[usize], mask: u64| -> Vec<usize> {
            let v: Vec<usize> = from.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &x)| x).collect();
            if v.is_empty() { vec![from[0]] } else { v }
        };
        let b = pick(&c, keep_b);
        let a = pick(&b, keep_a);
        let x = pick(&a, keep_x);
        let ab = compose_relative(&rel(&a, &b), &rel(&b, &c)).unwrap();
        prop_assert_eq!(&ab, &rel(&a, &c));
        let left = compose_relative(&compose_relative(&rel(&x, &a), &rel(&a, &b)).unwrap(), &rel(&b, &c)).unwrap();
        let right = compose_relative(&rel(&x, &a), &ab).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, rel(&x, &c));
    }

    #[test]
    fn refinement_keeps_a_partition_of_the_ground_set(
        ground in proptest::collection::btree_set(0usize..40, 1..30),
        masks in proptest::collection::vec(any::<u64>(), 0..8),
    ) {
        let ground: Vec<usize> = ground.into_iter().collect();
        let mut op = OrderedPartition::new(ground.clone());
        let mut pivots = Vec::new();
        for m in masks {
            let pivot: Vec<usize> = ground.iter().enumerate().filter(|(i, _)| m >> (i % 64) & 1 == 1).map(|(_, &x)| x).collect();
            op.refine(&pivot).unwrap();
            pivots.push(pivot.into_iter().collect::<BTreeSet<_>>());
        }
        let mut order = op.order();
        order.sort_unstable();
        prop_assert_eq!(&order, &ground);
        // every cell lies entirely inside or outside every pivot
        for cell in op.cells() {
            prop_assert!(!cell.is_empty());
            for p in &pivots {
                let inside = cell.iter().filter(|x| p.contains(x)).count();
                prop_assert!(inside == 0 || inside == cell.len());
            }
        }
        prop_assert!(op.refine(&[1000]).is_err());
    }

    #[test]
    fn within_supernode_reordering_invariants(n in 5usize..70, d in 0.02f64..0.3, seed in any::<u64>(), md in any::<bool>()) {
        let a = generate_spd(n, d, seed);
        let ordering = if md { Ordering::MinimumDegree } else { Ordering::Natural };
        let base = SymbolicOptions { reorder: false, ..SymbolicOptions::default() };
        let s0 = analyze(a.pattern(), &ordering, &base).unwrap();
        let (q, s1) = reorder_within_supernodes(&s0, true).unwrap();
        prop_assert_eq!(s1.perm(), &s0.perm().then(&q));
        let direct = build_symbolic_factor(a.pattern(), &ordering.permutation(a.pattern()).unwrap(), &SymbolicOptions::default()).unwrap();
        prop_assert_eq!(direct.perm(), s1.perm());
        // reordering never moves a column across supernodes
        prop_assert_eq!(s0.partition().boundaries(), s1.partition().boundaries());
        for k in 0..s0.nsuper() {
            for c in s0.partition().range(k) {
                prop_assert_eq!(s1.partition().supernode_of(q.new_of(c)), k);
            }
            prop_assert_eq!(s1.glbind(k).len(), s0.glbind(k).len());
        }
        prop_assert_eq!(s1.factor_nnz(), s0.factor_nnz());
        prop_assert!(s1.block_count() <= s0.block_count());
        for (after, before) in incoming_blocks(&s1).into_iter().zip(incoming_blocks(&s0)) {
            prop_assert!(after <= before);
        }
        prop_assert_eq!(s1.stats().blocks_before_reorder, Some(s0.block_count()));
        // the true structure of the permuted matrix fits in the panels
        let pa = apply_symmetric_permutation(&a, s1.perm()).unwrap();
        prop_assert_eq!(pa.pattern(), s1.pattern());
        let brute = brute_force_structure(s1.pattern());
        for j in 0..n {
            prop_assert_eq!(s1.columns().column(j), brute[j].as_slice());
            let k = s1.partition().supernode_of(j);
            let rows = s1.glbind(k);
            for i in &brute[j] {
                prop_assert!(rows.binary_search(i).is_ok(), "row {} of column {} has no slot", i, j);
            }
        }
    }

    #[test]
    fn matrix_market_round_trip(n in 1usize..30, d in 0.0f64..0.5, seed in any::<u64>()) {
        let a = generate_spd(n, d, seed);
        let mut text = Vec::new();
        write_matrix_market(&a, &mut text).unwrap();
        let b = parse_matrix_market(text.as_slice()).unwrap();
        prop_assert_eq!(a.pattern(), b.pattern());
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn permutation_inverse_and_text_round_trip(p in permutation_strategy(50)) {
        let p = Permutation::from_old_to_new(p).unwrap();
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert!(p.inverse().then(&p).is_identity());
        for i in 0..p.len() {
            prop_assert_eq!(p.old_of(p.new_of(i)), i);
        }
        let mut text = Vec::new();
        p.write(&mut text).unwrap();
        prop_assert_eq!(Permutation::parse(std::str::from_utf8(&text).unwrap()).unwrap(), p);
    }
}
