use dimers::oracle::{
    count_by_boundary, count_matchings, count_matchings_edges, Budget, OracleError,
};
use dimers::recursion::{self, cross_check_oracle};
use dimers::{build, BoundaryCountVector, Family};
use num_bigint::BigUint;
use proptest::prelude::*;

fn count(n: usize, edges: &[(usize, usize)]) -> BigUint {
    count_matchings_edges(n, edges, &Budget::default())
        .unwrap()
        .total
}

/// Enumerates every edge subset; only usable on tiny graphs.
fn brute_force(n: usize, edges: &[(usize, usize)]) -> BigUint {
    let mut total = 0u64;
    for mask in 0u32..(1 << edges.len()) {
        let mut used = vec![false; n];
        let ok = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .all(|(_, &(a, b))| {
                let free = !used[a] && !used[b];
                used[a] = true;
                used[b] = true;
                free
            });
        total += u64::from(ok);
    }
    total.into()
}

/// Deletes vertices in `gone`, renumbering the survivors.
fn delete_vertices(
    n: usize,
    edges: &[(usize, usize)],
    gone: &[usize],
) -> (usize, Vec<(usize, usize)>) {
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    for (v, slot) in map.iter_mut().enumerate() {
        if !gone.contains(&v) {
            *slot = next;
            next += 1;
        }
    }
    let kept = edges
        .iter()
        .filter(|(a, b)| map[*a] != usize::MAX && map[*b] != usize::MAX)
        .map(|&(a, b)| (map[a], map[b]))
        .collect();
    (next, kept)
}

fn simple_graph(max_n: usize, max_e: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let k = pairs.len().min(max_e);
        (Just(n), proptest::sample::subsequence(pairs, 0..=k))
    })
}

proptest! {
    #[test]
    fn agrees_with_subset_enumeration((n, edges) in simple_graph(9, 14)) {
        prop_assert_eq!(count(n, &edges), brute_force(n, &edges));
    }

    #[test]
    fn edge_deletion_identity((n, edges) in simple_graph(12, 30), pick in any::<prop::sample::Index>()) {
        prop_assume!(!edges.is_empty());
        let i = pick.index(edges.len());
        let (u, v) = edges[i];
        let mut without = edges.clone();
        without.remove(i);
        let (n2, contracted) = delete_vertices(n, &edges, &[u, v]);
        prop_assert_eq!(count(n, &edges), count(n, &without) + count(n2, &contracted));
    }

    #[test]
    fn disjoint_union_multiplies((n1, e1) in simple_graph(8, 16), (n2, e2) in simple_graph(8, 16)) {
        let mut union = e1.clone();
        union.extend(e2.iter().map(|&(a, b)| (a + n1, b + n1)));
        prop_assert_eq!(count(n1 + n2, &union), count(n1, &e1) * count(n2, &e2));
    }

    #[test]
    fn pendant_vertex_rule((n, edges) in simple_graph(10, 25), anchor in any::<prop::sample::Index>()) {
        // Attach a new pendant vertex `n` to `u`.
        let u = anchor.index(n);
        let mut with = edges.clone();
        with.push((u, n));
        let (n2, without_u) = delete_vertices(n, &edges, &[u]);
        prop_assert_eq!(count(n + 1, &with), count(n, &edges) + count(n2, &without_u));
    }
}

#[test]
fn boundary_counts_match_recursion() {
    let budget = Budget::default();
    for (family, n_max) in [(Family::Hanoi, 3), (Family::SierpX, 1)] {
        let ledger = recursion::iterate(family, n_max).unwrap();
        for record in &ledger {
            let g = build(family, record.n).unwrap();
            let oracle = count_by_boundary(&g, &budget).unwrap();
            assert_eq!(oracle.counts, record.counts, "{family} n={}", record.n);
        }
    }
    cross_check_oracle(Family::Hanoi, 3, &budget).unwrap();
}

#[test]
fn sierpx_stage_two_total() {
    let g = build(Family::SierpX, 2).unwrap();
    let total = count_matchings(&g, &Budget::default()).unwrap().total;
    assert_eq!(total, recursion::iterate(Family::SierpX, 2).unwrap()[2].m);
}

#[test]
fn hanoi_stage_three_by_boundary() {
    let g = build(Family::Hanoi, 3).unwrap();
    let got = count_by_boundary(&g, &Budget::default()).unwrap().counts;
    let expect = BoundaryCountVector::parse(
        "18782596680434060148",
        "17236435531779805328",
        "15817552541478488865",
        "14515470321889909750",
    )
    .unwrap();
    assert_eq!(got, expect);
    assert_eq!(got.total().to_string(), "132460031222098852477");
}

#[test]
fn exhausted_budget_reports_no_count() {
    let g = build(Family::Hanoi, 3).unwrap();
    match count_matchings(&g, &Budget::steps(50)) {
        Err(OracleError::BudgetExhausted { steps, .. }) => assert!(steps > 50),
        other => panic!("expected budget exhaustion, got {other:?}"),
    }
}
