mod common;

use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use scidforge::bounds;
use scidforge::gf::FieldCtx;
use scidforge::scid;
use scidforge::search::{self, SearchOptions};

use common::SmallInstance;

fn exhaustive(q: u64, n: usize, k: usize) -> search::SearchResult {
    let ctx = FieldCtx::with_order(q).unwrap();
    let graph = search::build_intersection_graph(&ctx, n, k).unwrap();
    let r = search::max_nonsunflower_clique(&graph, SearchOptions::default()).unwrap();
    assert!(r.exhaustive);
    r
}

#[test]
fn matches_naive_clique_enumeration() {
    for (q, n, k, expected) in [
        (2u64, 2usize, 1usize, 7usize),
        (3, 2, 1, 13),
        (4, 2, 1, 21),
        (2, 3, 1, 7),
    ] {
        let ctx = FieldCtx::with_order(q).unwrap();
        let inst = SmallInstance::new(&ctx, n, k);
        let naive = inst.naive_max_nonsunflower();
        let r = exhaustive(q, n, k);
        assert_eq!(naive, expected, "naive PG({n},{q}) k={k}");
        assert_eq!(r.best_size, naive, "search PG({n},{q}) k={k}");
    }
}

#[test]
fn no_edges_between_planes_of_pg32() {
    let ctx = FieldCtx::with_order(2).unwrap();
    let inst = SmallInstance::new(&ctx, 3, 2);
    assert_eq!(inst.len(), 15);
    assert!(inst.adj.iter().all(|&a| a == 0));
    let graph = search::build_intersection_graph(&ctx, 3, 2).unwrap();
    assert_eq!(graph.edge_count(), 0);
    assert_eq!(inst.naive_max_nonsunflower(), 0);
    assert_eq!(exhaustive(2, 3, 2).best_size, 0);
}

#[test]
fn adjacency_agrees_with_meet() {
    for (q, n, k) in [(2u64, 3usize, 1usize), (4, 2, 1), (2, 4, 3)] {
        let ctx = FieldCtx::with_order(q).unwrap();
        let inst = SmallInstance::new(&ctx, n, k);
        let graph = search::build_intersection_graph(&ctx, n, k).unwrap();
        assert_eq!(graph.vertices(), &inst.blocks[..]);
        for i in 0..inst.len() {
            for j in 0..inst.len() {
                if i != j {
                    assert_eq!(graph.adjacent(i, j), inst.adj[i] >> j & 1 == 1);
                }
            }
        }
    }
}

#[test]
fn pg33_lines() {
    let r = exhaustive(3, 3, 1);
    assert_eq!(r.best_size, 13);
    let best = r.best_scid.unwrap();
    assert!(scid::verify_scid(&best).is_valid());
    assert!(!scid::is_sunflower(&best).unwrap().is_sunflower);
}

#[test]
fn pg42_planes_shuffled_order() {
    let ctx = FieldCtx::with_order(2).unwrap();
    let graph = search::build_intersection_graph(&ctx, 4, 2).unwrap();
    let start = Instant::now();
    let base = search::max_nonsunflower_clique(&graph, SearchOptions::default()).unwrap();
    eprintln!("PG(4,2) planes: {} nodes in {:?}", base.nodes_explored, start.elapsed());
    assert_eq!(base.best_size, 9);
    assert!(base.exhaustive);

    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.shuffle(&mut StdRng::seed_from_u64(7));
    let shuffled =
        search::max_nonsunflower_clique_with_order(&graph, &order, SearchOptions::default()).unwrap();
    assert_eq!(shuffled.best_size, 9);
    assert!(shuffled.exhaustive);
    let best = shuffled.best_scid.unwrap();
    assert!(scid::verify_scid(&best).is_valid());
    assert!(!scid::is_sunflower(&best).unwrap().is_sunflower);
}

#[test]
fn monotone_in_n() {
    let mut prev = 0;
    for n in 2..=4 {
        let r = exhaustive(2, n, 1);
        assert!(r.best_size >= prev, "n = {n}");
        prev = r.best_size;
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let ctx = FieldCtx::with_order(3).unwrap();
    let graph = search::build_intersection_graph(&ctx, 3, 1).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| search::max_nonsunflower_clique(&graph, SearchOptions::default()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.best_size, four.best_size);
    assert_eq!(one.nodes_explored, four.nodes_explored);
    assert_eq!(
        one.best_scid.unwrap().to_json(),
        four.best_scid.unwrap().to_json()
    );
}

#[test]
fn budget_and_cap() {
    let ctx = FieldCtx::with_order(2).unwrap();
    let graph = search::build_intersection_graph(&ctx, 4, 2).unwrap();
    let r = search::max_nonsunflower_clique(
        &graph,
        SearchOptions {
            size_cap: None,
            node_budget: Some(500),
        },
    )
    .unwrap();
    assert!(!r.exhaustive);
    assert!(r.nodes_explored <= 500);
    assert!(r.best_size <= 9);

    let r = search::max_nonsunflower_clique(
        &graph,
        SearchOptions {
            size_cap: Some(6),
            node_budget: None,
        },
    )
    .unwrap();
    assert!(r.best_size >= 6);
}

#[test]
fn results_respect_bounds() {
    for (q, n, k) in [(2u64, 2usize, 1usize), (3, 2, 1), (2, 3, 1), (3, 3, 1)] {
        let r = exhaustive(q, n, k);
        let report = bounds::bound_report(q, k as u32, 0).unwrap();
        let cmp = search::compare_to_bounds(&r, &report).unwrap();
        assert!(r.within_bounds);
        assert_eq!(cmp.best_size, r.best_size);
        assert!(cmp.below_theorem_range);
    }
}
