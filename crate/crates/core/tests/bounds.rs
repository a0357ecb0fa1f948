use rand::{Rng, RngCore};
use streampath::contraction::{contract, contract_on, ContractionMap};
use streampath::graph::CostModel;
use streampath::graph::{decompose_paths, Edge, Graph, Matching};
use streampath::matching::{oracle_max_matching, ApproxParams};
use streampath::oracles::{check_e_deg4, gen_fixture, gen_random_graph, random_matching, rng};
use streampath::path_cover::*;
use streampath::stream::{EdgeStreamSource, StreamSession};
use streampath::tsp::{algorithm2_tsp12, Tsp12Instance};

/// A maximum path cover sharing as many edges with `m` as possible, by
/// enumerating edge subsets.
fn mpc_aligned_with(g: &Graph, m: &Matching) -> Vec<Edge> {
    let edges = g.edges();
    let mut best: Option<(usize, usize, Vec<Edge>)> = None;
    for mask in 0u32..(1 << edges.len()) {
        let sub: Vec<Edge> = (0..edges.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| edges[i])
            .collect();
        if decompose_paths(g.n(), &sub).is_err() {
            continue;
        }
        let shared = sub.iter().filter(|e| m.edges().contains(e)).count();
        let score = (sub.len(), shared);
        if best.as_ref().is_none_or(|b| score > (b.0, b.1)) {
            best = Some((sub.len(), shared, sub));
        }
    }
    best.unwrap().2
}

#[test]
fn contracted_optimal_cover_meets_degree_bound() {
    let mut r = rng(300);
    let mut checked = 0;
    while checked < 200 {
        let n = r.gen_range(2..=9);
        let g = gen_random_graph(n, r.gen_range(0.2..=0.6), r.next_u64());
        if g.edge_count() > 14 {
            continue;
        }
        let m = random_matching(&g, &mut r);
        let p_star = mpc_aligned_with(&g, &m);
        let (rho, _) = oracle_mpc(&g).unwrap();
        assert_eq!(p_star.len(), rho);
        let p_graph = Graph::new(n, p_star, false).unwrap();
        let contracted = contract_on(&p_graph, ContractionMap::from_matching(&m)).graph;
        let v = check_e_deg4(&contracted).expect("degrees stay in {1, 2, 4}");
        assert!(v.holds);
        assert_eq!(v.edges as i64 - v.v4 as i64, rho as i64 - m.len() as i64);
        let (mu, _) = oracle_max_matching(&contract(&g, &m).unwrap().graph).unwrap();
        assert!(mu >= v.mu);
        checked += 1;
    }
}

#[test]
fn iterative_dominates_two_phase_and_is_monotone() {
    let mut r = rng(301);
    for i in 0..300 {
        let n = r.gen_range(2..=12);
        let g = gen_random_graph(n, r.gen_range(0.1..=0.7), r.next_u64());
        let params = ApproxParams::from_k(1 + i % 3).unwrap();
        let src = EdgeStreamSource::from_graph(g.clone());
        let mut s = StreamSession::open(&src, u64::MAX);
        let two = algorithm1_mpc(&mut s, &params).unwrap();
        let mut s = StreamSession::open(&src, u64::MAX);
        let it = algorithm4_iterative(&mut s, &params).unwrap();
        assert!(it.cover.len() >= two.cover.len());
        assert!(it.sizes.windows(2).all(|w| w[0] <= w[1]));
        assert!(it.iterations() <= n);
        assert_eq!(&it.matchings[0], &two.m1);
        for e in it.cover.edges() {
            assert!(g.position_of(e).is_some());
        }
    }
}

#[test]
fn iterative_example_filters_everything_after_second_matching() {
    let f = gen_fixture("alg4-3/4").unwrap();
    let params = ApproxParams::from_k(2).unwrap();
    let src = f.source();
    let mut s = StreamSession::open(&src, u64::MAX);
    let run = algorithm4_iterative(&mut s, &params).unwrap();
    assert_eq!(run.sizes, vec![2, 3, 3]);
    let first_two: Vec<Edge> = run.matchings[..2]
        .iter()
        .flat_map(|m| m.edges().iter().copied())
        .collect();
    let cover = validate_path_cover(&first_two, 5).unwrap();
    let left = remove_middle_incident_edges(&f.graph, &cover);
    assert_eq!(left.edge_count(), cover.len());
}

#[test]
fn tsp12_cost_counts_added_edges() {
    let mut r = rng(302);
    for _ in 0..300 {
        let n = r.gen_range(3..=12);
        let inst =
            Tsp12Instance::new(gen_random_graph(n, r.gen_range(0.1..=0.8), r.next_u64())).unwrap();
        let src = EdgeStreamSource::from_graph(inst.g1().clone());
        let mut s = StreamSession::open(&src, u64::MAX);
        let run = algorithm2_tsp12(&inst, &ApproxParams::from_k(3).unwrap(), &mut s).unwrap();
        let cover = &run.mpc.cover;
        let added_ones = run
            .tour
            .pairs()
            .filter(|&(u, v)| {
                !cover
                    .edges()
                    .iter()
                    .any(|e| e.key() == (u.min(v), u.max(v)))
            })
            .filter(|&(u, v)| inst.weight(u, v) == 1)
            .count() as u64;
        let recomputed: u64 = run.tour.pairs().map(|(u, v)| inst.weight(u, v)).sum();
        assert_eq!(run.tour.cost(), recomputed);
        assert_eq!(
            run.tour.cost(),
            2 * n as u64 - cover.len() as u64 - added_ones
        );
    }
}
