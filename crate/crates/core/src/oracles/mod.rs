//! Worked-example fixtures, seeded instance generators, and bound-level
//! verifiers.
//!
//! All randomness comes from SplitMix64 (`z += 0x9E3779B97F4A7C15;
//! z = (z ^ z>>30)·0xBF58476D1CE4E5B9; z = (z ^ z>>27)·0x94D049BB133111EB;
//! z ^ z>>31`), so a seed names the same instance everywhere.

mod suites;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{degree_census, Edge, Graph, Matching, PathCover};
use crate::matching::{oracle_max_matching, ApproxParams};
use crate::path_cover::{algorithm1_mpc, algorithm4_iterative, oracle_mpc};
use crate::stream::{EdgeStreamSource, StreamSession};
use crate::tsp::{MaxTspInstance, Tsp12Instance};

pub use suites::{run_suite, run_trial, SuiteReport, TrialOutcome, SUITES};

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Which algorithm a fixture exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureAlgorithm {
    TwoPhase,
    Iterative,
}

pub const FIXTURE_NAMES: [&str; 2] = ["tight-2/3", "alg4-3/4"];

/// A worked example with its adversarial stream order (the order of
/// `graph.edges()`) and the values it is known to produce.
#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub labels: Vec<&'static str>,
    pub graph: Graph,
    pub algorithm: FixtureAlgorithm,
    pub expected_rho: usize,
    pub expected_mu: usize,
    pub expected_output: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub rho: usize,
    pub mu: usize,
    pub output: usize,
    pub cover: PathCover,
    pub matches: bool,
}

pub fn gen_fixture(name: &str) -> Result<Fixture> {
    match name {
        // Center edge u–v; u–a–b, u–c–d, v–e, v–f. Greedy takes a–b, c–d,
        // u–v; the contraction is a star, so the second matching adds one
        // edge.
        "tight-2/3" => Ok(Fixture {
            name: FIXTURE_NAMES[0],
            labels: vec!["u", "v", "a", "b", "c", "d", "e", "f"],
            graph: Graph::unweighted(8, &[(2, 3), (4, 5), (0, 1), (0, 2), (0, 4), (1, 6), (1, 7)])?,
            algorithm: FixtureAlgorithm::TwoPhase,
            expected_rho: 6,
            expected_mu: 3,
            expected_output: 4,
        }),
        // lt–t, lb–b, then t–b joins them into a path whose middle points
        // t and b cut off r.
        "alg4-3/4" => Ok(Fixture {
            name: FIXTURE_NAMES[1],
            labels: vec!["lt", "lb", "t", "b", "r"],
            graph: Graph::unweighted(5, &[(0, 2), (1, 3), (2, 3), (2, 4), (3, 4)])?,
            algorithm: FixtureAlgorithm::Iterative,
            expected_rho: 4,
            expected_mu: 2,
            expected_output: 3,
        }),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

impl Fixture {
    pub fn source(&self) -> EdgeStreamSource {
        EdgeStreamSource::from_graph(self.graph.clone())
    }

    /// Runs the fixture's algorithm on its canonical stream.
    pub fn run(&self, params: &ApproxParams) -> Result<PathCover> {
        let src = self.source();
        let mut session = StreamSession::open(&src, u64::MAX);
        Ok(match self.algorithm {
            FixtureAlgorithm::TwoPhase => algorithm1_mpc(&mut session, params)?.cover,
            FixtureAlgorithm::Iterative => algorithm4_iterative(&mut session, params)?.cover,
        })
    }

    /// Re-derives every expected value with the oracles and the algorithm.
    pub fn verify(&self, params: &ApproxParams) -> Result<FixtureCheck> {
        let (rho, _) = oracle_mpc(&self.graph)?;
        let (mu, _) = oracle_max_matching(&self.graph)?;
        let cover = self.run(params)?;
        let output = cover.len();
        let matches =
            (rho, mu, output) == (self.expected_rho, self.expected_mu, self.expected_output);
        Ok(FixtureCheck {
            rho,
            mu,
            output,
            cover,
            matches,
        })
    }
}

/// Loop-free multigraph with the given degrees, by pairing shuffled stubs;
/// pairings with a loop are redrawn, up to `attempts` times.
pub fn gen_multigraph_with_degrees(
    degrees: &[usize],
    attempts: usize,
    rng: &mut SplitMix64,
) -> Result<Graph> {
    let n = degrees.len();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        return Err(Error::Infeasible(format!("odd degree sum {degrees:?}")));
    }
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    for _ in 0..attempts {
        stubs.shuffle(rng);
        if stubs.chunks(2).all(|p| p[0] != p[1]) {
            let pairs: Vec<_> = stubs.chunks(2).map(|p| (p[0], p[1])).collect();
            return Graph::unweighted(n, &pairs);
        }
    }
    Err(Error::Infeasible(format!(
        "no loop-free pairing for {degrees:?} in {attempts} attempts"
    )))
}

/// Random loop-free multigraph on `n ≥ 2` vertices with every degree in
/// {1, 2, 4}. A share `q ~ U[0, ½]` of vertices gets degree 4; the rest get
/// 1 or 2 with equal odds. Odd sums and unpairable sequences are redrawn.
pub fn gen_deg124(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Infeasible(format!(
            "degree-{{1,2,4}} graphs need n ≥ 2, got {n}"
        )));
    }
    let mut rng = rng(seed);
    for _ in 0..1000 {
        let q: f64 = rng.gen_range(0.0..=0.5);
        let degrees: Vec<usize> = (0..n)
            .map(|_| {
                if rng.gen_bool(q) {
                    4
                } else if rng.gen_bool(0.5) {
                    1
                } else {
                    2
                }
            })
            .collect();
        if degrees.iter().sum::<usize>() % 2 == 1 {
            continue;
        }
        if let Ok(g) = gen_multigraph_with_degrees(&degrees, 20, &mut rng) {
            return Ok(g);
        }
    }
    Err(Error::Infeasible(format!(
        "no degree-{{1,2,4}} multigraph drawn for n = {n}"
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct EDeg4Verdict {
    pub mu: usize,
    pub edges: usize,
    pub v4: usize,
    /// `3μ − (|E| − |V4|)`.
    pub slack: i64,
    pub holds: bool,
}

/// Checks `3·μ(g) ≥ |E(g)| − |V4(g)|`. Every vertex must have degree 1, 2
/// or 4; isolated vertices are ignored since they change neither side.
pub fn check_e_deg4(g: &Graph) -> Result<EDeg4Verdict> {
    let census = degree_census(g);
    if let Some(d) = census
        .histogram
        .keys()
        .find(|&&d| !matches!(d, 0 | 1 | 2 | 4))
    {
        return Err(Error::Hypothesis(format!(
            "a vertex has degree {d}, outside {{1, 2, 4}}"
        )));
    }
    let (mu, _) = oracle_max_matching(g)?;
    let slack = 3 * mu as i64 - (census.edge_count as i64 - census.v4 as i64);
    Ok(EDeg4Verdict {
        mu,
        edges: census.edge_count,
        v4: census.v4,
        slack,
        holds: slack >= 0,
    })
}

/// Erdős–Rényi graph: each pair independently with probability `p`, then
/// the edges shuffled into a random stream order.
pub fn gen_random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut pairs = random_pairs(n, p, &mut rng);
    pairs.shuffle(&mut rng);
    Graph::unweighted(n, &pairs).expect("pairs are in range")
}

/// [`gen_random_graph`] with weights uniform in `1..=max_weight`.
pub fn gen_random_weighted(n: usize, p: f64, max_weight: u64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut pairs = random_pairs(n, p, &mut rng);
    pairs.shuffle(&mut rng);
    let triples: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(1..=max_weight)))
        .collect();
    Graph::weighted(n, &triples).expect("pairs are in range")
}

/// (1,2)-TSP instance whose weight-1 graph is [`gen_random_graph`].
pub fn gen_random_tsp12(n: usize, p: f64, seed: u64) -> Tsp12Instance {
    Tsp12Instance::new(gen_random_graph(n, p, seed)).expect("simple graph")
}

/// Complete graph on `n ≥ 3` vertices, weights uniform in
/// `1..=max_weight`, pairs in random stream order.
pub fn gen_random_maxtsp(n: usize, max_weight: u64, seed: u64) -> Result<MaxTspInstance> {
    MaxTspInstance::new(gen_random_weighted(n, 1.0, max_weight, seed))
}

fn random_pairs(n: usize, p: f64, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let p = p.clamp(0.0, 1.0);
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect()
}

/// A random matching of `g`: edges in shuffled order, each free one kept
/// with a probability drawn once in `[0.3, 1]`.
pub fn random_matching(g: &Graph, rng: &mut SplitMix64) -> Matching {
    let keep: f64 = rng.gen_range(0.3..=1.0);
    let mut edges: Vec<Edge> = g.edges().to_vec();
    edges.shuffle(rng);
    let mut used = vec![false; g.n()];
    let mut chosen = Vec::new();
    for e in edges {
        if !used[e.u] && !used[e.v] && rng.gen_bool(keep) {
            used[e.u] = true;
            used[e.v] = true;
            chosen.push(e);
        }
    }
    Matching::from_edges(g.n(), chosen).expect("disjoint by construction")
}
