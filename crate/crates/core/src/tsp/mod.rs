//! (1,2)-TSP and Max-TSP built on streaming path covers, the matching
//! extraction steps behind the Max-TSP analysis, and Held-Karp oracles.

mod extract;
mod oracle;

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CostModel, Edge, Graph, Matching, PathCover, Tour, VertexId};
use crate::matching::{streaming_max_weight_matching, ApproxParams, ContractionView};
use crate::path_cover::{algorithm1_mpc, MpcResult};
use crate::stream::{StreamReport, StreamSession};

pub use extract::{extract_matching_from_cycle, extract_matching_from_path_or_cycle};
pub use oracle::{
    contract_bound_check, oracle_maxtsp, oracle_tsp12, tsp12_optimum_identity_check,
    ContractBoundVerdict, IdentityVerdict, CONTRACT_BOUND_MAX_VERTICES,
    IDENTITY_CHECK_MAX_VERTICES, TSP_ORACLE_MAX_VERTICES,
};

/// Largest Max-TSP edge weight accepted.
pub const MAX_TSP_WEIGHT: u64 = 1_000_000;

/// Complete graph with distances 1 and 2, stored as the graph `G1` of its
/// weight-1 edges.
#[derive(Clone, Debug)]
pub struct Tsp12Instance {
    g1: Graph,
    ones: HashSet<(VertexId, VertexId)>,
}

impl Tsp12Instance {
    /// Rejects weighted graphs and repeated pairs.
    pub fn new(g1: Graph) -> Result<Self> {
        if g1.is_weighted() {
            return Err(Error::InvalidInstance(
                "(1,2)-TSP takes the unweighted graph of weight-1 edges".into(),
            ));
        }
        let mut ones = HashSet::with_capacity(g1.edge_count());
        for e in g1.edges() {
            if !ones.insert(e.key()) {
                return Err(Error::InvalidInstance(format!(
                    "pair {{{}, {}}} listed twice",
                    e.u, e.v
                )));
            }
        }
        Ok(Tsp12Instance { g1, ones })
    }

    pub fn g1(&self) -> &Graph {
        &self.g1
    }
}

impl CostModel for Tsp12Instance {
    fn n(&self) -> usize {
        self.g1.n()
    }

    fn weight(&self, u: VertexId, v: VertexId) -> u64 {
        if self.ones.contains(&(u.min(v), u.max(v))) {
            1
        } else {
            2
        }
    }
}

/// Complete graph with positive integer weights.
#[derive(Clone, Debug)]
pub struct MaxTspInstance {
    graph: Graph,
    weights: Vec<u64>,
}

impl MaxTspInstance {
    /// Requires `n ≥ 3`, every pair exactly once, and weights ≤
    /// [`MAX_TSP_WEIGHT`].
    pub fn new(graph: Graph) -> Result<Self> {
        let n = graph.n();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        let mut weights = vec![0; n * n];
        for e in graph.edges() {
            if e.weight > MAX_TSP_WEIGHT {
                return Err(Error::InvalidInstance(format!(
                    "weight {} exceeds {MAX_TSP_WEIGHT}",
                    e.weight
                )));
            }
            if weights[e.u * n + e.v] != 0 {
                return Err(Error::InvalidInstance(format!(
                    "pair {{{}, {}}} listed twice",
                    e.u, e.v
                )));
            }
            weights[e.u * n + e.v] = e.weight;
            weights[e.v * n + e.u] = e.weight;
        }
        if graph.edge_count() != n * (n - 1) / 2 {
            let (u, v) = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .find(|&(u, v)| weights[u * n + v] == 0)
                .expect("a pair is missing");
            return Err(Error::InvalidInstance(format!(
                "not complete: pair {{{u}, {v}}} missing"
            )));
        }
        Ok(MaxTspInstance { graph, weights })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl CostModel for MaxTspInstance {
    fn n(&self) -> usize {
        self.graph.n()
    }

    fn weight(&self, u: VertexId, v: VertexId) -> u64 {
        self.weights[u * self.graph.n() + v]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tsp12Run {
    pub tour: Tour,
    pub mpc: MpcResult,
}

impl Tsp12Run {
    /// `2n − |P̃|`: the tour cost if every added edge weighs 2. The actual
    /// cost is lower by one for each added edge that happens to lie in `G1`.
    pub fn cost_upper_bound(&self) -> u64 {
        2 * self.tour.order().len() as u64 - self.mpc.cover.len() as u64
    }
}

/// Streams `G1`, builds a path cover of it, and closes the cover into a tour.
///
/// `session` must stream `inst.g1()`.
pub fn algorithm2_tsp12(
    inst: &Tsp12Instance,
    params: &ApproxParams,
    session: &mut StreamSession<'_>,
) -> Result<Tsp12Run> {
    let n = inst.n();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    check_source(session, n, inst.g1().edge_count())?;
    let mpc = algorithm1_mpc(session, params)?;
    let tour = extend_to_hamiltonian(&mpc.cover, inst)?;
    Ok(Tsp12Run { tour, mpc })
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxTspRun {
    pub tour: Tour,
    pub cover: PathCover,
    pub m1: Matching,
    pub m2: Matching,
    /// The single vertex left outside `M1 ∪ M2`, if any, and the path
    /// endpoint it was joined to.
    pub attached: Option<(VertexId, VertexId)>,
    pub phase_passes: [usize; 2],
    pub report: StreamReport,
}

/// Weighted matching `M1`, weighted matching `M2` on the contraction by
/// `M1` (parallel edges compete on weight), then `M1 ∪ M2` closed into a
/// tour.
///
/// `session` must stream `inst.graph()`.
pub fn algorithm3_maxtsp(
    inst: &MaxTspInstance,
    params: &ApproxParams,
    session: &mut StreamSession<'_>,
) -> Result<MaxTspRun> {
    let n = inst.n();
    check_source(session, n, inst.graph().edge_count())?;
    let first = streaming_max_weight_matching(session, params, None)?;
    let m1 = first.matching;
    let held = 3 * m1.len() as u64 + n as u64;
    session.charge_memory(held)?;
    let view = ContractionView::from_matching(&m1);
    let second = streaming_max_weight_matching(session, params, Some(&view))?;
    let m2 = second.matching;
    session.release_memory(held)?;

    let mut edges: Vec<Edge> = m1.edges().iter().chain(m2.edges()).copied().collect();
    let mut cover = PathCover::new(n, edges.clone())?;
    let mut attached = None;
    if let [leftover] = cover.uncovered()[..] {
        let endpoint = cover
            .paths()
            .iter()
            .flat_map(|p| [p[0], p[p.len() - 1]])
            .min();
        if let Some(endpoint) = endpoint {
            edges.push(Edge::weighted(
                leftover,
                endpoint,
                inst.weight(leftover, endpoint),
            ));
            cover = PathCover::new(n, edges)?;
            attached = Some((leftover, endpoint));
        }
    }
    let tour = extend_to_hamiltonian(&cover, inst)?;
    Ok(MaxTspRun {
        tour,
        cover,
        m1,
        m2,
        attached,
        phase_passes: [first.passes, second.passes],
        report: session.report(),
    })
}

fn check_source(session: &StreamSession<'_>, n: usize, m: usize) -> Result<()> {
    let src = session.source();
    if src.n() != n || src.edge_count() != m {
        return Err(Error::InvalidInstance(format!(
            "stream has {} vertices and {} edges, instance has {n} and {m}",
            src.n(),
            src.edge_count()
        )));
    }
    Ok(())
}

/// Closes a path cover into a tour: paths in order of their smallest
/// vertex, each walked from its lower-id endpoint, then the uncovered
/// vertices in id order.
pub fn extend_to_hamiltonian(cover: &PathCover, model: &impl CostModel) -> Result<Tour> {
    let n = model.n();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    if cover.n() != n {
        return Err(Error::InvalidInstance(format!(
            "cover over {} vertices, instance has {n}",
            cover.n()
        )));
    }
    let order: Vec<VertexId> = cover
        .paths()
        .iter()
        .flatten()
        .copied()
        .chain(cover.uncovered())
        .collect();
    Tour::new(order, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::EdgeStreamSource;

    fn tsp12(n: usize, pairs: &[(usize, usize)], k: usize) -> Tsp12Run {
        let inst = Tsp12Instance::new(Graph::unweighted(n, pairs).unwrap()).unwrap();
        let src = EdgeStreamSource::from_graph(inst.g1().clone());
        let mut s = StreamSession::open(&src, u64::MAX);
        algorithm2_tsp12(&inst, &ApproxParams::from_k(k).unwrap(), &mut s).unwrap()
    }

    fn maxtsp(inst: &MaxTspInstance, k: usize) -> MaxTspRun {
        let src = EdgeStreamSource::from_graph(inst.graph().clone());
        let mut s = StreamSession::open(&src, u64::MAX);
        algorithm3_maxtsp(inst, &ApproxParams::from_k(k).unwrap(), &mut s).unwrap()
    }

    fn complete(n: usize, w: impl Fn(usize, usize) -> u64) -> MaxTspInstance {
        let t: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| (u, v, w(u, v)))
            .collect();
        MaxTspInstance::new(Graph::weighted(n, &t).unwrap()).unwrap()
    }

    #[test]
    fn tsp12_examples() {
        let r = tsp12(5, &[], 2);
        assert_eq!(r.tour.cost(), 10);
        let r = tsp12(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 4);
        assert!(r.mpc.cover.len() >= 2);
        assert!(r.tour.cost() <= 6);
        assert!(r.tour.cost() <= r.cost_upper_bound());
    }

    #[test]
    fn tsp12_rejects_small_and_duplicate() {
        let inst = Tsp12Instance::new(Graph::unweighted(2, &[(0, 1)]).unwrap()).unwrap();
        let src = EdgeStreamSource::from_graph(inst.g1().clone());
        let mut s = StreamSession::open(&src, u64::MAX);
        assert!(matches!(
            algorithm2_tsp12(&inst, &ApproxParams::from_k(1).unwrap(), &mut s),
            Err(Error::TooFewVertices(2))
        ));
        assert!(Tsp12Instance::new(Graph::unweighted(3, &[(0, 1), (1, 0)]).unwrap()).is_err());
    }

    #[test]
    fn maxtsp_instance_validation() {
        assert!(MaxTspInstance::new(Graph::weighted(3, &[(0, 1, 1), (1, 2, 1)]).unwrap()).is_err());
        assert!(MaxTspInstance::new(
            Graph::weighted(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 2_000_000)]).unwrap()
        )
        .is_err());
        assert!(matches!(
            MaxTspInstance::new(Graph::weighted(2, &[(0, 1, 1)]).unwrap()),
            Err(Error::TooFewVertices(2))
        ));
    }

    #[test]
    fn maxtsp_examples() {
        let r = maxtsp(&complete(3, |_, _| 1), 2);
        assert_eq!(r.tour.cost(), 3);
        let inst = complete(4, |u, v| if (u, v) == (1, 2) { 100 } else { 1 });
        let r = maxtsp(&inst, 4);
        assert!(r.tour.contains_pair(1, 2));
        assert_eq!(r.tour.cost(), 103);
    }

    #[test]
    fn odd_leftover_is_attached() {
        let r = maxtsp(&complete(5, |u, v| (u * 7 + v * 3) as u64 % 11 + 1), 2);
        assert!(r.cover.uncovered().is_empty());
        for e in r.cover.edges() {
            assert!(r.tour.contains_pair(e.u, e.v));
        }
    }

    #[test]
    fn extension_examples() {
        let inst = Tsp12Instance::new(Graph::empty(4)).unwrap();
        let t = extend_to_hamiltonian(&PathCover::empty(4), &inst).unwrap();
        assert_eq!(t.order(), &[0, 1, 2, 3]);
        let cover = PathCover::new(4, vec![Edge::new(2, 1), Edge::new(0, 1)]).unwrap();
        let t = extend_to_hamiltonian(&cover, &inst).unwrap();
        assert_eq!(t.order(), &[0, 1, 2, 3]);
        let cover = PathCover::new(5, vec![Edge::new(4, 3), Edge::new(1, 2)]).unwrap();
        let inst = Tsp12Instance::new(Graph::empty(5)).unwrap();
        assert_eq!(
            extend_to_hamiltonian(&cover, &inst).unwrap().order(),
            &[1, 2, 3, 4, 0]
        );
    }
}
