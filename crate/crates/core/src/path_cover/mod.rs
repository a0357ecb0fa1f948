//! Two-phase streaming path cover, its iterative extension, and an exact
//! oracle for `ρ(G)`.

mod oracle;

use serde::Serialize;

use crate::contraction::ContractionMap;
use crate::error::Result;
use crate::graph::{Edge, Graph, Matching, PathCover, PathCoverViolation};
use crate::matching::{
    streaming_max_matching, streaming_max_weight_matching, ApproxParams, ContractionView,
};
use crate::stream::{StreamReport, StreamSession};

pub use oracle::{oracle_mpc, MPC_ORACLE_MAX_VERTICES};

/// Words per stored edge: two endpoints and a weight.
const EDGE_WORDS: u64 = 3;

#[derive(Clone, Debug, Serialize)]
pub struct MpcResult {
    pub cover: PathCover,
    pub m1: Matching,
    pub m2: Matching,
    /// Passes used by the first and second matching phase.
    pub phase_passes: [usize; 2],
    pub report: StreamReport,
}

/// Matching `M1` on the stream, then matching `M2` on the stream viewed
/// through the contraction on `M1`; returns `M1 ∪ M2`.
///
/// Edge weights, if any, are ignored.
pub fn algorithm1_mpc(session: &mut StreamSession<'_>, params: &ApproxParams) -> Result<MpcResult> {
    let n = session.source().n();
    let first = streaming_max_matching(session, params, None)?;
    let m1 = first.matching;

    let held = EDGE_WORDS * m1.len() as u64 + n as u64;
    session.charge_memory(held)?;
    let view = ContractionView::from_matching(&m1);
    let second = streaming_max_matching(session, params, Some(&view))?;
    let m2 = second.matching;
    debug_assert!(view.is_view_matching(&m2));
    session.release_memory(held)?;

    let cover = PathCover::new(n, m1.edges().iter().chain(m2.edges()).copied().collect())?;
    Ok(MpcResult {
        cover,
        m1,
        m2,
        phase_passes: [first.passes, second.passes],
        report: session.report(),
    })
}

/// Decomposes `edges` into vertex-disjoint paths, or names the vertex of
/// degree above two or the cycle that prevents it.
pub fn validate_path_cover(edges: &[Edge], n: usize) -> Result<PathCover, PathCoverViolation> {
    PathCover::new(n, edges.to_vec())
}

/// True when every component of the cover has 1, 2 or 3 edges, the shape
/// every two-phase output must have.
pub fn has_short_components(cover: &PathCover) -> bool {
    cover.path_lengths().iter().all(|l| (1..=3).contains(l))
}

#[derive(Clone, Debug, Serialize)]
pub struct IterativeRun {
    pub cover: PathCover,
    /// `M_1, M_2, …` in order; the last one is empty unless the iteration
    /// cap was reached.
    pub matchings: Vec<Matching>,
    /// Size of the accumulated union after each iteration.
    pub sizes: Vec<usize>,
    /// Passes used by each matching run.
    pub passes: Vec<usize>,
    pub report: StreamReport,
}

impl IterativeRun {
    pub fn iterations(&self) -> usize {
        self.matchings.len()
    }
}

/// Repeats: contract every component of the accumulated union, drop the
/// edges at middle points of those components, and match again; stops at
/// the first empty matching (or after `n` matchings).
///
/// Weighted streams use the weighted engine.
pub fn algorithm4_iterative(
    session: &mut StreamSession<'_>,
    params: &ApproxParams,
) -> Result<IterativeRun> {
    let n = session.source().n();
    let weighted = session.source().is_weighted();
    let engine = |s: &mut StreamSession<'_>, view: Option<&ContractionView>| {
        if weighted {
            streaming_max_weight_matching(s, params, view)
        } else {
            streaming_max_matching(s, params, view)
        }
    };

    let first = engine(session, None)?;
    let mut passes = vec![first.passes];
    let first = first.matching;
    let mut union: Vec<Edge> = first.edges().to_vec();
    let mut matchings = vec![first];
    let mut sizes = vec![union.len()];
    let mut held = EDGE_WORDS * union.len() as u64;
    session.charge_memory(held)?;

    while !matchings.last().expect("at least one matching").is_empty() && matchings.len() < n.max(1)
    {
        let cover = PathCover::new(n, union.clone())?;
        let view = ContractionView::new(ContractionMap::from_edges(n, &union))
            .with_forbidden(cover.middle_points());
        let view_words = 2 * n as u64;
        session.charge_memory(view_words)?;
        let next = engine(session, Some(&view))?;
        session.release_memory(view_words)?;
        passes.push(next.passes);
        let next = next.matching;

        session.charge_memory(EDGE_WORDS * next.len() as u64)?;
        held += EDGE_WORDS * next.len() as u64;
        union.extend_from_slice(next.edges());
        sizes.push(union.len());
        matchings.push(next);
    }
    session.release_memory(held)?;

    let cover = PathCover::new(n, union)?;
    Ok(IterativeRun {
        cover,
        matchings,
        sizes,
        passes,
        report: session.report(),
    })
}

/// Drops every edge outside `cover` that touches a middle point of one of
/// the cover's paths. One graph edge per cover edge is treated as the cover
/// edge itself and kept.
pub fn remove_middle_incident_edges(g: &Graph, cover: &PathCover) -> Graph {
    let middle = cover.middle_points();
    let mut pending: Vec<Edge> = cover.edges().to_vec();
    let edges = g
        .edges()
        .iter()
        .filter(|e| {
            if let Some(i) = pending
                .iter()
                .position(|c| c.key() == e.key() && c.weight == e.weight)
            {
                pending.swap_remove(i);
                return true;
            }
            !middle[e.u] && !middle[e.v]
        })
        .copied()
        .collect();
    Graph::new(g.n(), edges, g.is_weighted()).expect("subgraph of a valid graph")
}
