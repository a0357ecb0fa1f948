//! Value types shared by every algorithm: graphs in stream order, matchings,
//! path covers, tours and degree statistics.
//!
//! Vertices are dense indices `0..n`. Graphs are multigraphs (contraction
//! produces parallel edges) but never contain loops. Unweighted graphs carry
//! weight 1 on every edge so that sizes and weights coincide.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u64,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        Edge { u, v, weight: 1 }
    }

    pub fn weighted(u: VertexId, v: VertexId, weight: u64) -> Self {
        Edge { u, v, weight }
    }

    /// Unordered endpoint pair, smaller id first.
    pub fn key(&self) -> (VertexId, VertexId) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`. `x` must be an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        debug_assert!(self.touches(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {})", self.u, self.v, self.weight)
    }
}

/// A loop-free multigraph whose edge list order is the stream arrival order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    weighted: bool,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>, weighted: bool) -> Result<Self> {
        for (index, e) in edges.iter().enumerate() {
            for vertex in [e.u, e.v] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { index, vertex, n });
                }
            }
            if e.u == e.v {
                return Err(Error::Loop { index, vertex: e.u });
            }
            if e.weight == 0 {
                return Err(Error::ZeroWeight { index });
            }
            if !weighted && e.weight != 1 {
                return Err(Error::InvalidInstance(format!(
                    "edge {index}: unweighted graph carries weight {}",
                    e.weight
                )));
            }
        }
        Ok(Graph { n, edges, weighted })
    }

    pub fn unweighted(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::new(
            n,
            pairs.iter().map(|&(u, v)| Edge::new(u, v)).collect(),
            false,
        )
    }

    pub fn weighted(n: usize, triples: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        Self::new(
            n,
            triples
                .iter()
                .map(|&(u, v, w)| Edge::weighted(u, v, w))
                .collect(),
            true,
        )
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            weighted: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(1)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Same graph with the edge list permuted: position `i` of the result is
    /// edge `order[i]` of `self`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.edges.len()];
        if order.len() != self.edges.len() {
            return Err(Error::InvalidInstance(
                "stream order is not a permutation".into(),
            ));
        }
        let mut edges = Vec::with_capacity(order.len());
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInstance(
                    "stream order is not a permutation".into(),
                ));
            }
            edges.push(self.edges[i]);
        }
        Ok(Graph {
            n: self.n,
            edges,
            weighted: self.weighted,
        })
    }

    /// Position of the first edge equal to `e` (same endpoints, either
    /// orientation, same weight).
    pub fn position_of(&self, e: &Edge) -> Option<usize> {
        self.edges
            .iter()
            .position(|f| f.key() == e.key() && f.weight == e.weight)
    }
}

/// Keeps, for every unordered vertex pair, only the heaviest edge; on equal
/// weights the earliest in stream order survives. Surviving edges keep their
/// relative order.
pub fn dedupe_parallel_max(g: &Graph) -> Graph {
    let mut best: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        best.entry(e.key())
            .and_modify(|j| {
                if e.weight > g.edges[*j].weight {
                    *j = i;
                }
            })
            .or_insert(i);
    }
    let mut keep: Vec<usize> = best.into_values().collect();
    keep.sort_unstable();
    Graph {
        n: g.n,
        edges: keep.into_iter().map(|i| g.edges[i]).collect(),
        weighted: g.weighted,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCensus {
    /// degree -> number of vertices with that degree (parallel edges counted)
    pub histogram: BTreeMap<usize, usize>,
    pub v4: usize,
    pub edge_count: usize,
}

impl DegreeCensus {
    pub fn degree_sum(&self) -> usize {
        self.histogram.iter().map(|(d, c)| d * c).sum()
    }

    /// True when every vertex has degree 1, 2 or 4.
    pub fn only_degrees_1_2_4(&self) -> bool {
        self.histogram.keys().all(|d| matches!(d, 1 | 2 | 4))
    }
}

pub fn degree_census(g: &Graph) -> DegreeCensus {
    let mut histogram = BTreeMap::new();
    for d in g.degrees() {
        *histogram.entry(d).or_insert(0) += 1;
    }
    DegreeCensus {
        v4: histogram.get(&4).copied().unwrap_or(0),
        histogram,
        edge_count: g.edge_count(),
    }
}

/// A set of vertex-disjoint edges over `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    n: usize,
    edges: Vec<Edge>,
    #[serde(skip)]
    mate: Vec<Option<VertexId>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            n,
            edges: Vec::new(),
            mate: vec![None; n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut m = Matching::empty(n);
        for e in edges {
            m.insert(e)?;
        }
        Ok(m)
    }

    pub(crate) fn insert(&mut self, e: Edge) -> Result<()> {
        if e.u >= self.n || e.v >= self.n {
            return Err(Error::InvalidMatching(format!(
                "{e} out of range for n = {}",
                self.n
            )));
        }
        if e.u == e.v {
            return Err(Error::InvalidMatching(format!("{e} is a loop")));
        }
        for x in [e.u, e.v] {
            if self.mate[x].is_some() {
                return Err(Error::InvalidMatching(format!("vertex {x} covered twice")));
            }
        }
        self.mate[e.u] = Some(e.v);
        self.mate[e.v] = Some(e.u);
        self.edges.push(e);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate.get(v).copied().flatten()
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.mate(v).is_some()
    }

    /// Checks that every edge of the matching is an edge of `g` (as a
    /// multiset: one graph edge per matching edge).
    pub fn check_in(&self, g: &Graph) -> Result<()> {
        if self.n != g.n() {
            return Err(Error::InvalidMatching(format!(
                "matching over {} vertices, graph over {}",
                self.n,
                g.n()
            )));
        }
        let mut available: HashMap<((VertexId, VertexId), u64), usize> = HashMap::new();
        for e in g.edges() {
            *available.entry((e.key(), e.weight)).or_insert(0) += 1;
        }
        for e in &self.edges {
            match available.get_mut(&(e.key(), e.weight)) {
                Some(c) if *c > 0 => *c -= 1,
                _ => {
                    return Err(Error::InvalidMatching(format!(
                        "{e} is not an edge of the graph"
                    )))
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PathCoverViolation {
    #[error("vertex {vertex} has degree {degree}")]
    Degree { vertex: VertexId, degree: usize },
    #[error("cycle through vertices {0:?}")]
    Cycle(Vec<VertexId>),
    #[error("edge {index} has endpoint {vertex} outside 0..{n}")]
    OutOfRange {
        index: usize,
        vertex: VertexId,
        n: usize,
    },
    #[error("edge {index} is a loop at {vertex}")]
    Loop { index: usize, vertex: VertexId },
}

/// Vertex-disjoint simple paths, stored both as the edge set and as the
/// decomposition into ordered vertex lists.
///
/// Paths are listed by their smallest vertex and oriented from the endpoint
/// with the lower id. Isolated vertices are not listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathCover {
    n: usize,
    edges: Vec<Edge>,
    paths: Vec<Vec<VertexId>>,
}

impl PathCover {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, PathCoverViolation> {
        let paths = decompose_paths(n, &edges)?;
        Ok(PathCover { n, edges, paths })
    }

    pub fn empty(n: usize) -> Self {
        PathCover {
            n,
            edges: Vec::new(),
            paths: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn paths(&self) -> &[Vec<VertexId>] {
        &self.paths
    }

    /// Number of edges of every component path, in `paths()` order.
    pub fn path_lengths(&self) -> Vec<usize> {
        self.paths.iter().map(|p| p.len() - 1).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Interior vertices of some component path.
    pub fn middle_points(&self) -> Vec<bool> {
        self.degrees().into_iter().map(|d| d == 2).collect()
    }

    /// Vertices with degree 0 in the cover, in id order.
    pub fn uncovered(&self) -> Vec<VertexId> {
        self.degrees()
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d == 0)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Splits an edge set into vertex-disjoint simple paths, rejecting any vertex
/// of degree above two and any cycle (a pair of parallel edges included).
pub fn decompose_paths(n: usize, edges: &[Edge]) -> Result<Vec<Vec<VertexId>>, PathCoverViolation> {
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (index, e) in edges.iter().enumerate() {
        for vertex in [e.u, e.v] {
            if vertex >= n {
                return Err(PathCoverViolation::OutOfRange { index, vertex, n });
            }
        }
        if e.u == e.v {
            return Err(PathCoverViolation::Loop { index, vertex: e.u });
        }
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    if let Some((vertex, a)) = adj.iter().enumerate().find(|(_, a)| a.len() > 2) {
        return Err(PathCoverViolation::Degree {
            vertex,
            degree: a.len(),
        });
    }

    let mut visited = vec![false; n];
    let mut paths = Vec::new();
    // Walk from every degree-1 vertex; whatever stays unvisited afterwards
    // with positive degree lies on a cycle.
    for start in 0..n {
        if visited[start] || adj[start].len() != 1 {
            continue;
        }
        let mut path = vec![start];
        visited[start] = true;
        let mut prev = start;
        let mut cur = adj[start][0];
        loop {
            visited[cur] = true;
            path.push(cur);
            match adj[cur].iter().copied().find(|&x| x != prev) {
                Some(next) if adj[cur].len() == 2 => {
                    prev = cur;
                    cur = next;
                }
                _ => break,
            }
        }
        if path.last() < path.first() {
            path.reverse();
        }
        paths.push(path);
    }
    if let Some(start) = (0..n).find(|&v| !visited[v] && !adj[v].is_empty()) {
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = adj[start][0];
        while cur != start {
            cycle.push(cur);
            let next = if adj[cur][0] == prev {
                adj[cur][1]
            } else {
                adj[cur][0]
            };
            prev = cur;
            cur = next;
        }
        return Err(PathCoverViolation::Cycle(cycle));
    }
    paths.sort_by_key(|p| p.iter().copied().min());
    Ok(paths)
}

/// Edge weights of a complete graph on `n` vertices.
pub trait CostModel {
    fn n(&self) -> usize;
    fn weight(&self, u: VertexId, v: VertexId) -> u64;
}

/// A Hamiltonian cycle, stored as the visiting order starting anywhere; the
/// closing edge from the last vertex back to the first is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tour {
    order: Vec<VertexId>,
    cost: u64,
}

impl Tour {
    pub fn new(order: Vec<VertexId>, model: &impl CostModel) -> Result<Self> {
        let n = model.n();
        if order.len() != n {
            return Err(Error::InvalidTour(format!(
                "visits {} of {n} vertices",
                order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTour(format!(
                    "vertex {v} repeated or out of range"
                )));
            }
        }
        let cost = tour_cost(&order, model);
        Ok(Tour { order, cost })
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    /// Consecutive pairs including the closing pair.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }

    pub fn contains_pair(&self, u: VertexId, v: VertexId) -> bool {
        self.pairs()
            .any(|(a, b)| (a == u && b == v) || (a == v && b == u))
    }
}

pub(crate) fn tour_cost(order: &[VertexId], model: &impl CostModel) -> u64 {
    let n = order.len();
    (0..n)
        .map(|i| model.weight(order[i], order[(i + 1) % n]))
        .sum()
}
