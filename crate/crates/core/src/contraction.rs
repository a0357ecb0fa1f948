//! Edge-set contraction `G/T`: the endpoints of every edge of `T` are merged
//! into one super-vertex and edges that end up inside a super-vertex are
//! dropped.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Edge, Graph, Matching, VertexId};

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false when `a` and `b` were already in one set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Original vertex -> super-vertex. Super-vertices are numbered densely in
/// order of their smallest member, and each keeps its member list (sorted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionMap {
    to_super: Vec<VertexId>,
    members: Vec<Vec<VertexId>>,
}

impl ContractionMap {
    pub fn identity(n: usize) -> Self {
        ContractionMap {
            to_super: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// Merges the endpoints of every edge in `edges`.
    pub fn from_edges<'a>(n: usize, edges: impl IntoIterator<Item = &'a Edge>) -> Self {
        let mut uf = UnionFind::new(n);
        for e in edges {
            uf.union(e.u, e.v);
        }
        let mut root_to_super = vec![usize::MAX; n];
        let mut members: Vec<Vec<VertexId>> = Vec::new();
        let to_super = (0..n)
            .map(|v| {
                let r = uf.find(v);
                if root_to_super[r] == usize::MAX {
                    root_to_super[r] = members.len();
                    members.push(Vec::new());
                }
                members[root_to_super[r]].push(v);
                root_to_super[r]
            })
            .collect();
        ContractionMap { to_super, members }
    }

    pub fn from_matching(m: &Matching) -> Self {
        Self::from_edges(m.n(), m.edges())
    }

    pub fn original_count(&self) -> usize {
        self.to_super.len()
    }

    pub fn super_count(&self) -> usize {
        self.members.len()
    }

    pub fn map(&self, v: VertexId) -> VertexId {
        self.to_super[v]
    }

    pub fn members(&self, s: VertexId) -> &[VertexId] {
        &self.members[s]
    }

    /// Image of an original edge, or `None` when both ends merge.
    pub fn map_edge(&self, e: &Edge) -> Option<Edge> {
        let (a, b) = (self.to_super[e.u], self.to_super[e.v]);
        (a != b).then_some(Edge::weighted(a, b, e.weight))
    }
}

/// Result of [`contract`]: the contracted graph, the vertex map, and for each
/// contracted edge the position of the original edge it came from.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    pub map: ContractionMap,
    pub origin: Vec<usize>,
}

/// Contracts `g` on the matching `m`.
///
/// Every edge of `g` whose endpoints are not merged reappears, in stream
/// order, with its endpoints relabelled; parallel edges are kept. Copies of a
/// matched edge would become loops and are dropped together with it.
pub fn contract(g: &Graph, m: &Matching) -> Result<Contraction> {
    m.check_in(g)?;
    Ok(contract_on(g, ContractionMap::from_matching(m)))
}

/// Contracts `g` on an arbitrary vertex partition.
pub fn contract_on(g: &Graph, map: ContractionMap) -> Contraction {
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if let Some(f) = map.map_edge(e) {
            edges.push(f);
            origin.push(i);
        }
    }
    let graph = Graph::new(map.super_count(), edges, g.is_weighted())
        .expect("contraction of a valid graph is valid");
    Contraction { graph, map, origin }
}
