use crate::contraction::ContractionMap;
use crate::graph::{Edge, Matching, VertexId};

/// Presents a stream as if it had been contracted on a prior edge set,
/// without materializing the contracted graph.
///
/// An arriving edge `(x, y)` is dropped when both ends lie in the same
/// super-vertex (this covers the contracted edges themselves) or when either
/// end is forbidden; otherwise it is seen as an edge between the two
/// super-vertices, keeping its weight.
#[derive(Clone, Debug)]
pub struct ContractionView {
    map: ContractionMap,
    forbidden: Vec<bool>,
}

impl ContractionView {
    pub fn new(map: ContractionMap) -> Self {
        let n = map.original_count();
        ContractionView {
            map,
            forbidden: vec![false; n],
        }
    }

    pub fn from_matching(m: &Matching) -> Self {
        Self::new(ContractionMap::from_matching(m))
    }

    /// Additionally drops every edge touching a vertex flagged in `forbidden`.
    pub fn with_forbidden(mut self, forbidden: Vec<bool>) -> Self {
        assert_eq!(forbidden.len(), self.map.original_count());
        self.forbidden = forbidden;
        self
    }

    pub fn map(&self) -> &ContractionMap {
        &self.map
    }

    pub fn super_count(&self) -> usize {
        self.map.super_count()
    }

    pub fn is_forbidden(&self, v: VertexId) -> bool {
        self.forbidden[v]
    }

    pub fn view_edge(&self, e: &Edge) -> Option<(VertexId, VertexId)> {
        if self.forbidden[e.u] || self.forbidden[e.v] {
            return None;
        }
        let (a, b) = (self.map.map(e.u), self.map.map(e.v));
        (a != b).then_some((a, b))
    }

    /// True when `m` (over original vertices) is a matching of the viewed
    /// graph: every edge survives the view and no super-vertex is used twice.
    pub fn is_view_matching(&self, m: &Matching) -> bool {
        let mut used = vec![false; self.super_count()];
        m.edges().iter().all(|e| match self.view_edge(e) {
            Some((a, b)) => {
                !std::mem::replace(&mut used[a], true) && !std::mem::replace(&mut used[b], true)
            }
            None => false,
        })
    }
}
