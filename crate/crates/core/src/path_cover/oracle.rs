//! Exact maximum path cover.
//!
//! `ρ(G) = n − (fewest vertex-disjoint paths covering every vertex)`, where
//! single vertices count as paths. `ends[S]` holds the vertices at which a
//! Hamiltonian path of the induced subgraph on `S` can end; a second table
//! partitions the vertex set into the fewest such subsets.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, PathCover};

pub const MPC_ORACLE_MAX_VERTICES: usize = 14;

/// `ρ(g)` and a maximum path cover attaining it.
pub fn oracle_mpc(g: &Graph) -> Result<(usize, PathCover)> {
    let n = g.n();
    if n > MPC_ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "path-cover oracle takes at most {MPC_ORACLE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok((0, PathCover::empty(0)));
    }
    let mut adj = vec![0u32; n];
    let mut first_edge = vec![None; n * n];
    for (i, e) in g.edges().iter().enumerate() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
        for idx in [e.u * n + e.v, e.v * n + e.u] {
            first_edge[idx].get_or_insert(i);
        }
    }

    let full = (1u32 << n) - 1;
    let mut ends = vec![0u32; 1 << n];
    for mask in 1..=full {
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            let rest = mask & !(1 << v);
            if rest == 0 || ends[rest as usize] & adj[v as usize] != 0 {
                ends[mask as usize] |= 1 << v;
            }
        }
    }

    // fewest[S]: fewest paths partitioning S; choice[S]: the part holding
    // the lowest vertex of S.
    let mut fewest = vec![u8::MAX; 1 << n];
    let mut choice = vec![0u32; 1 << n];
    fewest[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let part = sub | low;
            if ends[part as usize] != 0 {
                let c = fewest[(mask ^ part) as usize].saturating_add(1);
                if c < fewest[mask as usize] {
                    fewest[mask as usize] = c;
                    choice[mask as usize] = part;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let mut edges = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let part = choice[mask as usize];
        // Walk a Hamiltonian path of `part` backwards from its lowest end.
        let mut cur = ends[part as usize].trailing_zeros();
        let mut remaining = part;
        loop {
            remaining &= !(1 << cur);
            if remaining == 0 {
                break;
            }
            let prev = (ends[remaining as usize] & adj[cur as usize]).trailing_zeros();
            let idx = first_edge[cur as usize * n + prev as usize]
                .expect("adjacent vertices share an edge");
            edges.push(g.edges()[idx]);
            cur = prev;
        }
        mask ^= part;
    }
    let rho = n - fewest[full as usize] as usize;
    debug_assert_eq!(rho, edges.len());
    let cover: Vec<Edge> = edges;
    Ok((
        rho,
        PathCover::new(n, cover).expect("oracle builds disjoint paths"),
    ))
}
