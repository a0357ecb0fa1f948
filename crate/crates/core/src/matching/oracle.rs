//! Exact maximum (weight) matching by dynamic programming over vertex
//! subsets: `best(S)` is the optimum on the vertices not yet in `S`, found by
//! taking the lowest undecided vertex and either leaving it exposed or
//! pairing it with an undecided neighbour.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Matching};

pub const MATCHING_ORACLE_MAX_VERTICES: usize = 20;

/// Maximum matching size `μ(g)` and a witness.
pub fn oracle_max_matching(g: &Graph) -> Result<(usize, Matching)> {
    let m = solve(g, |_| 1)?;
    Ok((m.len(), m))
}

/// Maximum matching weight and a witness.
pub fn oracle_max_weight_matching(g: &Graph) -> Result<(u64, Matching)> {
    let m = solve(g, |e| e.weight)?;
    Ok((m.weight(), m))
}

fn solve(g: &Graph, value: impl Fn(&Edge) -> u64) -> Result<Matching> {
    let n = g.n();
    if n > MATCHING_ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "matching oracle takes at most {MATCHING_ORACLE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    // Heaviest edge per vertex pair, earliest on ties.
    let mut best: Vec<Option<(u64, usize)>> = vec![None; n * n];
    for (i, e) in g.edges().iter().enumerate() {
        let w = value(e);
        for idx in [e.u * n + e.v, e.v * n + e.u] {
            match best[idx] {
                Some((bw, _)) if bw >= w => {}
                _ => best[idx] = Some((w, i)),
            }
        }
    }

    let full = (1usize << n) - 1;
    let mut table = vec![0u64; 1 << n];
    // Fill from the full set downwards; table[full] = 0.
    for mask in (0..full).rev() {
        let i = (!mask).trailing_zeros() as usize;
        let with_i = mask | (1 << i);
        let mut v = table[with_i];
        for j in (i + 1)..n {
            if mask & (1 << j) == 0 {
                if let Some((w, _)) = best[i * n + j] {
                    v = v.max(w + table[with_i | (1 << j)]);
                }
            }
        }
        table[mask] = v;
    }

    let mut edges = Vec::new();
    let mut mask = 0usize;
    while mask != full {
        let i = (!mask).trailing_zeros() as usize;
        let with_i = mask | (1 << i);
        let target = table[mask];
        if table[with_i] == target {
            mask = with_i;
            continue;
        }
        let j = ((i + 1)..n)
            .find(|&j| {
                mask & (1 << j) == 0
                    && matches!(best[i * n + j], Some((w, _)) if w + table[with_i | (1 << j)] == target)
            })
            .expect("dp table is consistent");
        edges.push(g.edges()[best[i * n + j].unwrap().1]);
        mask = with_i | (1 << j);
    }
    Matching::from_edges(n, edges)
}

/// Whether `g` has an augmenting path for `m` with at most `max_len` edges,
/// by exhaustive search over simple alternating paths.
pub fn has_short_augmenting_path(g: &Graph, m: &Matching, max_len: usize) -> bool {
    let n = g.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    fn dfs(
        x: usize,
        len: usize,
        max_len: usize,
        adj: &[Vec<usize>],
        m: &Matching,
        on_path: &mut [bool],
    ) -> bool {
        // x is the current tip, reached by a matched edge (or the free root);
        // the next edge must be unmatched.
        for &y in &adj[x] {
            if on_path[y] || m.mate(x) == Some(y) || len + 1 > max_len {
                continue;
            }
            match m.mate(y) {
                None => return true,
                Some(z) if !on_path[z] && len + 2 < max_len => {
                    on_path[y] = true;
                    on_path[z] = true;
                    let found = dfs(z, len + 2, max_len, adj, m, on_path);
                    on_path[y] = false;
                    on_path[z] = false;
                    if found {
                        return true;
                    }
                }
                _ => {}
            }
        }
        false
    }
    let mut on_path = vec![false; n];
    (0..n).filter(|&r| !m.is_matched(r)).any(|r| {
        on_path[r] = true;
        let found = dfs(r, 0, max_len, &adj, m, &mut on_path);
        on_path[r] = false;
        found
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent brute force: every subset of edges.
    fn brute(g: &Graph) -> (usize, u64) {
        let m = g.edge_count();
        let (mut size, mut weight) = (0, 0);
        for mask in 0u32..(1 << m) {
            let mut used = vec![false; g.n()];
            let mut ok = true;
            let (mut s, mut w) = (0, 0);
            for (i, e) in g.edges().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    if used[e.u] || used[e.v] {
                        ok = false;
                        break;
                    }
                    used[e.u] = true;
                    used[e.v] = true;
                    s += 1;
                    w += e.weight;
                }
            }
            if ok {
                size = size.max(s);
                weight = weight.max(w);
            }
        }
        (size, weight)
    }

    #[test]
    fn small_examples() {
        assert_eq!(oracle_max_matching(&Graph::empty(0)).unwrap().0, 0);
        assert_eq!(oracle_max_matching(&Graph::empty(5)).unwrap().0, 0);
        let pm = Graph::unweighted(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(oracle_max_matching(&pm).unwrap().0, 3);

        let tri = Graph::weighted(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 10)]).unwrap();
        assert_eq!(oracle_max_weight_matching(&tri).unwrap().0, 10);
        let star = Graph::weighted(4, &[(0, 1, 2), (0, 2, 3), (0, 3, 4)]).unwrap();
        assert_eq!(oracle_max_weight_matching(&star).unwrap().0, 4);
        let c4 = Graph::weighted(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 0, 4)]).unwrap();
        let (w, m) = oracle_max_weight_matching(&c4).unwrap();
        assert_eq!(w, 6);
        m.check_in(&c4).unwrap();
    }

    #[test]
    fn agrees_with_subset_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let mut edges = Vec::new();
            for _ in 0..rng.gen_range(0..=12) {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    edges.push((u, v, rng.gen_range(1..=9)));
                }
            }
            let g = Graph::weighted(n, &edges).unwrap();
            let (size, m1) = oracle_max_matching(&g).unwrap();
            let (weight, m2) = oracle_max_weight_matching(&g).unwrap();
            assert_eq!((size, weight), brute(&g));
            m1.check_in(&g).unwrap();
            m2.check_in(&g).unwrap();
        }
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            oracle_max_matching(&Graph::empty(21)),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn augmenting_path_search() {
        let p4 = Graph::unweighted(4, &[(1, 2), (0, 1), (2, 3)]).unwrap();
        let m = Matching::from_edges(4, [Edge::new(1, 2)]).unwrap();
        assert!(!has_short_augmenting_path(&p4, &m, 1));
        assert!(has_short_augmenting_path(&p4, &m, 3));
        let full = Matching::from_edges(4, [Edge::new(0, 1), Edge::new(2, 3)]).unwrap();
        assert!(!has_short_augmenting_path(&p4, &full, 7));
    }
}
