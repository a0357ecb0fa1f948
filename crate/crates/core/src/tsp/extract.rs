//! Matchings of large weight inside a single path or cycle.

use crate::error::{Error, Result};
use crate::graph::{decompose_paths, Edge, Matching};

/// Drops a minimum-weight edge of the cycle (earliest along the cycle on
/// ties) and returns the heavier of the two alternating matchings of the
/// remaining path. The result weighs at least `(k−1)/(2k)` of the cycle.
///
/// `cycle` lists the edges of one simple cycle on `k ≥ 3` vertices, in any
/// order; the walk starts with `cycle[0]`.
pub fn extract_matching_from_cycle(n: usize, cycle: &[Edge]) -> Result<Matching> {
    let ordered = cycle_order(n, cycle)?;
    let drop = (0..ordered.len())
        .min_by_key(|&i| (ordered[i].weight, i))
        .expect("cycle is non-empty");
    let path: Vec<Edge> = ordered[drop + 1..]
        .iter()
        .chain(&ordered[..drop])
        .copied()
        .collect();
    heavier_alternation(n, &path)
}

/// A matching inside a simple path (at least half its weight), a simple
/// cycle (via [`extract_matching_from_cycle`]), or a pair of parallel edges
/// (the heavier one). Edges may come in any order.
pub fn extract_matching_from_path_or_cycle(n: usize, edges: &[Edge]) -> Result<Matching> {
    if let [a, b] = edges {
        if a.key() == b.key() {
            return Matching::from_edges(n, [if b.weight > a.weight { *b } else { *a }]);
        }
    }
    match decompose_paths(n, edges) {
        Ok(paths) if paths.len() <= 1 => {
            let Some(path) = paths.first() else {
                return Ok(Matching::empty(n));
            };
            let ordered: Vec<Edge> = path
                .windows(2)
                .map(|w| {
                    *edges
                        .iter()
                        .find(|e| e.key() == (w[0].min(w[1]), w[0].max(w[1])))
                        .expect("path edge")
                })
                .collect();
            heavier_alternation(n, &ordered)
        }
        Ok(_) => Err(malformed("more than one path")),
        Err(_) => extract_matching_from_cycle(n, edges),
    }
}

fn heavier_alternation(n: usize, path: &[Edge]) -> Result<Matching> {
    let pick = |parity: usize| path.iter().skip(parity).step_by(2).copied();
    let (even, odd): (u64, u64) = (
        pick(0).map(|e| e.weight).sum(),
        pick(1).map(|e| e.weight).sum(),
    );
    Matching::from_edges(n, pick(usize::from(odd > even)))
}

/// The cycle's edges in walking order starting with `edges[0]`.
fn cycle_order(n: usize, edges: &[Edge]) -> Result<Vec<Edge>> {
    let k = edges.len();
    if k < 3 {
        return Err(malformed("a cycle needs at least 3 edges"));
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if e.u >= n || e.v >= n || e.u == e.v {
            return Err(malformed(&format!("edge {i} is a loop or out of range")));
        }
        incident[e.u].push(i);
        incident[e.v].push(i);
    }
    if let Some(v) = (0..n).find(|&v| !incident[v].is_empty() && incident[v].len() != 2) {
        return Err(malformed(&format!(
            "vertex {v} has degree {}",
            incident[v].len()
        )));
    }
    let mut ordered = vec![edges[0]];
    let (mut prev, mut cur) = (0, edges[0].v);
    while cur != edges[0].u {
        let next = *incident[cur]
            .iter()
            .find(|&&i| i != prev)
            .expect("degree two");
        ordered.push(edges[next]);
        cur = edges[next].other(cur);
        prev = next;
    }
    if ordered.len() != k {
        return Err(malformed("edges form more than one cycle"));
    }
    Ok(ordered)
}

fn malformed(what: &str) -> Error {
    Error::InvalidInstance(format!("not a path or cycle: {what}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cycle(weights: &[u64]) -> Vec<Edge> {
        let k = weights.len();
        (0..k)
            .map(|i| Edge::weighted(i, (i + 1) % k, weights[i]))
            .collect()
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(
            extract_matching_from_cycle(4, &cycle(&[1, 2, 3, 4]))
                .unwrap()
                .weight(),
            6
        );
        assert_eq!(
            extract_matching_from_cycle(3, &cycle(&[1, 1, 1]))
                .unwrap()
                .weight(),
            1
        );
        for k in 3..10 {
            let m = extract_matching_from_cycle(k, &cycle(&vec![1; k])).unwrap();
            assert_eq!(m.len(), k / 2);
            assert!(2 * k as u64 * m.weight() >= (k as u64 - 1) * k as u64);
        }
    }

    #[test]
    fn path_and_pair_examples() {
        let path = [
            Edge::weighted(1, 2, 1),
            Edge::weighted(0, 1, 5),
            Edge::weighted(2, 3, 5),
        ];
        assert_eq!(
            extract_matching_from_path_or_cycle(4, &path)
                .unwrap()
                .weight(),
            10
        );
        let pair = [Edge::weighted(0, 1, 3), Edge::weighted(1, 0, 7)];
        assert_eq!(
            extract_matching_from_path_or_cycle(2, &pair)
                .unwrap()
                .weight(),
            7
        );
        assert_eq!(
            extract_matching_from_path_or_cycle(3, &cycle(&[1, 1, 10]))
                .unwrap()
                .weight(),
            10
        );
        assert!(extract_matching_from_path_or_cycle(3, &[])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn rejects_malformed() {
        let star = [Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3)];
        assert!(extract_matching_from_path_or_cycle(4, &star).is_err());
        let two = [Edge::new(0, 1), Edge::new(2, 3)];
        assert!(extract_matching_from_path_or_cycle(4, &two).is_err());
        let mut triangles = cycle(&[1, 1, 1]);
        triangles.extend([Edge::new(3, 4), Edge::new(4, 5), Edge::new(5, 3)]);
        assert!(extract_matching_from_cycle(6, &triangles).is_err());
        assert!(extract_matching_from_cycle(4, &[Edge::new(0, 1), Edge::new(1, 2)]).is_err());
    }

    #[test]
    fn random_cycles_meet_bounds() {
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(5);
        for _ in 0..500 {
            let k = rng.gen_range(3..=12);
            let w: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=50)).collect();
            let c = cycle(&w);
            let total: u64 = w.iter().sum();
            let m = extract_matching_from_cycle(k, &c).unwrap();
            assert!(2 * k as u64 * m.weight() >= (k as u64 - 1) * total, "{w:?}");
            assert!(m.edges().iter().all(|e| c.contains(e)));
            let path = &c[..k - 1];
            let m = extract_matching_from_path_or_cycle(k, path).unwrap();
            assert!(2 * m.weight() >= path.iter().map(|e| e.weight).sum::<u64>());
        }
    }
}
