//! Held-Karp exact tours and the checks that compare two oracles.

use serde::Serialize;

use crate::contraction::contract;
use crate::error::{Error, Result};
use crate::graph::{dedupe_parallel_max, CostModel, Matching, Tour};
use crate::matching::oracle_max_weight_matching;
use crate::path_cover::oracle_mpc;

use super::{MaxTspInstance, Tsp12Instance};

pub const TSP_ORACLE_MAX_VERTICES: usize = 15;
pub const IDENTITY_CHECK_MAX_VERTICES: usize = 12;
pub const CONTRACT_BOUND_MAX_VERTICES: usize = 9;

/// Minimum-cost tour `T*`.
pub fn oracle_tsp12(inst: &Tsp12Instance) -> Result<Tour> {
    held_karp(inst, false)
}

/// Maximum-weight tour `C*`.
pub fn oracle_maxtsp(inst: &MaxTspInstance) -> Result<Tour> {
    held_karp(inst, true)
}

/// `best[S][v]`: best path from vertex 0 through exactly `S ∪ {0}`, ending
/// at `v ∈ S`; vertex 0 itself is left out of the masks.
fn held_karp(model: &impl CostModel, maximize: bool) -> Result<Tour> {
    let n = model.n();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    if n > TSP_ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "tour oracle takes at most {TSP_ORACLE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let m = n - 1;
    let better = |a: u64, b: u64| if maximize { a > b } else { a < b };
    let unset = if maximize { 0 } else { u64::MAX };
    let mut best = vec![unset; (1 << m) * m];
    let mut parent = vec![u8::MAX; (1 << m) * m];
    for v in 0..m {
        best[(1 << v) * m + v] = model.weight(0, v + 1);
    }
    for mask in 1usize..(1 << m) {
        for v in 0..m {
            let cur = best[mask * m + v];
            if mask & (1 << v) == 0 || cur == unset {
                continue;
            }
            for u in 0..m {
                if mask & (1 << u) != 0 {
                    continue;
                }
                let next = mask | (1 << u);
                let cand = cur + model.weight(v + 1, u + 1);
                if best[next * m + u] == unset || better(cand, best[next * m + u]) {
                    best[next * m + u] = cand;
                    parent[next * m + u] = v as u8;
                }
            }
        }
    }
    let full = (1 << m) - 1;
    let last = (0..m)
        .reduce(|a, b| {
            let (ca, cb) = (
                best[full * m + a] + model.weight(a + 1, 0),
                best[full * m + b] + model.weight(b + 1, 0),
            );
            if better(cb, ca) {
                b
            } else {
                a
            }
        })
        .expect("n ≥ 3");
    let mut order = Vec::with_capacity(n);
    let (mut mask, mut v) = (full, last);
    loop {
        order.push(v + 1);
        let p = parent[mask * m + v];
        mask &= !(1 << v);
        if mask == 0 {
            break;
        }
        v = p as usize;
    }
    order.push(0);
    order.reverse();
    Tour::new(order, model)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityVerdict {
    pub t_star: u64,
    pub rho_star: usize,
    pub hamiltonian: bool,
    pub holds: bool,
}

/// Compares the optimum tour with the optimum path cover of `G1`: `T*`
/// must equal `2n − ρ* − 1` when `G1` is Hamiltonian and `2n − ρ*`
/// otherwise.
pub fn tsp12_optimum_identity_check(inst: &Tsp12Instance) -> Result<IdentityVerdict> {
    let n = inst.n();
    if n > IDENTITY_CHECK_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "identity check takes at most {IDENTITY_CHECK_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let t_star = oracle_tsp12(inst)?.cost();
    let (rho_star, _) = oracle_mpc(inst.g1())?;
    let hamiltonian = t_star == n as u64;
    let expected = 2 * n as u64 - rho_star as u64 - u64::from(hamiltonian);
    Ok(IdentityVerdict {
        t_star,
        rho_star,
        hamiltonian,
        holds: t_star == expected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractBoundVerdict {
    pub c_star: u64,
    pub matching_weight: u64,
    /// Maximum weight matching of the contraction, heaviest parallel copy
    /// kept.
    pub mu_w: u64,
    /// `6n·μ_w − (n·(w(C*) − w(m)) − 2·w(C*))`; the bound holds iff ≥ 0.
    pub slack: i128,
    pub holds: bool,
}

/// Checks `μ_w(G/m) ≥ (w(C*) − w(m))/6 − w(C*)/(3n)` in the integer form
/// `6n·μ_w ≥ n·(w(C*) − w(m)) − 2·w(C*)`.
pub fn contract_bound_check(inst: &MaxTspInstance, m: &Matching) -> Result<ContractBoundVerdict> {
    let n = inst.n();
    if n > CONTRACT_BOUND_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "contraction bound check takes at most {CONTRACT_BOUND_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let c_star = oracle_maxtsp(inst)?.cost();
    let contracted = contract(inst.graph(), m)?;
    let (mu_w, _) = oracle_max_weight_matching(&dedupe_parallel_max(&contracted.graph))?;
    let nn = n as i128;
    let slack =
        6 * nn * mu_w as i128 - (nn * (c_star as i128 - m.weight() as i128) - 2 * c_star as i128);
    Ok(ContractBoundVerdict {
        c_star,
        matching_weight: m.weight(),
        mu_w,
        slack,
        holds: slack >= 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Graph};
    use rand::{Rng, SeedableRng};

    fn complete(n: usize, mut w: impl FnMut(usize, usize) -> u64) -> MaxTspInstance {
        let mut t = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                t.push((u, v, w(u, v)));
            }
        }
        MaxTspInstance::new(Graph::weighted(n, &t).unwrap()).unwrap()
    }

    fn tsp12(n: usize, pairs: &[(usize, usize)]) -> Tsp12Instance {
        Tsp12Instance::new(Graph::unweighted(n, pairs).unwrap()).unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn examples() {
        let tri = complete(3, |u, v| (u + 2 * v) as u64);
        assert_eq!(oracle_maxtsp(&tri).unwrap().cost(), 2 + 4 + 5);
        assert_eq!(
            oracle_tsp12(&tsp12(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]))
                .unwrap()
                .cost(),
            4
        );
        assert_eq!(oracle_maxtsp(&complete(4, |_, _| 1)).unwrap().cost(), 4);
        assert!(matches!(
            oracle_tsp12(&tsp12(16, &[])),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn agrees_with_permutations() {
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(3..=7);
            let inst = complete(n, |_, _| rng.gen_range(1..=30));
            let perms = permutations(n);
            let costs = perms.iter().map(|p| crate::graph::tour_cost(p, &inst));
            let (lo, hi) = (costs.clone().min().unwrap(), costs.max().unwrap());
            assert_eq!(oracle_maxtsp(&inst).unwrap().cost(), hi);
            assert_eq!(held_karp(&inst, false).unwrap().cost(), lo);
        }
    }

    #[test]
    fn identity_examples() {
        let v = tsp12_optimum_identity_check(&tsp12(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]))
            .unwrap();
        assert_eq!(
            (v.t_star, v.rho_star, v.hamiltonian, v.holds),
            (5, 4, true, true)
        );
        let v = tsp12_optimum_identity_check(&tsp12(4, &[(0, 1)])).unwrap();
        assert_eq!((v.t_star, v.rho_star, v.holds), (7, 1, true));
        let v = tsp12_optimum_identity_check(&tsp12(4, &[(0, 1), (2, 3)])).unwrap();
        assert_eq!((v.t_star, v.rho_star, v.holds), (6, 2, true));
    }

    #[test]
    fn contract_bound_examples() {
        let k4 = complete(4, |_, _| 1);
        let v = contract_bound_check(&k4, &Matching::empty(4)).unwrap();
        assert_eq!((v.mu_w, v.c_star), (2, 4));
        assert!(v.holds);
        let m = Matching::from_edges(4, [Edge::new(0, 1)]).unwrap();
        assert!(contract_bound_check(&k4, &m).unwrap().holds);
    }
}
