//! Seeded property sweeps. Each trial derives its own seed from the suite
//! seed and its index, so trials can run in any order or in parallel.

use num_rational::Ratio;
use rand::{Rng, RngCore};
use serde::Serialize;

use super::{
    check_e_deg4, gen_deg124, gen_random_graph, gen_random_maxtsp, gen_random_tsp12,
    gen_random_weighted, random_matching, rng,
};
use crate::contraction::contract;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, PathCover, Tour};
use crate::matching::{
    oracle_max_matching, oracle_max_weight_matching, streaming_max_matching,
    streaming_max_weight_matching, ApproxParams,
};
use crate::path_cover::{algorithm1_mpc, algorithm4_iterative, has_short_components, oracle_mpc};
use crate::stream::{default_budget, EdgeStreamSource, StreamSession};
use crate::tsp::{
    algorithm2_tsp12, algorithm3_maxtsp, contract_bound_check, extract_matching_from_cycle,
    extract_matching_from_path_or_cycle, oracle_maxtsp, oracle_tsp12, tsp12_optimum_identity_check,
};

pub const SUITES: [&str; 10] = [
    "ratio-2-3",
    "e-deg4",
    "mu-rho-m",
    "sandwich",
    "tsp12",
    "maxtsp",
    "cycle-matching",
    "contract-bound",
    "alg1-validity",
    "stream-accounting",
];

#[derive(Clone, Debug, Serialize)]
pub struct TrialOutcome {
    pub id: usize,
    pub seed: u64,
    pub passed: bool,
    /// Smallest margin among the trial's integer inequalities; negative
    /// means a violation.
    pub slack: i128,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// The trial with the smallest slack.
    pub worst: Option<TrialOutcome>,
    pub failures: Vec<TrialOutcome>,
}

impl SuiteReport {
    pub fn from_outcomes(suite: &str, seed: u64, mut outcomes: Vec<TrialOutcome>) -> Self {
        outcomes.sort_by_key(|o| o.id);
        let passed = outcomes.iter().filter(|o| o.passed).count();
        let worst = outcomes.iter().min_by_key(|o| (o.slack, o.id)).cloned();
        let failures: Vec<_> = outcomes.iter().filter(|o| !o.passed).cloned().collect();
        SuiteReport {
            suite: suite.to_string(),
            seed,
            trials: outcomes.len(),
            passed,
            failed: failures.len(),
            worst,
            failures,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Runs trials `0..trials` of `suite` in order.
pub fn run_suite(suite: &str, seed: u64, trials: usize) -> Result<SuiteReport> {
    let outcomes = (0..trials)
        .map(|id| run_trial(suite, seed, id))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::from_outcomes(suite, seed, outcomes))
}

/// Runs one trial. Errors only on an unknown suite name; failures inside
/// the trial are reported in the outcome.
pub fn run_trial(suite: &str, seed: u64, id: usize) -> Result<TrialOutcome> {
    let trial: fn(&mut Trial) -> Result<()> = match suite {
        "ratio-2-3" => ratio_2_3,
        "e-deg4" => e_deg4,
        "mu-rho-m" => mu_rho_m,
        "sandwich" => sandwich,
        "tsp12" => tsp12,
        "maxtsp" => maxtsp,
        "cycle-matching" => cycle_matching,
        "contract-bound" => contract_bound,
        "alg1-validity" => alg1_validity,
        "stream-accounting" => stream_accounting,
        _ => {
            return Err(Error::InvalidInstance(format!(
                "unknown suite {suite:?}; expected one of {SUITES:?}"
            )))
        }
    };
    let trial_seed = rng(seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)).next_u64();
    let mut t = Trial {
        id,
        rng: rng(trial_seed),
        slack: None,
        notes: Vec::new(),
    };
    let result = trial(&mut t);
    let mut detail = t.notes.join(" ");
    let (passed, slack) = match result {
        Ok(()) => {
            let slack = t.slack.unwrap_or(0);
            (slack >= 0, slack)
        }
        Err(e) => {
            detail = format!("{detail} error: {e}").trim().to_string();
            (false, t.slack.unwrap_or(0).min(-1))
        }
    };
    Ok(TrialOutcome {
        id,
        seed: trial_seed,
        passed,
        slack,
        detail,
    })
}

struct Trial {
    id: usize,
    rng: rand_xoshiro::SplitMix64,
    slack: Option<i128>,
    notes: Vec<String>,
}

impl Trial {
    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    /// Records `lhs ≥ rhs` as a margin.
    fn at_least(&mut self, what: &str, lhs: i128, rhs: i128) {
        let m = lhs - rhs;
        if m < 0 {
            self.notes.push(format!("violated {what}: {lhs} < {rhs}"));
        }
        self.slack = Some(self.slack.map_or(m, |s| s.min(m)));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.at_least(what, i128::from(ok), 1);
    }

    fn epsilon(&self) -> ApproxParams {
        ApproxParams::from_k(2 + self.id % 3).expect("k ≥ 1")
    }

    fn graph(&mut self, n_lo: usize, n_hi: usize) -> Graph {
        let n = self.rng.gen_range(n_lo..=n_hi);
        let p = self.rng.gen_range(0.15..=0.85);
        let g = gen_random_graph(n, p, self.rng.next_u64());
        self.note(format!("n={n} m={}", g.edge_count()));
        g
    }
}

fn eps_parts(params: &ApproxParams) -> (i128, i128) {
    let e: Ratio<i64> = params.epsilon();
    (*e.numer() as i128, *e.denom() as i128)
}

fn run_alg1(g: &Graph, params: &ApproxParams) -> Result<crate::path_cover::MpcResult> {
    let src = EdgeStreamSource::from_graph(g.clone());
    let mut s = StreamSession::open(&src, default_budget(g.n(), params.k(), false, 1));
    algorithm1_mpc(&mut s, params)
}

/// `3·|M1 ∪ M2| ≥ 2·(1−ε)·ρ`.
fn ratio_2_3(t: &mut Trial) -> Result<()> {
    let g = t.graph(2, 10);
    let params = t.epsilon();
    let (p, q) = eps_parts(&params);
    let out = run_alg1(&g, &params)?.cover.len() as i128;
    let (rho, _) = oracle_mpc(&g)?;
    t.note(format!("eps={} out={out} rho={rho}", params.epsilon()));
    t.at_least(
        "3q·out ≥ 2(q−p)·rho",
        3 * q * out,
        2 * (q - p) * rho as i128,
    );
    Ok(())
}

/// `3·μ ≥ |E| − |V4|` on degree-{1,2,4} multigraphs.
fn e_deg4(t: &mut Trial) -> Result<()> {
    let n = t.rng.gen_range(2..=12);
    let g = gen_deg124(n, t.rng.next_u64())?;
    let v = check_e_deg4(&g)?;
    t.note(format!("n={n} m={} mu={} v4={}", v.edges, v.mu, v.v4));
    t.at_least(
        "3mu ≥ |E| − |V4|",
        3 * v.mu as i128,
        v.edges as i128 - v.v4 as i128,
    );
    Ok(())
}

/// `3·μ(G/M) ≥ ρ(G) − |M|` for a random matching `M`.
fn mu_rho_m(t: &mut Trial) -> Result<()> {
    let g = t.graph(2, 10);
    let m = random_matching(&g, &mut t.rng);
    let (mu, _) = oracle_max_matching(&contract(&g, &m)?.graph)?;
    let (rho, _) = oracle_mpc(&g)?;
    t.note(format!("|M|={} mu(G/M)={mu} rho={rho}", m.len()));
    t.at_least(
        "3mu(G/M) ≥ rho − |M|",
        3 * mu as i128,
        rho as i128 - m.len() as i128,
    );
    Ok(())
}

/// `ρ ≥ μ ≥ ρ/2`, and the streaming matching alone reaches `(1−ε)·ρ/2`.
fn sandwich(t: &mut Trial) -> Result<()> {
    let g = t.graph(2, 10);
    let params = t.epsilon();
    let (p, q) = eps_parts(&params);
    let (mu, _) = oracle_max_matching(&g)?;
    let (rho, _) = oracle_mpc(&g)?;
    let src = EdgeStreamSource::from_graph(g.clone());
    let mut s = StreamSession::open(&src, u64::MAX);
    let m1 = streaming_max_matching(&mut s, &params, None)?
        .matching
        .len() as i128;
    t.note(format!(
        "eps={} mu={mu} rho={rho} m1={m1}",
        params.epsilon()
    ));
    let (mu, rho) = (mu as i128, rho as i128);
    t.at_least("rho ≥ mu", rho, mu);
    t.at_least("2mu ≥ rho", 2 * mu, rho);
    t.at_least("2q·|M1| ≥ (q−p)·rho", 2 * q * m1, (q - p) * rho);
    Ok(())
}

/// `cost ≤ (4/3 + ε + 1/n)·T*`, the optimum identity, and `cost ≤ 2n − |P̃|`.
fn tsp12(t: &mut Trial) -> Result<()> {
    let n = t.rng.gen_range(3..=10);
    let p_edge = t.rng.gen_range(0.1..=0.9);
    let inst = gen_random_tsp12(n, p_edge, t.rng.next_u64());
    let params = ApproxParams::from_k(3)?;
    let (p, q) = eps_parts(&params);
    let src = EdgeStreamSource::from_graph(inst.g1().clone());
    let mut s = StreamSession::open(&src, default_budget(n, params.k(), false, 1));
    let run = algorithm2_tsp12(&inst, &params, &mut s)?;
    let t_star = oracle_tsp12(&inst)?.cost() as i128;
    let cost = run.tour.cost() as i128;
    let identity = tsp12_optimum_identity_check(&inst)?;
    t.note(format!(
        "n={n} m={} cost={cost} T*={t_star} cover={}",
        inst.g1().edge_count(),
        run.mpc.cover.len()
    ));
    let nn = n as i128;
    t.at_least(
        "(4nq + 3np + 3q)·T* ≥ 3nq·cost",
        (4 * nn * q + 3 * nn * p + 3 * q) * t_star,
        3 * nn * q * cost,
    );
    t.at_least("2n − |P| ≥ cost", run.cost_upper_bound() as i128, cost);
    t.holds("T* = 2n − rho* (− 1 iff Hamiltonian)", identity.holds);
    Ok(())
}

/// `12n·w(tour) ≥ (7n − 9)·(1−ε)·w(C*)`.
fn maxtsp(t: &mut Trial) -> Result<()> {
    let n = t.rng.gen_range(4..=9);
    let inst = gen_random_maxtsp(n, 20, t.rng.next_u64())?;
    let params = ApproxParams::from_k(4)?;
    let (p, q) = eps_parts(&params);
    let g = inst.graph();
    let src = EdgeStreamSource::from_graph(g.clone());
    let mut s = StreamSession::open(&src, default_budget(n, params.k(), true, g.max_weight()));
    let w = algorithm3_maxtsp(&inst, &params, &mut s)?.tour.cost() as i128;
    let c_star = oracle_maxtsp(&inst)?.cost() as i128;
    let nn = n as i128;
    t.note(format!("n={n} w={w} C*={c_star}"));
    t.at_least(
        "12nq·w ≥ (7n−9)(q−p)·C*",
        12 * nn * q * w,
        (7 * nn - 9) * (q - p) * c_star,
    );
    Ok(())
}

/// Matchings inside a random cycle, a random path and a parallel pair.
fn cycle_matching(t: &mut Trial) -> Result<()> {
    let r = &mut t.rng;
    let k = r.gen_range(3..=12);
    let mut labels: Vec<usize> = (0..k).collect();
    rand::seq::SliceRandom::shuffle(&mut labels[..], r);
    let mut cycle: Vec<Edge> = (0..k)
        .map(|i| Edge::weighted(labels[i], labels[(i + 1) % k], r.gen_range(1..=100)))
        .collect();
    cycle.rotate_left(r.gen_range(0..k));
    let path_len = r.gen_range(1..=12);
    let path: Vec<Edge> = (0..path_len)
        .map(|i| Edge::weighted(i, i + 1, r.gen_range(1..=100)))
        .collect();
    let pair = [
        Edge::weighted(0, 1, r.gen_range(1..=100)),
        Edge::weighted(1, 0, r.gen_range(1..=100)),
    ];

    let total = |es: &[Edge]| es.iter().map(|e| e.weight as i128).sum::<i128>();
    let wc = total(&cycle);
    let m = extract_matching_from_cycle(k, &cycle)?;
    t.note(format!("k={k} w(C)={wc} w(M)={}", m.weight()));
    t.at_least(
        "2k·w(M) ≥ (k−1)·w(C)",
        2 * k as i128 * m.weight() as i128,
        (k as i128 - 1) * wc,
    );
    t.holds("M ⊆ C", m.edges().iter().all(|e| cycle.contains(e)));
    let m = extract_matching_from_path_or_cycle(k, &cycle)?;
    t.at_least("3w(M) ≥ w(cycle)", 3 * m.weight() as i128, wc);
    let m = extract_matching_from_path_or_cycle(path_len + 1, &path)?;
    t.at_least("2w(M) ≥ w(path)", 2 * m.weight() as i128, total(&path));
    let m = extract_matching_from_path_or_cycle(2, &pair)?;
    t.at_least("3w(M) ≥ w(pair)", 3 * m.weight() as i128, total(&pair));
    Ok(())
}

/// `6n·μ_w(G/M) ≥ n·(w(C*) − w(M)) − 2·w(C*)`, with `M` random or a
/// maximum weight matching.
fn contract_bound(t: &mut Trial) -> Result<()> {
    let n = t.rng.gen_range(4..=9);
    let inst = gen_random_maxtsp(n, 20, t.rng.next_u64())?;
    let m = if t.id.is_multiple_of(4) {
        oracle_max_weight_matching(inst.graph())?.1
    } else {
        random_matching(inst.graph(), &mut t.rng)
    };
    let v = contract_bound_check(&inst, &m)?;
    t.note(format!(
        "n={n} w(M)={} mu_w={} C*={}",
        v.matching_weight, v.mu_w, v.c_star
    ));
    t.at_least("6n·mu_w ≥ n(C* − w(M)) − 2C*", v.slack, 0);
    Ok(())
}

fn tour_covers(tour: &Tour, cover: &PathCover, n: usize) -> bool {
    let mut seen = vec![false; n];
    tour.order().len() == n
        && tour
            .order()
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v], true))
        && cover.edges().iter().all(|e| tour.contains_pair(e.u, e.v))
}

/// Output shapes: short paths from the two-phase algorithm, monotone valid
/// covers from the iterative one, and tours through every vertex.
fn alg1_validity(t: &mut Trial) -> Result<()> {
    let g = t.graph(2, 12);
    let n = g.n();
    let params = t.epsilon();
    let run = run_alg1(&g, &params)?;
    t.holds(
        "components of length 1..=3",
        has_short_components(&run.cover),
    );
    t.holds(
        "|cover| = |M1| + |M2|",
        run.cover.len() == run.m1.len() + run.m2.len(),
    );
    t.holds(
        "cover ⊆ G",
        run.cover.edges().iter().all(|e| g.position_of(e).is_some()),
    );

    let src = EdgeStreamSource::from_graph(g.clone());
    let mut s = StreamSession::open(&src, default_budget(n, params.k(), false, 1));
    let it = algorithm4_iterative(&mut s, &params)?;
    t.holds(
        "iterative sizes monotone",
        it.sizes.windows(2).all(|w| w[0] <= w[1]),
    );
    t.holds("iterations ≤ n", it.iterations() <= n.max(1));
    t.at_least(
        "iterative ≥ two-phase",
        it.cover.len() as i128,
        run.cover.len() as i128,
    );
    t.note(format!(
        "eps={} two-phase={} iterative={}",
        params.epsilon(),
        run.cover.len(),
        it.cover.len()
    ));

    if n >= 3 {
        let inst = crate::tsp::Tsp12Instance::new(g.clone())?;
        let mut s = StreamSession::open(&src, default_budget(n, params.k(), false, 1));
        let r = algorithm2_tsp12(&inst, &params, &mut s)?;
        t.holds(
            "(1,2) tour is Hamiltonian and keeps the cover",
            tour_covers(&r.tour, &r.mpc.cover, n),
        );
        let inst = gen_random_maxtsp(n, 50, t.rng.next_u64())?;
        let src = EdgeStreamSource::from_graph(inst.graph().clone());
        let mut s = StreamSession::open(&src, u64::MAX);
        let r = algorithm3_maxtsp(&inst, &params, &mut s)?;
        t.holds(
            "max tour is Hamiltonian and keeps the cover",
            tour_covers(&r.tour, &r.cover, n),
        );
    }
    Ok(())
}

/// Strict-budget runs on larger streams: every engine run within the pass
/// limit, and the peak within the default word budget.
fn stream_accounting(t: &mut Trial) -> Result<()> {
    let params = t.epsilon();
    let limit = params.pass_limit();
    let mode = t.id % 3;
    let (g, passes) = match mode {
        0 => {
            let n = t.rng.gen_range(10..=60);
            let g = gen_random_graph(n, t.rng.gen_range(0.05..=0.5), t.rng.next_u64());
            let src = EdgeStreamSource::from_graph(g.clone());
            let mut s = StreamSession::open_strict(&src, default_budget(n, params.k(), false, 1));
            let r = algorithm1_mpc(&mut s, &params)?;
            check_report(t, &r.report);
            (g, r.phase_passes.to_vec())
        }
        1 => {
            let n = t.rng.gen_range(10..=60);
            let g = gen_random_weighted(n, t.rng.gen_range(0.05..=0.5), 1000, t.rng.next_u64());
            let src = EdgeStreamSource::from_graph(g.clone());
            let budget = default_budget(n, params.k(), true, g.max_weight());
            let mut s = StreamSession::open_strict(&src, budget);
            let first = streaming_max_weight_matching(&mut s, &params, None)?.passes;
            check_report(t, &s.report());
            let mut s = StreamSession::open_strict(&src, budget);
            let it = algorithm4_iterative(&mut s, &params)?;
            check_report(t, &it.report);
            (g, std::iter::once(first).chain(it.passes).collect())
        }
        _ => {
            let n = t.rng.gen_range(4..=30);
            let inst = gen_random_maxtsp(n, 1_000_000, t.rng.next_u64())?;
            let g = inst.graph().clone();
            let src = EdgeStreamSource::from_graph(g.clone());
            let mut s = StreamSession::open_strict(
                &src,
                default_budget(n, params.k(), true, g.max_weight()),
            );
            let r = algorithm3_maxtsp(&inst, &params, &mut s)?;
            check_report(t, &r.report);
            (g, r.phase_passes.to_vec())
        }
    };
    let worst = passes.iter().copied().max().unwrap_or(0);
    t.note(format!(
        "mode={mode} n={} m={} eps={} passes={passes:?}",
        g.n(),
        g.edge_count(),
        params.epsilon()
    ));
    t.at_least(
        "pass limit ≥ passes per engine run",
        limit as i128,
        worst as i128,
    );
    Ok(())
}

fn check_report(t: &mut Trial, r: &crate::stream::StreamReport) {
    t.at_least(
        "budget ≥ peak words",
        r.words_budget as i128,
        r.words_peak as i128,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_runs_a_few_trials() {
        for suite in SUITES {
            let r = run_suite(suite, 1, 6).unwrap();
            assert_eq!(r.trials, 6);
            assert!(r.all_passed(), "{suite}: {:?}", r.failures);
        }
        assert!(run_suite("nope", 1, 1).is_err());
    }

    #[test]
    fn trials_are_reproducible() {
        let a = run_trial("ratio-2-3", 42, 7).unwrap();
        let b = run_trial("ratio-2-3", 42, 7).unwrap();
        assert_eq!((a.seed, a.slack, a.detail), (b.seed, b.slack, b.detail));
    }
}
