//! Acceptance criteria, one line each. Exits non-zero if any criterion
//! fails or overruns its time limit.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use streampath::graph::PathCover;
use streampath::matching::ApproxParams;
use streampath::oracles::{gen_fixture, run_suite, Fixture, SuiteReport};
use streampath::path_cover::oracle_mpc;

const SEED: u64 = 2024;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    check: fn() -> Result<String, String>,
}

fn fixture_ratio(
    name: &str,
    expect_output: usize,
    expect_rho: usize,
    expect_ratio: &str,
) -> Result<String, String> {
    let f: Fixture = gen_fixture(name).map_err(|e| e.to_string())?;
    let params = ApproxParams::from_k(3).map_err(|e| e.to_string())?;
    let cover: PathCover = f.run(&params).map_err(|e| e.to_string())?;
    let (rho, _) = oracle_mpc(&f.graph).map_err(|e| e.to_string())?;
    let ratio = Ratio::new(cover.len() as i64, rho as i64).to_string();
    let summary = format!("output {} edges, optimum {rho}, ratio {ratio}", cover.len());
    let single_path =
        f.algorithm == streampath::oracles::FixtureAlgorithm::TwoPhase || cover.paths().len() == 1;
    if cover.len() == expect_output && rho == expect_rho && ratio == expect_ratio && single_path {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn suite(name: &str, trials: usize) -> Result<String, String> {
    let r: SuiteReport = run_suite(name, SEED, trials).map_err(|e| e.to_string())?;
    let worst = r.worst.as_ref().map_or(String::new(), |w| {
        format!(", worst slack {} ({})", w.slack, w.detail)
    });
    let summary = format!("{}/{} pass{worst}", r.passed, r.trials);
    if r.all_passed() {
        Ok(summary)
    } else {
        let first = &r.failures[0];
        Err(format!(
            "{summary}; first failure #{} seed {}: {}",
            first.id, first.seed, first.detail
        ))
    }
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "tight example",
            limit: Duration::from_secs(1),
            check: || fixture_ratio("tight-2/3", 4, 6, "2/3"),
        },
        Criterion {
            id: 2,
            name: "iterative example",
            limit: Duration::from_secs(1),
            check: || fixture_ratio("alg4-3/4", 3, 4, "3/4"),
        },
        Criterion {
            id: 3,
            name: "ratio 2/3 sweep",
            limit: Duration::from_secs(60),
            check: || suite("ratio-2-3", 500),
        },
        Criterion {
            id: 4,
            name: "degree-{1,2,4} matching bound",
            limit: Duration::from_secs(60),
            check: || suite("e-deg4", 500),
        },
        Criterion {
            id: 5,
            name: "contracted matching vs path cover",
            limit: Duration::from_secs(120),
            check: || suite("mu-rho-m", 500),
        },
        Criterion {
            id: 6,
            name: "(1,2)-TSP bound and optimum identity",
            limit: Duration::from_secs(120),
            check: || suite("tsp12", 300),
        },
        Criterion {
            id: 7,
            name: "Max-TSP bound",
            limit: Duration::from_secs(180),
            check: || suite("maxtsp", 300),
        },
        Criterion {
            id: 8,
            name: "cycle and path matchings",
            limit: Duration::from_secs(120),
            check: || suite("cycle-matching", 1000),
        },
        Criterion {
            id: 9,
            name: "contraction weight bound",
            limit: Duration::from_secs(120),
            check: || suite("contract-bound", 500),
        },
        Criterion {
            id: 10,
            name: "output validity",
            limit: Duration::from_secs(120),
            check: || suite("alg1-validity", 500),
        },
        Criterion {
            id: 11,
            name: "stream accounting (strict budget)",
            limit: Duration::from_secs(120),
            check: || suite("stream-accounting", 300),
        },
        Criterion {
            id: 12,
            name: "matching/path-cover sandwich",
            limit: Duration::from_secs(120),
            check: || suite("sandwich", 500),
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let (ok, msg) = match result {
            Ok(m) if elapsed <= c.limit => (true, m),
            Ok(m) => (
                false,
                format!("{m}; took {elapsed:.2?}, limit {:?}", c.limit),
            ),
            Err(m) => (false, m),
        };
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {}: {msg} [{elapsed:.2?}]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
