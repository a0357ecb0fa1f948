//! `streampath`: run the streaming path-cover and TSP algorithms on
//! edge-list files, check them against exact oracles, generate instances,
//! and run the property suites.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 memory budget overrun
//! under `--strict`, 3 a checked guarantee was violated.

mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use streampath::graph::{CostModel, Graph};
use streampath::matching::ApproxParams;
use streampath::oracles::{self, run_trial, SuiteReport, SUITES};
use streampath::path_cover::{algorithm1_mpc, algorithm4_iterative, oracle_mpc};
use streampath::stream::{default_budget, write_edge_list, EdgeStreamSource, StreamSession};
use streampath::tsp::{
    algorithm2_tsp12, algorithm3_maxtsp, oracle_maxtsp, oracle_tsp12, MaxTspInstance, Tsp12Instance,
};
use streampath::Error;

use report::{Guarantee, RunReport};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "streampath",
    version,
    about = "Semi-streaming path cover and TSP approximations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate maximum path cover of an edge-list file.
    Mpc {
        #[command(flatten)]
        run: RunArgs,
        /// Keep matching on the contracted remainder until nothing is added.
        #[arg(long)]
        iterative: bool,
    },
    /// (1,2)-TSP tour; the file lists the distance-1 pairs.
    Tsp12 {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Max-TSP tour; the file lists every pair with its weight.
    Maxtsp {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write an instance file.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Run a property suite and report pass/fail counts.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        /// Defaults to $STREAMPATH_SEED, then 1.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Approximation parameter as a fraction, e.g. 1/3.
    #[arg(long, default_value = "1/3")]
    epsilon: String,
    /// Word budget; defaults to 64·n·k (times ⌈log2(W+1)⌉ when weighted).
    #[arg(long)]
    budget: Option<u64>,
    /// Abort as soon as the budget is exceeded.
    #[arg(long)]
    strict: bool,
    /// Compare with the exact optimum (small instances only).
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// A worked example in its adversarial stream order.
    Fixture {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A seeded random instance.
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        #[arg(long)]
        n: usize,
        /// Edge probability (ignored for maxtsp).
        #[arg(long, default_value_t = 0.4)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        max_weight: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A multigraph with every degree in {1, 2, 4}.
    Deg124 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Unweighted,
    Weighted,
    Tsp12,
    Maxtsp,
}

enum Failure {
    Input(String),
    Budget(String),
    Violated(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Violated(m)) => {
            eprintln!("guarantee violated: {m}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Mpc { run, iterative } => run_mpc(&run, iterative),
        Command::Tsp12 { run } => run_tsp12(&run),
        Command::Maxtsp { run } => run_maxtsp(&run),
        Command::Gen { what } => generate(what),
        Command::Verify {
            suite,
            seed,
            trials,
            json,
        } => verify(&suite, seed_or_env(seed)?, trials, json),
    }
}

fn seed_or_env(seed: Option<u64>) -> Result<u64, Failure> {
    match (seed, std::env::var("STREAMPATH_SEED")) {
        (Some(s), _) => Ok(s),
        (None, Ok(v)) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("STREAMPATH_SEED={v:?} is not a u64"))),
        (None, Err(_)) => Ok(DEFAULT_SEED),
    }
}

/// Everything a run command needs before the algorithm starts.
struct Prepared {
    params: ApproxParams,
    source: EdgeStreamSource,
    budget: u64,
    started: Instant,
}

fn prepare(args: &RunArgs) -> Result<Prepared, Failure> {
    let started = Instant::now();
    let params: ApproxParams = args.epsilon.parse()?;
    let source = EdgeStreamSource::from_file(&args.file)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.file.display())))?;
    let budget = args.budget.unwrap_or_else(|| {
        default_budget(
            source.n(),
            params.k(),
            source.is_weighted(),
            source.max_weight(),
        )
    });
    Ok(Prepared {
        params,
        source,
        budget,
        started,
    })
}

impl Prepared {
    fn session(&self, strict: bool) -> StreamSession<'_> {
        if strict {
            StreamSession::open_strict(&self.source, self.budget)
        } else {
            StreamSession::open(&self.source, self.budget)
        }
    }

    fn report(
        &self,
        args: &RunArgs,
        algorithm: &'static str,
        objective: &'static str,
        output: u64,
    ) -> RunReport {
        RunReport {
            algorithm,
            instance: args.file.display().to_string(),
            n: self.source.n(),
            edges: self.source.edge_count(),
            epsilon: self.params.epsilon().to_string(),
            k: self.params.k(),
            objective,
            output,
            paths: None,
            tour: None,
            oracle: None,
            ratio: None,
            guarantee: None,
            guarantee_holds: None,
            engine_passes: Vec::new(),
            pass_limit: self.params.pass_limit(),
            passes_used: 0,
            words_peak: 0,
            words_budget: self.budget,
            budget_exceeded: false,
            elapsed_ms: None,
        }
    }
}

fn finish(mut report: RunReport, args: &RunArgs, started: Instant) -> Result<(), Failure> {
    if args.timing {
        report.elapsed_ms = Some(started.elapsed().as_millis());
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    match report.guarantee_holds {
        Some(false) => Err(Failure::Violated(format!(
            "ratio {} against guarantee {}",
            report.ratio.unwrap_or_default(),
            report.guarantee.unwrap_or_default()
        ))),
        _ => Ok(()),
    }
}

fn run_mpc(args: &RunArgs, iterative: bool) -> Result<(), Failure> {
    let prep = prepare(args)?;
    let mut session = prep.session(args.strict);
    let (cover, engine_passes, stream, algorithm) = if iterative {
        let r = algorithm4_iterative(&mut session, &prep.params)?;
        (r.cover, r.passes, r.report, "mpc-iterative")
    } else {
        let r = algorithm1_mpc(&mut session, &prep.params)?;
        (r.cover, r.phase_passes.to_vec(), r.report, "mpc")
    };
    let mut report = prep.report(args, algorithm, "edges", cover.len() as u64);
    report.paths = Some(cover.paths().to_vec());
    fill_stream(&mut report, engine_passes, &stream);
    if args.oracle {
        let (rho, _) = oracle_mpc(&prep.source.to_graph()?)?;
        Guarantee::PathCover.apply(&mut report, &prep.params, rho as u64);
    }
    finish(report, args, prep.started)
}

fn run_tsp12(args: &RunArgs) -> Result<(), Failure> {
    let prep = prepare(args)?;
    let inst = Tsp12Instance::new(prep.source.to_graph()?)?;
    let mut session = prep.session(args.strict);
    let run = algorithm2_tsp12(&inst, &prep.params, &mut session)?;
    let mut report = prep.report(args, "tsp12", "cost", run.tour.cost());
    report.tour = Some(run.tour.order().to_vec());
    fill_stream(&mut report, run.mpc.phase_passes.to_vec(), &run.mpc.report);
    if args.oracle {
        let t_star = oracle_tsp12(&inst)?.cost();
        Guarantee::Tsp12.apply(&mut report, &prep.params, t_star);
    }
    finish(report, args, prep.started)
}

fn run_maxtsp(args: &RunArgs) -> Result<(), Failure> {
    let prep = prepare(args)?;
    let inst = MaxTspInstance::new(prep.source.to_graph()?)?;
    let mut session = prep.session(args.strict);
    let run = algorithm3_maxtsp(&inst, &prep.params, &mut session)?;
    let mut report = prep.report(args, "maxtsp", "weight", run.tour.cost());
    report.tour = Some(run.tour.order().to_vec());
    fill_stream(&mut report, run.phase_passes.to_vec(), &run.report);
    if args.oracle {
        let c_star = oracle_maxtsp(&inst)?.cost();
        Guarantee::MaxTsp.apply(&mut report, &prep.params, c_star);
    }
    debug_assert_eq!(
        run.tour.cost(),
        run.tour
            .pairs()
            .map(|(u, v)| inst.weight(u, v))
            .sum::<u64>()
    );
    finish(report, args, prep.started)
}

fn fill_stream(
    report: &mut RunReport,
    engine_passes: Vec<usize>,
    stream: &streampath::stream::StreamReport,
) {
    report.engine_passes = engine_passes;
    report.passes_used = stream.passes_used;
    report.words_peak = stream.words_peak;
    report.words_budget = stream.words_budget;
    report.budget_exceeded = stream.budget_exceeded;
}

fn generate(what: GenCommand) -> Result<(), Failure> {
    let (graph, out) = match what {
        GenCommand::Fixture { name, out } => (oracles::gen_fixture(&name)?.graph, out),
        GenCommand::Random {
            kind,
            n,
            p,
            max_weight,
            seed,
            out,
        } => {
            let seed = seed_or_env(seed)?;
            if max_weight == 0 {
                return Err(Failure::Input("--max-weight must be positive".into()));
            }
            let g = match kind {
                RandomKind::Unweighted => oracles::gen_random_graph(n, p, seed),
                RandomKind::Weighted => oracles::gen_random_weighted(n, p, max_weight, seed),
                RandomKind::Tsp12 => oracles::gen_random_tsp12(n, p, seed).g1().clone(),
                RandomKind::Maxtsp => oracles::gen_random_maxtsp(n, max_weight, seed)?
                    .graph()
                    .clone(),
            };
            (g, out)
        }
        GenCommand::Deg124 { n, seed, out } => (oracles::gen_deg124(n, seed_or_env(seed)?)?, out),
    };
    write_graph(&graph, out.as_deref())
}

fn write_graph(g: &Graph, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_edge_list(g, &mut w)?;
            w.flush()?;
        }
        None => write_edge_list(g, &mut io::stdout().lock())?,
    }
    Ok(())
}

fn verify(suite: &str, seed: u64, trials: usize, json: bool) -> Result<(), Failure> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    if let Some(bad) = names.iter().find(|s| !SUITES.contains(s)) {
        return Err(Failure::Input(format!(
            "unknown suite {bad:?}; expected `all` or one of {}",
            SUITES.join(", ")
        )));
    }
    let mut reports = Vec::new();
    for name in names {
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|id| run_trial(name, seed, id))
            .collect::<Result<Vec<_>, _>>()?;
        reports.push(SuiteReport::from_outcomes(name, seed, outcomes));
    }
    if json {
        let value = serde_json::to_value(&reports).expect("reports serialize");
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("value prints")
        );
    } else {
        for r in &reports {
            println!(
                "{}: {}/{} pass (seed {})",
                r.suite, r.passed, r.trials, r.seed
            );
            if let Some(w) = &r.worst {
                println!(
                    "  worst slack {} at trial {} (seed {}): {}",
                    w.slack, w.id, w.seed, w.detail
                );
            }
            for f in &r.failures {
                println!("  FAIL trial {} (seed {}): {}", f.id, f.seed, f.detail);
            }
        }
    }
    let failed: usize = reports.iter().map(|r| r.failed).sum();
    if failed > 0 {
        return Err(Failure::Violated(format!("{failed} trial(s) failed")));
    }
    Ok(())
}
