use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use streampath::oracles::gen_fixture;
use streampath::stream::read_edge_list;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_streampath"));
    c.env_remove("STREAMPATH_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("streampath-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(name: &str, body: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn fixture_file(name: &str, file: &str) -> String {
    let p = scratch(file);
    let out = run(&["gen", "fixture", name, "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    p.to_str().unwrap().to_string()
}

#[test]
fn fixture_export_round_trips() {
    let path = fixture_file("tight-2/3", "tight-rt.el");
    assert_eq!(
        read_edge_list(&path).unwrap(),
        gen_fixture("tight-2/3").unwrap().graph
    );
}

#[test]
fn tight_example_reports_two_thirds() {
    let path = fixture_file("tight-2/3", "tight.el");
    let r = json(&run(&["mpc", &path, "--oracle", "--json"]));
    assert_eq!(r["output"], 4);
    assert_eq!(r["oracle"], 6);
    assert_eq!(r["ratio"], "2/3");
    assert_eq!(r["guarantee_holds"], true);
    assert!(r["passes_used"].as_u64().unwrap() <= 2 * r["pass_limit"].as_u64().unwrap());
}

#[test]
fn iterative_example_reports_three_quarters() {
    let path = fixture_file("alg4-3/4", "alg4.el");
    let r = json(&run(&["mpc", &path, "--iterative", "--oracle", "--json"]));
    assert_eq!(r["ratio"], "3/4");
    assert_eq!(r["paths"], serde_json::json!([[0, 2, 3, 1]]));
}

#[test]
fn reports_are_byte_identical() {
    let path = fixture_file("tight-2/3", "tight-det.el");
    let a = run(&["mpc", &path, "--oracle", "--json"]);
    let b = run(&["mpc", &path, "--oracle", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(!text.contains("elapsed_ms"));
    let timed = json(&run(&["mpc", &path, "--json", "--timing"]));
    assert!(timed["elapsed_ms"].is_u64());
    assert!(timed.get("ratio").is_none());
}

#[test]
fn tsp12_on_empty_graph() {
    let path = write("empty5.el", "5 0\n");
    let r = json(&run(&["tsp12", &path, "--oracle", "--json"]));
    assert_eq!(r["output"], 10);
    assert_eq!(r["ratio"], "1");
}

#[test]
fn maxtsp_random_instance_meets_guarantee() {
    let p = scratch("m8.el");
    let gen = run(&[
        "gen",
        "random",
        "maxtsp",
        "--n",
        "8",
        "--seed",
        "1",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let r = json(&run(&[
        "maxtsp",
        p.to_str().unwrap(),
        "--epsilon",
        "1/4",
        "--oracle",
        "--json",
    ]));
    assert_eq!(r["guarantee"], "47/128");
    assert_eq!(r["guarantee_holds"], true);
}

#[test]
fn exit_codes() {
    let tight = fixture_file("tight-2/3", "tight-exit.el");
    assert_eq!(
        run(&["mpc", &tight, "--budget", "10", "--strict"])
            .status
            .code(),
        Some(2)
    );
    let lax = json(&run(&["mpc", &tight, "--budget", "10", "--json"]));
    assert_eq!(lax["budget_exceeded"], true);

    let bad = write("bad.el", "3 2\n0 1\n1 x\n");
    let out = run(&["mpc", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(
        run(&["mpc", &tight, "--epsilon", "0.5"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["mpc", "/nonexistent/file.el"]).status.code(), Some(1));
    let incomplete = write("incomplete.el", "3 2 weighted\n0 1 4\n1 2 5\n");
    assert_eq!(run(&["maxtsp", &incomplete]).status.code(), Some(1));
    let small = write("two.el", "2 1\n0 1\n");
    assert_eq!(run(&["tsp12", &small]).status.code(), Some(1));
    assert_eq!(run(&["gen", "fixture", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn verify_suites_pass() {
    for suite in ["e-deg4", "ratio-2-3"] {
        let out = run(&["verify", "--suite", suite, "--trials", "500"]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).starts_with(&format!("{suite}: 500/500 pass")));
    }
    let all = json(&run(&[
        "verify", "--suite", "all", "--trials", "20", "--seed", "9", "--json",
    ]));
    assert_eq!(all.as_array().unwrap().len(), 10);
    assert!(all.as_array().unwrap().iter().all(|r| r["failed"] == 0));
}

#[test]
fn seed_comes_from_environment() {
    let gen = |seed: Option<&str>| {
        let mut c = bin();
        c.args(["gen", "random", "unweighted", "--n", "9"]);
        if let Some(s) = seed {
            c.env("STREAMPATH_SEED", s);
        }
        c.output().unwrap().stdout
    };
    assert_eq!(gen(Some("5")), gen(Some("5")));
    assert_ne!(gen(Some("5")), gen(Some("6")));
    assert_eq!(gen(None), gen(Some("1")));
    let explicit = run(&["gen", "random", "unweighted", "--n", "9", "--seed", "5"]).stdout;
    assert_eq!(explicit, gen(Some("5")));
}
