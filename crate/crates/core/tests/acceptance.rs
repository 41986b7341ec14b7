//! End-to-end acceptance run: one line per criterion.

use std::time::Instant;

use hodgewitt::suites::{run_suite, RunConfig, Suite};
use hodgewitt::cohomology::DegreeWindow;
use hodgewitt::VarRoster;

struct Outcome {
    pass: bool,
    detail: String,
}

fn config(p: u64, n: u32, vars: &str, lo: i32, hi: i32, seed: u64, trials: u64) -> RunConfig {
    let roster = VarRoster::parse(vars).unwrap();
    let window = DegreeWindow::uniform(&roster, lo, hi).unwrap();
    RunConfig::new(p, n, 2 * n + 1, roster, window, seed, trials).unwrap()
}

/// Runs a suite over several configurations and folds the results.
fn sweep(suite: Suite, configs: &[RunConfig]) -> Outcome {
    let mut cases = 0;
    let mut failures = Vec::new();
    for cfg in configs {
        match run_suite(suite, cfg) {
            Ok(rep) => {
                cases += rep.cases;
                for c in rep.checks.iter().filter(|c| !c.pass) {
                    failures.push(format!(
                        "[p={} n={} vars={}] {}: {}",
                        cfg.p,
                        cfg.n,
                        cfg.roster,
                        c.name,
                        c.counterexample.clone().unwrap_or_default()
                    ));
                }
            }
            Err(e) => failures.push(format!("[p={} n={}] setup error: {e}", cfg.p, cfg.n)),
        }
    }
    let detail = match failures.first() {
        None => format!("{cases} cases"),
        Some(f) => format!("{} of {cases} cases failed, first: {f}", failures.len()),
    };
    Outcome { pass: failures.is_empty(), detail }
}

fn grid(vars: &[&str], ps: &[u64], ns: &[u32], lo: i32, hi: i32, trials: u64) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for v in vars {
        for &p in ps {
            for &n in ns {
                out.push(config(p, n, v, lo, hi, 1000 + p * 10 + n as u64, trials));
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let cfg = config(3, 2, "t:log, s:plain", -6, 6, 42, 20);
    for suite in [Suite::WittEquiv, Suite::LiftIndep, Suite::Ceiling, Suite::Homotopy] {
        let a = run_suite(suite, &cfg).unwrap();
        let b = run_suite(suite, &cfg).unwrap();
        if a.deterministic_json() != b.deterministic_json() {
            return Outcome { pass: false, detail: format!("{suite} reports differ") };
        }
    }
    Outcome { pass: true, detail: "4 suites reproduced byte for byte".into() }
}

#[test]
fn acceptance() {
    let one_two = ["t:log", "t:log, s:plain", "t:log, u:log"];
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("homotopy identity and acyclicity", Box::new(move || sweep(Suite::Homotopy, &grid(&one_two, &[2, 3], &[1, 2], -12, 12, 1)))),
        ("pole-step injectivity", Box::new(move || sweep(Suite::Injectivity, &grid(&one_two, &[2, 3], &[1, 2], -12, 12, 1)))),
        ("dlog criterion for t*Omega(log)", Box::new(move || sweep(Suite::Lemma42, &grid(&one_two, &[2, 3], &[1, 2], -4, 4, 200)))),
        ("pushforward pole bounds", Box::new(|| sweep(Suite::Lemma43, &grid(&["t:log, s:plain"], &[2, 3], &[1, 2], -8, 8, 1)))),
        ("ceiling identity", Box::new(|| sweep(Suite::Ceiling, &grid(&["t:log"], &[2], &[1], 0, 0, 10_000)))),
        ("trace compatibility of Fil' and Fil", Box::new(|| sweep(Suite::TraceFil, &grid(&["t:log, s:plain"], &[2, 3], &[2], -8, 8, 1)))),
        ("Cartier correspondence at n = 1", Box::new(move || sweep(Suite::Cartier, &grid(&["t:log, s:plain", "t:log, u:log"], &[2, 3], &[1], -9, 9, 1)))),
        ("Witt vector equivalence in degree 0", Box::new(|| sweep(Suite::WittEquiv, &grid(&["t:log, s:plain"], &[2, 3], &[1, 2, 3], -9, 9, 200)))),
        ("lift independence and projection formula", Box::new(|| sweep(Suite::LiftIndep, &grid(&["t:log, s:plain"], &[2, 3], &[1, 2], -6, 6, 50)))),
        ("modulus sections and graded certificates", Box::new(move || sweep(Suite::Exactseq, &grid(&one_two, &[2, 3], &[1, 2], -8, 8, 1)))),
        ("deterministic reports", Box::new(determinism)),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        all &= out.pass;
        println!(
            "criterion {:>2} {:<45} {} ({:.1}s) {}",
            k + 1,
            name,
            if out.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    assert!(all, "some acceptance criteria failed");
}
