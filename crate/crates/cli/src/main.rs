use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hodgewitt::cohomology::{cohomology_basis, CohClass, ComplexSpec, DegreeWindow};
use hodgewitt::filtration::{fil_condition, fil_membership, modulus_sections, FilQuery, FilVariant, ModulusChart};
use hodgewitt::pushforward::FiniteCover;
use hodgewitt::suites::{run_suite, timestamp, RunConfig, Suite, R_GRID, SCHEMA};
use hodgewitt::witt::beta;
use hodgewitt::{Error, LaurentPoly, LogForm, Modulus, RatExponent, VarRoster};

#[derive(Parser, Debug)]
#[command(name = "hodgewitt", version, about = "Log de Rham complexes over Z/p^n, Witt vectors and ramification filtrations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Residue characteristic (default 2; required by `filtration`).
    #[arg(long = "p", env = "HODGEWITT_P", global = true)]
    p: Option<u64>,
    /// Truncation level of the Witt vectors, coefficients in Z/p^n.
    #[arg(long = "n", env = "HODGEWITT_N", global = true, default_value_t = 2)]
    n: u32,
    /// Working precision N >= n for lifts.
    #[arg(long, env = "HODGEWITT_PRECISION", global = true, default_value_t = 4)]
    precision: u32,
    /// Variable roster, e.g. `t:log, s:plain`.
    #[arg(long, env = "HODGEWITT_VARS", global = true, default_value = "t:log, s:plain")]
    vars: String,
    /// Multidegree window `LO:HI`, or one `LO:HI` per variable separated by commas.
    #[arg(long, env = "HODGEWITT_WINDOW", global = true, default_value = "-8:8", allow_hyphen_values = true)]
    window: String,
    #[arg(long, env = "HODGEWITT_SEED", global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "HODGEWITT_TRIALS", global = true, default_value_t = 100)]
    trials: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, env = "HODGEWITT_JOBS", global = true)]
    jobs: Option<usize>,
    /// Write the output to a file instead of stdout.
    #[arg(long, env = "HODGEWITT_OUT", global = true)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generators of a filtration step on the chart with divisor `{t = 0}`.
    Filtration {
        /// Cohomological degree.
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// `Fil` or `Fil'`.
        #[arg(long, default_value = "Fil")]
        variant: String,
    },
    /// Runs a verification suite and prints a JSON report.
    Verify { suite: String },
    /// The Illusie-Raynaud map on a closed function.
    Beta {
        #[arg(long)]
        input: String,
    },
    /// Pushes a form forward along a cover `t = u * t'^e`.
    Trace {
        #[arg(long)]
        cover: String,
        #[arg(long)]
        form: String,
    },
}

/// Failures mapped to exit codes: usage and parse errors exit 2.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn roster(g: &Global) -> Result<VarRoster, Failure> {
    Ok(VarRoster::parse(&g.vars)?)
}

fn config(g: &Global) -> Result<RunConfig, Failure> {
    let r = roster(g)?;
    let w = DegreeWindow::parse(&r, &g.window)?;
    Ok(RunConfig::new(g.p.unwrap_or(2), g.n, g.precision, r, w, g.seed, g.trials)?)
}

fn emit(g: &Global, text: &str) -> Result<(), Failure> {
    match &g.out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_filtration(g: &Global, i: usize, r: &str, variant: &str) -> Result<(), Failure> {
    let p = g.p.ok_or_else(|| Failure::Usage("filtration needs --p".into()))?;
    let r: RatExponent = r.parse()?;
    if r.is_negative() {
        return Err(Failure::Usage(format!("r = {r} is negative")));
    }
    let variant: FilVariant = variant.parse()?;
    let roster = roster(g)?;
    let window = DegreeWindow::parse(&roster, &g.window)?;
    let t = roster.log_indices().next().ok_or_else(|| Failure::Usage(format!("[{roster}] has no log variable")))?;
    let t = roster.name(t).to_string();
    let laurent = ComplexSpec::laurent(&roster, p, g.n)?;
    let step = laurent.clone().with_condition(&t, fil_condition(variant, &r, p)?)?;
    let mut out = json!({
        "schema": SCHEMA,
        "chart": { "vars": roster.to_string(), "divisor": t, "p": p, "n": g.n, "degree": i },
        "r": r.to_string(),
        "variant": variant.to_string(),
    });
    // Fil_r with r > 0 is the group of modulus sections for the divisor r {t = 0}.
    let generators = if variant == FilVariant::Plain && !r.is_zero() {
        let chart = ModulusChart::new(&roster, &[(t.as_str(), r)], p, g.n, i)?;
        let s = modulus_sections(&chart, &window)?;
        out["collapse"] = json!(s.collapse);
        s.classes
    } else {
        cohomology_basis(&step, i, &window)?
    };
    let mut memberships = Vec::new();
    let mut gens = Vec::new();
    for c in &generators {
        let class = CohClass::new(&laurent, c.representative())?;
        let mut row = serde_json::Map::new();
        for v in [FilVariant::Prime, FilVariant::Plain] {
            let mut least = Value::Null;
            for s in R_GRID {
                let q = FilQuery { class: class.clone(), var: t.clone(), r: s.parse()?, variant: v };
                if fil_membership(&q, &window)? {
                    least = json!(s);
                    break;
                }
            }
            row.insert(format!("least {v} index"), least);
        }
        gens.push(json!(c.representative().to_string()));
        memberships.push(Value::Object(row));
    }
    out["generators"] = Value::Array(gens);
    out["memberships"] = Value::Array(memberships);
    out["timestamp"] = json!(timestamp());
    emit(g, &serde_json::to_string_pretty(&out).expect("serializable"))
}

fn cmd_verify(g: &Global, suite: &str) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let cfg = config(g)?;
    let rep = run_suite(suite, &cfg)?;
    emit(g, &rep.to_json())?;
    if rep.pass() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} of {} cases failed", rep.failures, rep.cases)))
    }
}

fn cmd_beta(g: &Global, input: &str) -> Result<(), Failure> {
    let roster = roster(g)?;
    let m = Modulus::new(g.p.unwrap_or(2), g.precision.max(2 * g.n))?;
    let b = LaurentPoly::parse(input, &roster, m)?;
    emit(g, &beta(&b, g.n)?.to_string())
}

fn cmd_trace(g: &Global, cover: &str, form: &str) -> Result<(), Failure> {
    let roster = roster(g)?;
    let m = Modulus::new(g.p.unwrap_or(2), g.n)?;
    let f = FiniteCover::parse(cover, &roster, m)?;
    let w = LogForm::parse(form, f.source(), m)?;
    emit(g, &f.pushforward(&w)?.to_string())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {j} workers: {e}")))?;
    }
    match &cli.command {
        Command::Filtration { i, r, variant } => cmd_filtration(g, *i, r, variant),
        Command::Verify { suite } => cmd_verify(g, suite),
        Command::Beta { input } => cmd_beta(g, input),
        Command::Trace { cover, form } => cmd_trace(g, cover, form),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
