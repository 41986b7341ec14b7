//! Verification suites with reproducible JSON reports.
//!
//! Every suite expands its configuration and seed into a list of cases on a
//! single thread, evaluates the cases in parallel and assembles the report in
//! case order, so the output depends only on the configuration.

use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartier::verify_fil_correspondence;
use crate::cohomology::{
    induced_map, pole_step_sequence, verify_exact_sequence, verify_homotopy, ChainMap, CohClass, ComplexSpec,
    DegreeWindow, PoleCondition,
};
use crate::error::{Error, Result};
use crate::filtration::{membership_two_sided, modulus_sections, verify_trace_inclusion, witt_equivalence, FilVariant, ModulusChart};
use crate::forms::{LogForm, PoleVector, Subset};
use crate::laurent::{LaurentPoly, VarRoster};
use crate::pushforward::{check_lift_independence, verify_integral_bound, verify_ramified_bound, FiniteCover};
use crate::ring::{ceil_identity, Modulus, RatExponent};
use crate::witt::beta;

pub const SCHEMA: u32 = 1;

/// The `r` grid shared by the filtration suites.
pub const R_GRID: [&str; 7] = ["0", "1/2", "1", "3/2", "2", "5/2", "3"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Homotopy,
    Injectivity,
    Cartier,
    WittEquiv,
    TraceFil,
    LiftIndep,
    Lemma42,
    Lemma43,
    Ceiling,
    Exactseq,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Homotopy,
        Suite::Injectivity,
        Suite::Cartier,
        Suite::WittEquiv,
        Suite::TraceFil,
        Suite::LiftIndep,
        Suite::Lemma42,
        Suite::Lemma43,
        Suite::Ceiling,
        Suite::Exactseq,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Homotopy => "homotopy",
            Suite::Injectivity => "injectivity",
            Suite::Cartier => "cartier",
            Suite::WittEquiv => "witt-equiv",
            Suite::TraceFil => "trace-fil",
            Suite::LiftIndep => "lift-indep",
            Suite::Lemma42 => "lemma42",
            Suite::Lemma43 => "lemma43",
            Suite::Ceiling => "ceiling",
            Suite::Exactseq => "exactseq",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Parse(format!("unknown suite '{s}', expected one of {}", names.join(", ")))
        })
    }
}

/// Parameters shared by all suites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub n: u32,
    /// Working precision `N >= n`, used where lifts are needed.
    pub precision: u32,
    pub roster: VarRoster,
    #[serde(serialize_with = "display")]
    pub window: DegreeWindow,
    pub seed: u64,
    pub trials: u64,
}

impl RunConfig {
    pub fn new(
        p: u64,
        n: u32,
        precision: u32,
        roster: VarRoster,
        window: DegreeWindow,
        seed: u64,
        trials: u64,
    ) -> Result<Self> {
        Modulus::new(p, precision)?;
        Modulus::new(p, n)?;
        if precision < n {
            return Err(Error::InvalidArgument(format!("precision {precision} is below n = {n}")));
        }
        if roster.log_indices().next().is_none() {
            return Err(Error::InvalidArgument(format!("[{roster}] has no log variable")));
        }
        if window.bounds().len() != roster.len() {
            return Err(Error::DimensionMismatch { expected: roster.len(), got: window.bounds().len() });
        }
        Ok(RunConfig { p, n, precision, roster, window, seed, trials })
    }

    /// Same window bounds on the roster with variable `i` renamed.
    fn window_on(&self, r: &VarRoster) -> DegreeWindow {
        DegreeWindow::new(r, self.window.bounds().to_vec()).expect("same shape")
    }

    fn window_without(&self, i: usize) -> DegreeWindow {
        let r = self.roster.without(i);
        let b = self.window.bounds().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &b)| b).collect();
        DegreeWindow::new(&r, b).expect("sub-window")
    }

    fn t(&self) -> usize {
        self.roster.log_indices().next().expect("checked")
    }

    fn plain(&self) -> Option<usize> {
        (0..self.roster.len()).find(|&i| !self.roster.is_log(i))
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        let roster = VarRoster::parse("t:log, s:plain").expect("valid");
        let window = DegreeWindow::uniform(&roster, -8, 8).expect("valid");
        RunConfig { p: 2, n: 2, precision: 4, roster, window, seed: 0, trials: 100 }
    }
}

fn display<T: fmt::Display, S: serde::Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: Suite,
    pub config: RunConfig,
    pub cases: usize,
    pub failures: usize,
    pub checks: Vec<Check>,
    pub timestamp: u64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The JSON with the timestamp zeroed, for reproducibility comparisons.
    pub fn deterministic_json(&self) -> String {
        let mut r = self.clone();
        r.timestamp = 0;
        r.to_json()
    }
}

pub fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

type Body = Box<dyn Fn() -> Result<Option<String>> + Send + Sync>;

struct Case {
    name: String,
    body: Body,
}

fn case(name: impl Into<String>, body: impl Fn() -> Result<Option<String>> + Send + Sync + 'static) -> Case {
    Case { name: name.into(), body: Box::new(body) }
}

fn run_cases(cases: Vec<Case>) -> Vec<Check> {
    cases
        .into_par_iter()
        .map(|c| match (c.body)() {
            Ok(None) => Check { name: c.name, pass: true, counterexample: None },
            Ok(Some(x)) => Check { name: c.name, pass: false, counterexample: Some(x) },
            Err(e) => Check { name: c.name, pass: false, counterexample: Some(format!("error: {e}")) },
        })
        .collect()
}

/// Runs one suite on the current rayon pool.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let cases = match suite {
        Suite::Homotopy => homotopy_cases(cfg)?,
        Suite::Injectivity => injectivity_cases(cfg)?,
        Suite::Cartier => cartier_cases(cfg)?,
        Suite::WittEquiv => witt_cases(cfg)?,
        Suite::TraceFil => trace_fil_cases(cfg)?,
        Suite::LiftIndep => lift_cases(cfg)?,
        Suite::Lemma42 => lemma42_cases(cfg)?,
        Suite::Lemma43 => lemma43_cases(cfg)?,
        Suite::Ceiling => ceiling_cases(cfg)?,
        Suite::Exactseq => exactseq_cases(cfg)?,
    };
    let checks = run_cases(cases);
    let failures = checks.iter().filter(|c| !c.pass).count();
    Ok(Report {
        schema: SCHEMA,
        suite,
        config: cfg.clone(),
        cases: checks.len(),
        failures,
        checks,
        timestamp: timestamp(),
    })
}

fn rat(s: &str) -> RatExponent {
    s.parse().expect("grid value")
}

fn degrees(cfg: &RunConfig) -> std::ops::RangeInclusive<usize> {
    0..=cfg.roster.len().min(2)
}

/// Ramification degrees `{1, 2, 3, p, 2p}` without repeats.
pub fn ramification_grid(p: u64) -> Vec<u32> {
    let mut e = vec![1, 2, 3, p as u32, 2 * p as u32];
    e.sort_unstable();
    e.dedup();
    e
}

/// Unit parts used for covers: `1`, and `1 + p s` when a plain variable exists.
fn unit_grid(cfg: &RunConfig, source: &VarRoster, m: Modulus, with_t: bool) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::one(source, m)];
    if let Some(s) = cfg.plain() {
        let x = LaurentPoly::var(source, m, source.name(s)).expect("present");
        out.push(&LaurentPoly::one(source, m) + &x.scale(cfg.p));
    }
    if with_t {
        let x = LaurentPoly::var(source, m, source.name(cfg.t())).expect("present");
        out.push(&LaurentPoly::one(source, m) + &x.scale(cfg.p));
    }
    out
}

fn homotopy_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    let r = cfg.roster.clone();
    for a in r.log_indices() {
        for b in 1..=2 * cfg.p as i64 {
            let name = r.name(a).to_string();
            let pv = PoleVector::new(&r, &[(name.as_str(), b)])?;
            let mut sub: Vec<PoleCondition> =
                (0..r.len()).map(|i| if r.is_log(i) { PoleCondition::Pole(0) } else { PoleCondition::Regular }).collect();
            sub[a] = PoleCondition::Pole(b - 1);
            let spec = ComplexSpec::log_poles(&r, &pv, cfg.p, cfg.n)?.quotient_by(sub)?;
            let (w, p) = (cfg.window.clone(), cfg.p);
            cases.push(case(format!("homotopy {name} b={b}"), move || {
                let rep = verify_homotopy(&spec, &w)?;
                Ok(if rep.consistent(p) {
                    None
                } else {
                    Some(rep.counterexample.unwrap_or_else(|| format!("H has length {} with p not dividing {b}", rep.cohomology_length)))
                })
            }));
        }
    }
    Ok(cases)
}

fn injectivity_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    let r = cfg.roster.clone();
    for a in r.log_indices() {
        let name = r.name(a).to_string();
        for b in 1..=2 * cfg.p as i64 {
            let big = ComplexSpec::log_poles(&r, &PoleVector::new(&r, &[(name.as_str(), b)])?, cfg.p, cfg.n)?;
            let small = ComplexSpec::log_poles(&r, &PoleVector::new(&r, &[(name.as_str(), b - 1)])?, cfg.p, cfg.n)?;
            for i in degrees(cfg) {
                let (big, small, w, p) = (big.clone(), small.clone(), cfg.window.clone(), cfg.p);
                cases.push(case(format!("inclusion {name} {}->{b} i={i}", b - 1), move || {
                    let m = induced_map(&ChainMap::inclusion(&small, &big)?, i, &w, &w)?;
                    if !m.injective {
                        return Ok(Some(format!("kernel contains {}", m.kernel_witness.unwrap_or_default())));
                    }
                    if !(b as u64).is_multiple_of(p) && !m.surjective {
                        return Ok(Some(format!("cokernel contains {}", m.cokernel_witness.unwrap_or_default())));
                    }
                    Ok(None)
                }));
            }
        }
    }
    Ok(cases)
}

fn cartier_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    let t = cfg.roster.name(cfg.t()).to_string();
    for r in R_GRID {
        for i in degrees(cfg) {
            let (roster, t, w, p) = (cfg.roster.clone(), t.clone(), cfg.window.clone(), cfg.p);
            cases.push(case(format!("cartier r={r} i={i}"), move || {
                let rep = verify_fil_correspondence(&roster, &t, p, &rat(r), i, &w)?;
                Ok(if rep.pass() { None } else { Some(rep.counterexample.clone().unwrap_or_else(|| format!("{rep:?}"))) })
            }));
        }
    }
    Ok(cases)
}

/// A random function closed over Z/p^n, given at precision `prec` with
/// random noise divisible by `p^n`.
pub fn random_closed_function(rng: &mut ChaCha8Rng, roster: &VarRoster, window: &DegreeWindow, p: u64, n: u32, prec: u32) -> LaurentPoly {
    let m = Modulus::new(p, prec).expect("valid");
    let pn = p.pow(n);
    let mut f = LaurentPoly::zero(roster, m);
    for _ in 0..rng.gen_range(1..=3) {
        let e: Vec<i32> = window.bounds().iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
        let v = e.iter().map(|&x| if x == 0 { n } else { m.valuation(m.reduce_i64(x as i64)).min(n) }).min().unwrap_or(n);
        let c = rng.gen_range(1..pn) * p.pow(n - v) % pn;
        let noise = rng.gen_range(0..m.order() / pn) * pn;
        f = &f + &LaurentPoly::monomial(roster, m, &e, ((c + noise) % m.order()) as i64).expect("valid");
    }
    f
}

fn witt_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    let t = cfg.roster.name(cfg.t()).to_string();
    let mut cases = Vec::new();
    for k in 0..cfg.trials {
        let b = random_closed_function(&mut rng, &cfg.roster, &cfg.window, cfg.p, n, 2 * n + 1);
        let h = random_poly(&mut rng, &cfg.roster, Modulus::new(cfg.p, 2 * n + 1)?, &cfg.window, 2);
        let t = t.clone();
        cases.push(case(format!("witt-equiv trial={k}"), move || {
            let m = b.modulus();
            let bb = beta(&b, n)?;
            if beta(&b.with_precision(2 * n)?, n)? != bb {
                return Ok(Some(format!("beta({b}) changes between precision {} and {}", 2 * n, 2 * n + 1)));
            }
            let lifted = &b + &h.scale(m.p().pow(n));
            if beta(&lifted, n)? != bb {
                return Ok(Some(format!("beta({b}) != beta({lifted})")));
            }
            for r in R_GRID {
                let (lhs, rhs) = witt_equivalence(&b, n, &rat(r), &t)?;
                if lhs != rhs {
                    return Ok(Some(format!("b = {b}, r = {r}: cohomological {lhs}, Witt {rhs}")));
                }
            }
            Ok(None)
        }));
    }
    Ok(cases)
}

fn trace_fil_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let ti = cfg.t();
    let t = cfg.roster.name(ti).to_string();
    let tp = format!("{t}'");
    let source = cfg.roster.renamed(ti, &tp)?;
    let m = Modulus::new(cfg.p, cfg.n)?;
    let w = cfg.window_on(&source);
    let mut cases = Vec::new();
    for u in unit_grid(cfg, &source, m, false) {
        for e in ramification_grid(cfg.p) {
            let cover = FiniteCover::new(&cfg.roster, &t, &tp, &u, e)?;
            for n in 1..=cfg.n {
                for i in degrees(cfg) {
                    for r in R_GRID {
                        for v in [FilVariant::Prime, FilVariant::Plain] {
                            let (cover, w) = (cover.clone(), w.clone());
                            cases.push(case(format!("trace-fil '{cover}' n={n} i={i} r={r} {v}"), move || {
                                let rep = verify_trace_inclusion(&cover, &rat(r), v, i, n, &w)?;
                                Ok(rep.counterexample)
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(cases)
}

fn random_poly(rng: &mut ChaCha8Rng, r: &VarRoster, m: Modulus, w: &DegreeWindow, terms: usize) -> LaurentPoly {
    let mut f = LaurentPoly::zero(r, m);
    for _ in 0..terms {
        let e: Vec<i32> = w.bounds().iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
        f = &f + &LaurentPoly::monomial(r, m, &e, rng.gen_range(0..m.order()) as i64).expect("valid");
    }
    f
}

fn random_form(rng: &mut ChaCha8Rng, r: &VarRoster, m: Modulus, w: &DegreeWindow, deg: usize) -> LogForm {
    let subs = Subset::all_of_size(r.len(), deg);
    let mut acc = LogForm::zero(r, m, deg);
    for _ in 0..3 {
        let s = subs[rng.gen_range(0..subs.len())];
        let f = random_poly(rng, r, m, w, 1);
        acc = &acc + &LogForm::from_component(&f, s);
    }
    acc
}

fn lift_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ti = cfg.t();
    let t = cfg.roster.name(ti).to_string();
    let tp = format!("{t}'");
    let source = cfg.roster.renamed(ti, &tp)?;
    let m = Modulus::new(cfg.p, cfg.n)?;
    let es = ramification_grid(cfg.p);
    let small: Vec<(i32, i32)> = (0..source.len()).map(|i| if i == ti { (-1, 2) } else { (0, 1) }).collect();
    let small = DegreeWindow::new(&source, small)?;
    let w = cfg.window_on(&source);
    let src = ComplexSpec::laurent(&source, cfg.p, cfg.n)?;
    let tgt = ComplexSpec::laurent(&cfg.roster, cfg.p, cfg.n)?;
    let one = LaurentPoly::one(&source, m);
    let mut cases = Vec::new();
    for k in 0..cfg.trials {
        let e = es[rng.gen_range(0..es.len())];
        let u = &one + &random_poly(&mut rng, &source, m, &small, 2).scale(cfg.p);
        let v = &u + &random_poly(&mut rng, &source, m, &small, 2).scale(cfg.p);
        let (src, tgt, w, t, tp, target) = (src.clone(), tgt.clone(), w.clone(), t.clone(), tp.clone(), cfg.roster.clone());
        let top = cfg.roster.len().min(2);
        cases.push(case(format!("lift-indep trial={k} e={e}"), move || {
            let f = FiniteCover::new(&target, &t, &tp, &u, e)?;
            let g = FiniteCover::new(&target, &t, &tp, &v, e)?;
            for i in 0..=top {
                if !check_lift_independence(&f, &g, &src, &tgt, i, &w)? {
                    return Ok(Some(format!("'{f}' and '{g}' induce different maps on H^{i}")));
                }
            }
            Ok(None)
        }));
    }
    for k in 0..4 * cfg.trials {
        let e = es[rng.gen_range(0..es.len())];
        let u = &one + &random_poly(&mut rng, &source, m, &small, 2).scale(cfg.p);
        let cover = FiniteCover::new(&cfg.roster, &t, &tp, &u, e)?;
        let di = rng.gen_range(0..=cfg.roster.len());
        let dj = rng.gen_range(0..=cfg.roster.len() - di);
        let omega = random_form(&mut rng, &cfg.roster, m, &cfg.window, di);
        let eta = random_form(&mut rng, &source, m, &w, dj);
        cases.push(case(format!("projection trial={k} e={e}"), move || {
            let lhs = cover.pushforward(&cover.pullback(&omega)?.wedge(&eta)?)?;
            let rhs = omega.wedge(&cover.pushforward(&eta)?)?;
            if lhs != rhs {
                return Ok(Some(format!("cover '{cover}', omega = {omega}, eta = {eta}: {lhs} != {rhs}")));
            }
            let back = cover.pushforward(&cover.pullback(&omega)?)?;
            if back != omega.scale(e as u64) {
                return Ok(Some(format!("cover '{cover}': f_* f^* ({omega}) = {back}")));
            }
            Ok(None)
        }));
    }
    Ok(cases)
}

fn lemma42_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let r = cfg.roster.clone();
    let ti = cfg.t();
    let t = r.name(ti).to_string();
    let m = Modulus::new(cfg.p, cfg.n)?;
    let bounds: Vec<(i32, i32)> = (0..r.len()).map(|i| if r.is_log(i) { (-4, 4) } else { (0, 4) }).collect();
    let box4 = DegreeWindow::new(&r, bounds)?;
    let mut cases = Vec::new();
    for i in 0..=r.len() {
        let (r, t, box4) = (r.clone(), t.clone(), box4.clone());
        cases.push(case(format!("lemma42 monomials i={i}"), move || {
            for s in Subset::all_of_size(r.len(), i) {
                for e in box4.multidegrees() {
                    let w = LogForm::monomial(&r, m, s, &e, 1)?;
                    if !w.regular_in(ti) {
                        continue;
                    }
                    let (a, b) = w.lemma42_criterion(&t)?;
                    if a != b {
                        return Ok(Some(format!("{w}: in t*Omega(log) is {a}, wedge dlog regular is {b}")));
                    }
                }
            }
            Ok(None)
        }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..cfg.trials {
        let i = rng.gen_range(0..=r.len());
        let mut w = random_form(&mut rng, &r, m, &box4, i);
        // Keep the part lying in Ω^i.
        let terms: Vec<_> = w.terms().filter(|(s, e, _)| e[ti] >= i32::from(s.contains(ti))).map(|(s, e, c)| ((s, e.clone()), c)).collect();
        w = LogForm::from_raw(&r, m, i, terms);
        let t = t.clone();
        cases.push(case(format!("lemma42 trial={k}"), move || {
            let (a, b) = w.lemma42_criterion(&t)?;
            Ok(if a == b { None } else { Some(format!("{w}: {a} vs {b}")) })
        }));
    }
    Ok(cases)
}

fn lemma43_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let ti = cfg.t();
    let t = cfg.roster.name(ti).to_string();
    let tp = format!("{t}'");
    let source = cfg.roster.renamed(ti, &tp)?;
    let m = Modulus::new(cfg.p, cfg.n)?;
    let w = cfg.window_on(&source);
    let mut cases = Vec::new();
    for u in unit_grid(cfg, &source, m, true) {
        for e in ramification_grid(cfg.p) {
            let cover = FiniteCover::new(&cfg.roster, &t, &tp, &u, e)?;
            for i in 0..=cfg.roster.len() {
                let (c, ww) = (cover.clone(), w.clone());
                cases.push(case(format!("lemma43 integral '{cover}' i={i}"), move || {
                    Ok(verify_integral_bound(&c, i, &ww)?.counterexample)
                }));
                for r in &R_GRID[1..] {
                    let (c, ww) = (cover.clone(), w.clone());
                    cases.push(case(format!("lemma43 r={r} '{cover}' i={i}"), move || {
                        Ok(verify_ramified_bound(&c, &rat(r), i, &ww)?.counterexample)
                    }));
                }
            }
        }
    }
    Ok(cases)
}

fn ceiling_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(RatExponent, u64)> = (0..cfg.trials)
        .map(|_| {
            let r = RatExponent::new(rng.gen_range(0..10_000), rng.gen_range(1..=200)).expect("positive denominator");
            (r, rng.gen_range(1..=200))
        })
        .collect();
    // One case per thousand pairs keeps the report small.
    Ok(pairs
        .chunks(1000)
        .enumerate()
        .map(|(k, chunk)| {
            let chunk = chunk.to_vec();
            case(format!("ceiling block={k} size={}", chunk.len()), move || {
                Ok(chunk.iter().find(|(r, e)| !ceil_identity(*r, *e)).map(|(r, e)| format!("r = {r}, e = {e}")))
            })
        })
        .collect())
}

fn exactseq_cases(cfg: &RunConfig) -> Result<Vec<Case>> {
    let r = cfg.roster.clone();
    let mut cases = Vec::new();
    for a in r.log_indices() {
        let name = r.name(a).to_string();
        for b in 1..=2 * cfg.p as i64 {
            let seq = pole_step_sequence(&r, &PoleVector::new(&r, &[(name.as_str(), b)])?, &name, cfg.p, cfg.n)?;
            let seq = std::sync::Arc::new(seq);
            for i in 0..=r.len() {
                let (seq, wa, wb) = (seq.clone(), cfg.window_without(a), cfg.window.clone());
                cases.push(case(format!("pole-step {name} b={b} i={i}"), move || {
                    let rep = verify_exact_sequence(&seq.phi, &seq.psi, i, [&wa, &wb, &wa])?;
                    Ok(if rep.is_exact() { None } else { Some(rep.counterexample.clone().unwrap_or_else(|| format!("{rep:?}"))) })
                }));
            }
        }
    }
    // Sections of single-divisor charts: collapse of the two normalizations.
    let ti = cfg.t();
    let x = r.name(ti).to_string();
    for b in ["1/2", "1", "3/2", "2"] {
        for i in degrees(cfg) {
            let chart = ModulusChart::new(&r, &[(x.as_str(), rat(b))], cfg.p, cfg.n, i)?;
            let w = cfg.window.clone();
            cases.push(case(format!("collapse b={b} i={i}"), move || {
                let s = modulus_sections(&chart, &w)?;
                Ok(if s.collapse && s.injective { None } else { Some(s.counterexample.unwrap_or_default()) })
            }));
        }
    }
    // Graded certificates for closed monomials outside the sections.
    let laurent = ComplexSpec::laurent(&r, cfg.p, cfg.n)?;
    let m = laurent.modulus();
    let lo = cfg.window.bounds()[ti].0;
    for b in [1i64, 2] {
        for i in degrees(cfg) {
            let (laurent, x, w, r) = (laurent.clone(), x.clone(), cfg.window.clone(), r.clone());
            cases.push(case(format!("certificates b={b} i={i}"), move || {
                for s in Subset::all_of_size(r.len(), i) {
                    for k in lo..0 {
                        let mut e = vec![0; r.len()];
                        e[ti] = k;
                        let mut form = LogForm::monomial(&r, m, s, &e, 1)?;
                        while !form.is_zero() && !laurent.is_closed(&form)? {
                            form = form.scale(m.p());
                        }
                        if form.is_zero() {
                            continue;
                        }
                        let class = CohClass::new(&laurent, &form)?;
                        let rep = membership_two_sided(&class, &x, &RatExponent::integer(b), &w)?;
                        if !rep.member && !rep.certificate_nonzero {
                            return Ok(Some(format!("certificate for {form} is exact: {rep:?}")));
                        }
                    }
                }
                Ok(None)
            }));
        }
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(p: u64, n: u32) -> RunConfig {
        let roster = VarRoster::parse("t:log, s:plain").unwrap();
        let window = DegreeWindow::new(&roster, vec![(-6, 6), (0, 2)]).unwrap();
        RunConfig::new(p, n, 2 * n + 1, roster, window, 7, 10).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nosuch".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_small() {
        for s in Suite::ALL {
            let rep = run_suite(s, &small(2, 1)).unwrap();
            assert!(rep.pass(), "{s}: {}", rep.to_json());
            assert!(rep.cases > 0);
        }
    }

    #[test]
    fn deterministic() {
        let a = run_suite(Suite::WittEquiv, &small(3, 2)).unwrap();
        let b = run_suite(Suite::WittEquiv, &small(3, 2)).unwrap();
        assert_eq!(a.deterministic_json(), b.deterministic_json());
        assert!(a.to_json().contains("\"schema\": 1"));
    }

    #[test]
    fn config_validation() {
        let r = VarRoster::parse("s:plain").unwrap();
        let w = DegreeWindow::uniform(&r, 0, 2).unwrap();
        assert!(RunConfig::new(2, 2, 4, r, w, 0, 1).is_err());
        let d = RunConfig::default();
        assert!(RunConfig::new(2, 3, 2, d.roster.clone(), d.window.clone(), 0, 1).is_err());
        assert!(RunConfig::new(4, 1, 1, d.roster, d.window, 0, 1).is_err());
    }
}
