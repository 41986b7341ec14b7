//! The filtrations `Fil'_r` and `Fil_r` on the cohomology of the Laurent
//! complex, modulus sections on charts and the graded certificates for
//! classes outside them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohomology::{
    cohomology_basis, induced_map, ChainMap, CohClass, ComplexSpec, DegreeWindow, PoleCondition,
};
use crate::error::{Error, Result};
use crate::forms::{LogForm, PoleVector};
use crate::laurent::{LaurentPoly, VarRoster};
use crate::pushforward::FiniteCover;
use crate::ring::{HowellMatrix, Modulus, RatExponent};
use crate::witt::{beta, koizumi_membership};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilVariant {
    #[serde(rename = "Fil'")]
    Prime,
    #[serde(rename = "Fil")]
    Plain,
}

impl fmt::Display for FilVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilVariant::Prime => "Fil'",
            FilVariant::Plain => "Fil",
        })
    }
}

impl std::str::FromStr for FilVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Fil'" | "fil'" | "prime" | "fil-prime" => Ok(FilVariant::Prime),
            "Fil" | "fil" | "plain" => Ok(FilVariant::Plain),
            _ => Err(Error::Parse(format!("unknown filtration '{s}', expected Fil or Fil'"))),
        }
    }
}

/// The pole condition on `t` cutting out a filtration step: `Fil'_0` is the
/// regular part, `Fil'_r` allows poles of order `⌈r⌉ - 1` with log poles, and
/// `Fil_r = Fil'_{p⌈r⌉}`.
pub fn fil_condition(variant: FilVariant, r: &RatExponent, p: u64) -> Result<PoleCondition> {
    if r.is_negative() {
        return Err(Error::InvalidArgument(format!("r = {r} is negative")));
    }
    let prime_index = match variant {
        FilVariant::Prime => *r,
        FilVariant::Plain => RatExponent::integer(p as i64 * r.ceil()),
    };
    Ok(if prime_index.is_zero() { PoleCondition::Regular } else { PoleCondition::Pole(prime_index.ceil() - 1) })
}

/// A class of the Laurent complex in the distinguished variable and a
/// filtration step to test it against.
#[derive(Debug, Clone)]
pub struct FilQuery {
    pub class: CohClass,
    pub var: String,
    pub r: RatExponent,
    pub variant: FilVariant,
}

fn check_laurent_in(spec: &ComplexSpec, t: &str) -> Result<usize> {
    let ti = spec.roster().require_log(t)?;
    if spec.conditions()[ti] != PoleCondition::Unbounded || spec.quotient().is_some() {
        return Err(Error::UnsupportedSpec(format!("{spec} is not a Laurent complex in '{t}'")));
    }
    Ok(ti)
}

fn check_window(w: &LogForm, window: &DegreeWindow) -> Result<()> {
    match w.pieces().keys().find(|mu| !window.contains(mu)) {
        Some(mu) => Err(Error::Window(format!("{w} has a term of multidegree {mu:?} outside {window}"))),
        None => Ok(()),
    }
}

/// Writes a closed `w` of `full` as `z + dη` with `z` a cycle of `sub`, if
/// possible. `sub` must be a subcomplex of `full` at the same precision.
pub fn subcomplex_representative(full: &ComplexSpec, sub: &ComplexSpec, w: &LogForm) -> Result<Option<LogForm>> {
    let w = full.project(w)?;
    let work = w.modulus();
    let k = full.precision();
    let i = w.degree();
    let mut z = LogForm::zero(full.roster(), work, i);
    for (mu, terms) in w.pieces() {
        let pf = full.piece(&mu);
        let ps = sub.piece(&mu);
        let v = pf.vector(i, &terms)?;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for c in ps.cycles(i, k, work).raw_rows() {
            let form = ps.form(i, c, work);
            let t = form.pieces().remove(&mu).unwrap_or_default();
            rows.push(pf.vector(i, &t)?);
        }
        let nz = rows.len();
        rows.extend(pf.boundaries(i, k, work).raw_rows().iter().cloned());
        let Some(c) = HowellMatrix::from_residues(work, pf.dim(i), rows.clone()).solve(&v) else { return Ok(None) };
        let mut acc = vec![0u64; pf.dim(i)];
        for (row, &x) in rows.iter().zip(&c).take(nz) {
            for (a, &y) in acc.iter_mut().zip(row) {
                *a = work.add(*a, work.mul(x, y));
            }
        }
        z = &z + &pf.form(i, &acc, work);
    }
    Ok(Some(z))
}

/// A representative of the class inside the filtration step, if one exists.
pub fn fil_representative(q: &FilQuery, window: &DegreeWindow) -> Result<Option<LogForm>> {
    let spec = q.class.spec();
    check_laurent_in(spec, &q.var)?;
    check_window(q.class.representative(), window)?;
    let sub = spec.clone().with_condition(&q.var, fil_condition(q.variant, &q.r, spec.p())?)?;
    subcomplex_representative(spec, &sub, q.class.representative())
}

/// Whether the class lies in `Fil'_r` or `Fil_r`.
pub fn fil_membership(q: &FilQuery, window: &DegreeWindow) -> Result<bool> {
    Ok(fil_representative(q, window)?.is_some())
}

/// `(𝔸^d, Σ b_a {x_a = 0})` at precision `n` in degree `i`. Log variables
/// without a multiplicity carry log poles only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulusChart {
    pub roster: VarRoster,
    pub multiplicities: Vec<(String, RatExponent)>,
    pub p: u64,
    pub n: u32,
    pub degree: usize,
}

impl ModulusChart {
    pub fn new(roster: &VarRoster, b: &[(&str, RatExponent)], p: u64, n: u32, degree: usize) -> Result<Self> {
        let mut mult = Vec::new();
        for (name, r) in b {
            roster.require_log(name)?;
            if r.is_negative() || r.is_zero() {
                return Err(Error::InvalidArgument(format!("multiplicity {r} of '{name}' is not positive")));
            }
            if mult.iter().any(|(x, _): &(String, RatExponent)| x == name) {
                return Err(Error::InvalidArgument(format!("'{name}' has two multiplicities")));
            }
            mult.push((name.to_string(), *r));
        }
        Modulus::new(p, n)?;
        Ok(ModulusChart { roster: roster.clone(), multiplicities: mult, p, n, degree })
    }

    fn poles(&self, f: impl Fn(i64) -> i64) -> Result<PoleVector> {
        let entries: Vec<(&str, i64)> = self.multiplicities.iter().map(|(x, r)| (x.as_str(), f(r.ceil()))).collect();
        PoleVector::new(&self.roster, &entries)
    }

    /// `x^{-p⌈b⌉+1} Ω•(log)`.
    pub fn upper(&self) -> Result<ComplexSpec> {
        let p = self.p as i64;
        ComplexSpec::log_poles(&self.roster, &self.poles(|c| p * c - 1)?, self.p, self.n)
    }

    /// `x^{-p(⌈b⌉-1)} Ω•(log)`.
    pub fn lower(&self) -> Result<ComplexSpec> {
        let p = self.p as i64;
        ComplexSpec::log_poles(&self.roster, &self.poles(|c| p * (c - 1))?, self.p, self.n)
    }
}

impl fmt::Display for ModulusChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.multiplicities.iter().map(|(x, r)| format!("{r}*{{{x}=0}}")).collect();
        write!(f, "[{}] with D = {} over Z/{}^{} in degree {}", self.roster, b.join(" + "), self.p, self.n, self.degree)
    }
}

/// Generators of the sections of a chart on a window.
#[derive(Debug, Clone)]
pub struct ModulusSections {
    pub classes: Vec<CohClass>,
    /// The two pole normalizations give the same cohomology on the window.
    pub collapse: bool,
    /// The sections inject into the cohomology with unbounded poles.
    pub injective: bool,
    pub counterexample: Option<String>,
}

pub fn modulus_sections(chart: &ModulusChart, window: &DegreeWindow) -> Result<ModulusSections> {
    let upper = chart.upper()?;
    let lower = chart.lower()?;
    let i = chart.degree;
    let classes = cohomology_basis(&upper, i, window)?;
    let step = induced_map(&ChainMap::inclusion(&lower, &upper)?, i, window, window)?;
    let mut laurent = ComplexSpec::laurent(&chart.roster, chart.p, chart.n)?;
    for (x, c) in chart.roster.log_indices().map(|j| (chart.roster.name(j).to_string(), upper.conditions()[j])) {
        if !chart.multiplicities.iter().any(|(y, _)| *y == x) {
            laurent = laurent.with_condition(&x, c)?;
        }
    }
    let into = induced_map(&ChainMap::inclusion(&upper, &laurent)?, i, window, window)?;
    let counterexample = step
        .kernel_witness
        .clone()
        .or(step.cokernel_witness.clone())
        .or(into.kernel_witness.clone())
        .map(|w| format!("witness {w}"));
    Ok(ModulusSections { classes, collapse: step.is_isomorphism(), injective: into.injective, counterexample })
}

/// Outcome of testing a class against the sections of a single-divisor
/// chart, with the graded certificate when it lies outside.
#[derive(Debug, Clone, Serialize)]
pub struct TwoSidedReport {
    pub member: bool,
    /// Least `c` with the class represented by a form with pole order `p(c - 1)`.
    pub order: Option<i64>,
    /// Least precision at which the graded image is nonzero.
    pub n0: Option<u32>,
    /// `ω_3` in the graded piece over F_p.
    pub certificate: Option<String>,
    /// `ω_3 = x^{-p(c-1)} (α + β ∧ dlog x)` with `α`, `β` on the divisor.
    pub alpha: Option<String>,
    pub beta: Option<String>,
    /// The certificate is not exact in the graded piece.
    pub certificate_nonzero: bool,
}

fn divide_p_pow(w: &LogForm, k: u32) -> Result<LogForm> {
    let m = w.modulus();
    let q = m.p().pow(k);
    if w.terms().any(|(_, _, c)| c % q != 0) {
        return Err(Error::Precondition(format!("{w} is not divisible by p^{k}")));
    }
    let f = Modulus::new(m.p(), 1)?;
    Ok(LogForm::from_raw(
        w.roster(),
        f,
        w.degree(),
        w.terms().map(|(s, e, c)| ((s, e.clone()), (c / q) % m.p())).collect::<Vec<_>>(),
    ))
}

/// Decides whether a class of the Laurent complex in `x` lies in the sections
/// of the chart `b {x = 0}`; otherwise produces the nonzero class in the
/// graded piece at `x`-exponent `-p(c - 1)` over F_p.
pub fn membership_two_sided(
    class: &CohClass,
    x: &str,
    b: &RatExponent,
    window: &DegreeWindow,
) -> Result<TwoSidedReport> {
    let spec = class.spec();
    let xi = check_laurent_in(spec, x)?;
    check_window(class.representative(), window)?;
    if b.is_negative() || b.is_zero() {
        return Err(Error::InvalidArgument(format!("multiplicity {b} is not positive")));
    }
    let p = spec.p() as i64;
    let at = |c: i64| spec.clone().with_condition(x, PoleCondition::Pole(p * (c - 1)));
    let w = class.representative();
    let cb = b.ceil();
    let mut rep =
        TwoSidedReport { member: false, order: None, n0: None, certificate: None, alpha: None, beta: None, certificate_nonzero: false };
    if subcomplex_representative(spec, &at(cb)?, w)?.is_some() {
        rep.member = true;
        return Ok(rep);
    }
    let lowest = w.terms().map(|(_, e, _)| e[xi] as i64).min().unwrap_or(0);
    let mut c = cb + 1;
    let w2 = loop {
        if let Some(z) = subcomplex_representative(spec, &at(c)?, w)? {
            break z;
        }
        if p * (c - 1) > -lowest {
            return Err(Error::Precondition(format!("{w} has no representative with pole order {}", p * (c - 1))));
        }
        c += 1;
    };
    rep.order = Some(c);
    let pole = p * (c - 1);
    let graded = at(c)?.quotient_by(
        spec.conditions()
            .iter()
            .enumerate()
            .map(|(j, &k)| if j == xi { PoleCondition::Pole(pole - 1) } else { k })
            .collect(),
    )?;
    let n = spec.precision();
    let mut found = None;
    for n0 in 1..=n {
        if !graded.reduced(n0)?.is_exact(&w2.with_precision(n0)?)? {
            found = Some(n0);
            break;
        }
    }
    let Some(n0) = found else {
        return Err(Error::Precondition(format!("{w2} is exact in the graded piece at pole order {pole}")));
    };
    rep.n0 = Some(n0);
    let top = graded.project(&w2)?;
    let eta = if n0 == 1 {
        LogForm::zero(spec.roster(), top.modulus(), top.degree().saturating_sub(1))
    } else {
        graded.reduced(n0 - 1)?.primitive(&w2.with_precision(n0 - 1)?)?.expect("exact below n0").with_precision(n)?
    };
    let diff = if top.degree() == 0 { top.clone() } else { graded.project(&(&top - &eta.d()))? };
    let w3 = divide_p_pow(&diff, n0 - 1)?;
    let f1 = graded.reduced(1)?;
    rep.certificate_nonzero = !f1.is_exact(&w3)?;
    // Strip x^{-p(c-1)} and split off dlog x.
    let mut shift = vec![0; spec.roster().len()];
    shift[xi] = pole as i32;
    let unshifted = LogForm::from_raw(
        spec.roster(),
        w3.modulus(),
        w3.degree(),
        w3.terms()
            .map(|(s, e, c)| {
                let f: Vec<i32> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                ((s, f), c)
            })
            .collect::<Vec<_>>(),
    );
    let (alpha, beta_part) = unshifted.split_top_variable(x)?;
    let divisor = spec.roster().without(xi);
    let on_divisor = |f: &LogForm| drop_variable(f, xi, &divisor).to_string();
    rep.alpha = Some(on_divisor(&alpha));
    rep.beta = Some(if w3.degree() == 0 { "0".into() } else { on_divisor(&beta_part) });
    rep.certificate = Some(w3.to_string());
    Ok(rep)
}

/// Restricts a form free of `x` and `dlog x` with `x`-exponent 0 to the
/// roster without `x`.
fn drop_variable(f: &LogForm, xi: usize, divisor: &VarRoster) -> LogForm {
    let down = |j: usize| if j > xi { j - 1 } else { j };
    LogForm::from_raw(
        divisor,
        f.modulus(),
        f.degree(),
        f.terms()
            .map(|(s, e, c)| {
                let ix: Vec<usize> = s.indices().map(down).collect();
                let ex: Vec<i32> = e.iter().enumerate().filter(|(j, _)| *j != xi).map(|(_, &v)| v).collect();
                ((crate::forms::Subset::from_indices(&ix), ex), c)
            })
            .collect::<Vec<_>>(),
    )
}

/// Outcome of pushing filtration generators along a cover.
#[derive(Debug, Clone, Serialize)]
pub struct TraceInclusionReport {
    pub cover: String,
    pub r: RatExponent,
    pub variant: FilVariant,
    pub degree: usize,
    pub generators: u64,
    pub counterexample: Option<String>,
}

impl TraceInclusionReport {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `Tr(Fil_r) ⊆ Fil_{r/e}` (or the primed version) on the window
/// generators of the source filtration step at precision `n`.
pub fn verify_trace_inclusion(
    cover: &FiniteCover,
    r: &RatExponent,
    variant: FilVariant,
    i: usize,
    n: u32,
    window: &DegreeWindow,
) -> Result<TraceInclusionReport> {
    let m = cover.modulus();
    if n > m.precision() {
        return Err(Error::Precision(format!("cover is defined modulo p^{}, asked for n = {n}", m.precision())));
    }
    let p = m.p();
    let tp = cover.source().name(cover.variable()).to_string();
    let t = cover.target().name(cover.variable()).to_string();
    let src = ComplexSpec::laurent(cover.source(), p, n)?;
    let tgt = ComplexSpec::laurent(cover.target(), p, n)?;
    let sub = src.clone().with_condition(&tp, fil_condition(variant, r, p)?)?;
    let r_e = r.div_int(cover.degree() as u64)?;
    let mut rep = TraceInclusionReport {
        cover: cover.to_string(),
        r: *r,
        variant,
        degree: i,
        generators: 0,
        counterexample: None,
    };
    let gens = cohomology_basis(&sub, i, window)?;
    for g in gens {
        rep.generators += 1;
        let img = cover.pushforward(&g.representative().with_precision(m.precision())?)?.with_precision(n)?;
        let class = CohClass::new(&tgt, &img)?;
        let q = FilQuery { class, var: t.clone(), r: r_e, variant };
        let target_window = window_of(&img)?;
        if !fil_membership(&q, &target_window)? {
            rep.counterexample = Some(format!("Tr({}) = {img} is not in {variant}_{r_e}", g.representative()));
            break;
        }
    }
    Ok(rep)
}

/// The smallest window containing every multidegree of `w`.
pub fn window_of(w: &LogForm) -> Result<DegreeWindow> {
    let r = w.roster();
    let mut bounds: Vec<(i32, i32)> = vec![(0, 0); r.len()];
    for (k, mu) in w.pieces().keys().enumerate() {
        for (b, &x) in bounds.iter_mut().zip(mu) {
            *b = if k == 0 { (x, x) } else { (b.0.min(x), b.1.max(x)) };
        }
    }
    DegreeWindow::new(r, bounds)
}

/// Compares membership of `[b]` in `H^0(t^{-p(⌈r⌉-1)} Ω•(log))` over Z/p^n
/// with Koizumi's condition on `F^{-n} β(b)`. `b` is given at precision
/// at least `2n`. Returns `(cohomological, koizumi)`.
pub fn witt_equivalence(b: &LaurentPoly, n: u32, r: &RatExponent, t: &str) -> Result<(bool, bool)> {
    let m = b.modulus();
    let roster = b.roster();
    let bn = b.with_precision(n)?;
    let laurent = ComplexSpec::laurent(roster, m.p(), n)?;
    let class = CohClass::new(&laurent, &LogForm::function(&bn))?;
    let p = m.p() as i64;
    let sub = laurent.clone().with_condition(t, PoleCondition::Pole(p * (r.ceil() - 1)))?;
    let lhs = if r.is_zero() {
        subcomplex_representative(&laurent, &laurent.clone().with_condition(t, PoleCondition::Regular)?, class.representative())?
            .is_some()
    } else {
        subcomplex_representative(&laurent, &sub, class.representative())?.is_some()
    };
    let rhs = koizumi_membership(&beta(b, n)?.frobenius_root(n)?, r, t)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn roster() -> VarRoster {
        VarRoster::parse("t:log, s:plain").unwrap()
    }

    fn rat(s: &str) -> RatExponent {
        s.parse().unwrap()
    }

    fn query(form: &str, p: u64, n: u32, r: &str, variant: FilVariant) -> FilQuery {
        let spec = ComplexSpec::laurent(&roster(), p, n).unwrap();
        let w = LogForm::parse(form, &roster(), spec.modulus()).unwrap();
        FilQuery { class: CohClass::new(&spec, &w).unwrap(), var: "t".into(), r: rat(r), variant }
    }

    fn window() -> DegreeWindow {
        DegreeWindow::new(&roster(), vec![(-9, 9), (0, 3)]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let w = window();
        assert!(fil_membership(&query("d(t)", 2, 2, "0", FilVariant::Prime), &w).unwrap());
        assert!(!fil_membership(&query("dlog(t)", 2, 2, "0", FilVariant::Prime), &w).unwrap());
        assert!(fil_membership(&query("dlog(t)", 2, 2, "1", FilVariant::Prime), &w).unwrap());
        for (r, want) in [("0", false), ("1/2", false), ("1", false), ("4/3", true), ("3/2", true), ("2", true)] {
            let q = query("t^-3 * dlog(t)", 3, 1, r, FilVariant::Plain);
            assert_eq!(fil_membership(&q, &w).unwrap(), want, "r = {r}");
        }
        // Exact forms lie in every step.
        assert!(fil_membership(&query("-3*t^-3 * dlog(t)", 3, 2, "0", FilVariant::Prime), &w).unwrap());
        assert!(fil_membership(&query("1", 3, 2, "0", FilVariant::Prime), &w).is_ok());
        let neg = query("1", 3, 2, "-1", FilVariant::Prime);
        assert!(fil_membership(&neg, &w).is_err());
        let out = query("t^-20 * dlog(t)", 3, 2, "1", FilVariant::Prime);
        assert!(matches!(fil_membership(&out, &w), Err(Error::Window(_))));
    }

    #[test]
    fn monotone_and_renumbered() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = ["0", "1/3", "1/2", "1", "3/2", "2", "5/2", "3", "4", "6"];
        for p in [2u64, 3] {
            for n in 1..=2 {
                let spec = ComplexSpec::laurent(&roster(), p, n).unwrap();
                let m = spec.modulus();
                for _ in 0..15 {
                    let i = rng.gen_range(0..=1usize);
                    let e = vec![rng.gen_range(-8..=3), rng.gen_range(0..=2)];
                    let s = crate::forms::Subset::all_of_size(2, i)[0];
                    let mut z = LogForm::monomial(&roster(), m, s, &e, 1).unwrap();
                    while !spec.is_closed(&z).unwrap() {
                        z = z.scale(p);
                    }
                    let class = CohClass::new(&spec, &z).unwrap();
                    let mut prev = [false, false];
                    for r in grid {
                        for (k, v) in [FilVariant::Prime, FilVariant::Plain].into_iter().enumerate() {
                            let q = FilQuery { class: class.clone(), var: "t".into(), r: rat(r), variant: v };
                            let now = fil_membership(&q, &window()).unwrap();
                            assert!(now || !prev[k], "not monotone at r = {r}, {z}");
                            prev[k] = now;
                        }
                        let plain = FilQuery { class: class.clone(), var: "t".into(), r: rat(r), variant: FilVariant::Plain };
                        let prime = FilQuery {
                            class: class.clone(),
                            var: "t".into(),
                            r: RatExponent::integer(p as i64 * rat(r).ceil()),
                            variant: FilVariant::Prime,
                        };
                        assert_eq!(fil_membership(&plain, &window()).unwrap(), fil_membership(&prime, &window()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn sections_and_collapse() {
        let r = VarRoster::parse("x:log, s:plain").unwrap();
        let w = DegreeWindow::new(&r, vec![(-8, 4), (0, 2)]).unwrap();
        for p in [2u64, 3] {
            for n in 1..=2 {
                for b in ["1/2", "1", "2"] {
                    for i in 0..=2 {
                        let chart = ModulusChart::new(&r, &[("x", rat(b))], p, n, i).unwrap();
                        let secs = modulus_sections(&chart, &w).unwrap();
                        assert!(secs.collapse && secs.injective, "p={p} n={n} b={b} i={i} {:?}", secs.counterexample);
                    }
                }
            }
        }
        // b = 1, n = 1, i = 0, p = 2: closed functions with pole at most 1 mod 2, i.e. regular ones and x^-2k... none.
        let chart = ModulusChart::new(&r, &[("x", rat("1"))], 2, 1, 0).unwrap();
        let secs = modulus_sections(&chart, &w).unwrap();
        assert!(secs.classes.iter().all(|c| c.representative().terms().all(|(_, e, _)| e[0] >= -1)));
        assert!(!secs.classes.is_empty());
        let empty = ModulusChart::new(&r, &[("x", rat("1"))], 2, 1, 3).unwrap();
        assert!(modulus_sections(&empty, &w).unwrap().classes.is_empty());
        assert!(ModulusChart::new(&r, &[("x", rat("0"))], 2, 1, 0).is_err());
        assert!(ModulusChart::new(&r, &[("s", rat("1"))], 2, 1, 0).is_err());
    }

    #[test]
    fn two_sided_certificates() {
        let r = VarRoster::parse("x:log, s:plain").unwrap();
        let w = DegreeWindow::new(&r, vec![(-9, 9), (0, 3)]).unwrap();
        let class = |s: &str, p: u64, n: u32| {
            let spec = ComplexSpec::laurent(&r, p, n).unwrap();
            CohClass::new(&spec, &LogForm::parse(s, &r, spec.modulus()).unwrap()).unwrap()
        };
        let rep = membership_two_sided(&class("x^-2 * dlog(x)", 2, 1), "x", &rat("1"), &w).unwrap();
        assert!(!rep.member);
        assert_eq!(rep.order, Some(2));
        assert_eq!(rep.n0, Some(1));
        assert!(rep.certificate_nonzero);
        assert_eq!(rep.alpha.as_deref(), Some("0"));
        assert_eq!(rep.beta.as_deref(), Some("1"));
        let inside = membership_two_sided(&class("dlog(x)", 2, 1), "x", &rat("1"), &w).unwrap();
        assert!(inside.member && inside.certificate.is_none());
        // 2 x^-2 dlog x = -d(x^-2) over Z/4.
        assert!(membership_two_sided(&class("2*x^-2 * dlog(x)", 2, 2), "x", &rat("1"), &w).unwrap().member);
        // 2 x^-4 dlog x vanishes mod 2 and is seen only after dividing by 2.
        let rep = membership_two_sided(&class("2*x^-4 * dlog(x)", 2, 2), "x", &rat("1"), &w).unwrap();
        assert!(!rep.member);
        assert_eq!((rep.order, rep.n0), (Some(3), Some(2)));
        assert!(rep.certificate_nonzero);
        let rep = membership_two_sided(&class("x^-4 * s * d(s)", 2, 2), "x", &rat("1"), &w).unwrap();
        assert!(rep.n0.is_some() && rep.certificate_nonzero, "{rep:?}");
        let rep = membership_two_sided(&class("x^-4", 2, 2), "x", &rat("1"), &w).unwrap();
        assert!(!rep.member && rep.certificate_nonzero, "{rep:?}");
    }

    #[test]
    fn trace_inclusions() {
        let t = roster();
        let w = DegreeWindow::new(&t.renamed(0, "t'").unwrap(), vec![(-8, 8), (0, 2)]).unwrap();
        let m = Modulus::new(2, 2).unwrap();
        for (u, e) in [("1", 1), ("1", 2), ("1 + 2*s", 2), ("1", 4)] {
            let src = t.renamed(0, "t'").unwrap();
            let f = FiniteCover::new(&t, "t", "t'", &LaurentPoly::parse(u, &src, m).unwrap(), e).unwrap();
            for n in 1..=2 {
                for i in 0..=2 {
                    for r in ["0", "1/2", "2"] {
                        for v in [FilVariant::Prime, FilVariant::Plain] {
                            let rep = verify_trace_inclusion(&f, &rat(r), v, i, n, &w).unwrap();
                            assert!(rep.pass(), "{u} e={e} n={n} i={i} r={r} {v}: {:?}", rep.counterexample);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witt_equivalence_examples() {
        let m = Modulus::new(2, 4).unwrap();
        let b = LaurentPoly::parse("t^-4", &roster(), m).unwrap();
        for (r, want) in [("1", false), ("2", false), ("5/2", true), ("3", true)] {
            let (lhs, rhs) = witt_equivalence(&b, 2, &rat(r), "t").unwrap();
            assert_eq!((lhs, rhs), (want, want), "r = {r}");
        }
    }
}
