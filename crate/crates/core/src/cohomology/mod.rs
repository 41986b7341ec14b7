//! Cohomology of pole-twisted log de Rham complexes and their quotients.
//!
//! Every complex here is spanned by monomial basis terms `x^a eps_S`, and its
//! differential preserves the multidegree, so the complex is the direct sum
//! of finite complexes of free Z/p^k-modules, one per multidegree ("piece").
//! A [`DegreeWindow`] selects which pieces are computed; any class supported
//! in the window is decided exactly, since its primitives live in the same
//! pieces.

mod homotopy;
mod maps;
pub(crate) mod span;

pub use homotopy::{homotopy_pi, verify_homotopy, Homotopy, HomotopyReport};
pub use maps::{
    induced_map, maps_agree, pole_step_sequence, verify_exact_sequence, ChainMap, ExactnessReport, InducedMap,
    PoleStepSequence,
};

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{LogForm, PoleVector, Subset};
use crate::laurent::{Exponent, VarRoster};
use crate::ring::{kernel, HowellMatrix, Modulus};
use span::SparseVec;

/// Upper bound on the number of basis coordinates a single query may touch.
pub const RESOURCE_CAP: u64 = 4_000_000;

/// Condition on the exponent of one log variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "b")]
pub enum PoleCondition {
    /// Any exponent: the complex of `A[t^-1]`.
    Unbounded,
    /// Exponent at least `-b`; `b = -1` means divisible by `t`.
    Pole(i64),
    /// No log pole: exponent `>= 0`, and `>= 1` on terms containing `dlog t`.
    Regular,
}

impl PoleCondition {
    /// Least admissible exponent, without and with `dlog t` in the basis word.
    fn thresholds(&self) -> (i64, i64) {
        match *self {
            PoleCondition::Unbounded => (i64::MIN, i64::MIN),
            PoleCondition::Pole(b) => (-b, -b),
            PoleCondition::Regular => (0, 1),
        }
    }

    pub fn admits(&self, exponent: i32, has_dlog: bool) -> bool {
        let (a, b) = self.thresholds();
        exponent as i64 >= if has_dlog { b } else { a }
    }

    /// True when every term admitted by `self` is admitted by `other`.
    pub fn within(&self, other: &PoleCondition) -> bool {
        let (a, b) = self.thresholds();
        let (c, d) = other.thresholds();
        a >= c && b >= d
    }
}

impl fmt::Display for PoleCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoleCondition::Unbounded => write!(f, "laurent"),
            PoleCondition::Pole(b) => write!(f, "pole({b})"),
            PoleCondition::Regular => write!(f, "regular"),
        }
    }
}

/// A complex `C / C'` where `C`, `C'` are cut out by per-variable pole
/// conditions, with coefficients in Z/p^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexSpec {
    roster: VarRoster,
    p: u64,
    precision: u32,
    conditions: Vec<PoleCondition>,
    quotient: Option<Vec<PoleCondition>>,
}

impl ComplexSpec {
    fn with_conditions(roster: &VarRoster, p: u64, n: u32, cond: impl Fn(usize) -> PoleCondition) -> Result<Self> {
        Modulus::new(p, n)?;
        Ok(ComplexSpec {
            roster: roster.clone(),
            p,
            precision: n,
            conditions: (0..roster.len()).map(|i| if roster.is_log(i) { cond(i) } else { PoleCondition::Regular }).collect(),
            quotient: None,
        })
    }

    /// `t^-b Ω•(log)` over Z/p^n.
    pub fn log_poles(roster: &VarRoster, b: &PoleVector, p: u64, n: u32) -> Result<Self> {
        Self::with_conditions(roster, p, n, |i| PoleCondition::Pole(b.get(i)))
    }

    /// The complex of `A[t^-1]` for all log variables.
    pub fn laurent(roster: &VarRoster, p: u64, n: u32) -> Result<Self> {
        Self::with_conditions(roster, p, n, |_| PoleCondition::Unbounded)
    }

    /// The complex `Ω•_A` without log poles.
    pub fn regular(roster: &VarRoster, p: u64, n: u32) -> Result<Self> {
        Self::with_conditions(roster, p, n, |_| PoleCondition::Regular)
    }

    /// Replaces the condition on one log variable.
    pub fn with_condition(mut self, var: &str, c: PoleCondition) -> Result<Self> {
        let i = self.roster.require_log(var)?;
        self.conditions[i] = c;
        Ok(self)
    }

    /// The quotient by the subcomplex cut out by `sub`.
    pub fn quotient_by(mut self, sub: Vec<PoleCondition>) -> Result<Self> {
        if sub.len() != self.roster.len() {
            return Err(Error::DimensionMismatch { expected: self.roster.len(), got: sub.len() });
        }
        let sub: Vec<PoleCondition> =
            sub.into_iter().enumerate().map(|(i, c)| if self.roster.is_log(i) { c } else { PoleCondition::Regular }).collect();
        for (i, (s, c)) in sub.iter().zip(&self.conditions).enumerate() {
            if !s.within(c) {
                return Err(Error::UnsupportedSpec(format!(
                    "quotient condition {s} on '{}' is not contained in {c}",
                    self.roster.name(i)
                )));
            }
        }
        self.quotient = Some(sub);
        Ok(self)
    }

    /// `t^-b Ω• / t^-b' Ω•` for `b' <= b`.
    pub fn quotient_by_poles(self, b_sub: &PoleVector) -> Result<Self> {
        let sub = (0..self.roster.len()).map(|i| PoleCondition::Pole(b_sub.get(i))).collect();
        self.quotient_by(sub)
    }

    /// The same complex with coefficients reduced to Z/p^m, `m <= k`.
    pub fn reduced(&self, m: u32) -> Result<Self> {
        if m == 0 || m > self.precision {
            return Err(Error::InvalidArgument(format!("reduction precision {m} not in 1..={}", self.precision)));
        }
        let mut s = self.clone();
        s.precision = m;
        Ok(s)
    }

    pub fn roster(&self) -> &VarRoster {
        &self.roster
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.p, self.precision).expect("validated at construction")
    }

    pub fn conditions(&self) -> &[PoleCondition] {
        &self.conditions
    }

    pub fn quotient(&self) -> Option<&[PoleCondition]> {
        self.quotient.as_deref()
    }

    fn admitted(&self, conds: &[PoleCondition], s: Subset, e: &[i32]) -> bool {
        (0..e.len()).all(|i| if self.roster.is_log(i) { conds[i].admits(e[i], s.contains(i)) } else { e[i] >= 0 })
    }

    /// True when `x^e eps_S` lies in the ambient complex `C`.
    pub fn in_ambient(&self, s: Subset, e: &[i32]) -> bool {
        self.admitted(&self.conditions, s, e)
    }

    /// True when `x^e eps_S` lies in the subcomplex `C'` (zero in the quotient).
    pub fn in_sub(&self, s: Subset, e: &[i32]) -> bool {
        self.quotient.as_ref().is_some_and(|q| self.admitted(q, s, e))
    }

    /// True when `x^e eps_S` is a basis element of `C / C'`.
    pub fn is_basis(&self, s: Subset, e: &[i32]) -> bool {
        self.in_ambient(s, e) && !self.in_sub(s, e)
    }

    /// True when every term of `w` lies in the ambient complex.
    pub fn contains_form(&self, w: &LogForm) -> bool {
        w.roster() == &self.roster && w.terms().all(|(s, e, _)| self.in_ambient(s, e))
    }

    /// The image of `w` in `C / C'` with coefficients mod p^k, kept at the
    /// modulus of `w`.
    pub fn project(&self, w: &LogForm) -> Result<LogForm> {
        if w.roster() != &self.roster {
            return Err(Error::RosterMismatch(format!("[{}] vs [{}]", w.roster(), self.roster)));
        }
        if w.modulus().p() != self.p || w.modulus().precision() < self.precision {
            return Err(Error::ModulusMismatch(format!("{} for a complex over Z/{}^{}", w.modulus(), self.p, self.precision)));
        }
        let pk = self.p.pow(self.precision);
        let mut terms = Vec::new();
        for (s, e, c) in w.terms() {
            if !self.in_ambient(s, e) {
                return Err(Error::InvalidArgument(format!("term {e:?} on {s:?} lies outside the complex")));
            }
            if !self.in_sub(s, e) {
                terms.push(((s, e.clone()), c % pk));
            }
        }
        Ok(LogForm::from_raw(&self.roster, w.modulus(), w.degree(), terms))
    }

    /// `d` in the complex.
    pub fn d(&self, w: &LogForm) -> Result<LogForm> {
        self.project(&w.d())
    }

    pub fn is_closed(&self, w: &LogForm) -> Result<bool> {
        Ok(self.d(&self.project(w)?)?.is_zero())
    }

    /// The finite complex in multidegree `mu`.
    pub fn piece(&self, mu: &[i32]) -> Piece {
        Piece::new(self, mu)
    }

    /// True when `w` is a boundary in the complex.
    pub fn is_exact(&self, w: &LogForm) -> Result<bool> {
        Ok(self.primitive(w)?.is_some())
    }

    /// Some `η` with `dη = w` in the complex, if one exists.
    pub fn primitive(&self, w: &LogForm) -> Result<Option<LogForm>> {
        let w = self.project(w)?;
        let work = w.modulus();
        let i = w.degree();
        if i == 0 {
            return Ok(if w.is_zero() { Some(LogForm::zero(&self.roster, work, 0)) } else { None });
        }
        let mut eta = LogForm::zero(&self.roster, work, i - 1);
        for (mu, terms) in w.pieces() {
            let pc = self.piece(&mu);
            let v = pc.vector(i, &terms)?;
            let b = pc.boundaries(i, self.precision, work);
            let Some(c) = b.solve(&v) else { return Ok(None) };
            let part = pc.form(i - 1, &c[..pc.dim(i - 1)], work);
            eta = &eta + &part;
        }
        Ok(Some(eta))
    }
}

impl fmt::Display for ComplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cond = |cs: &[PoleCondition]| -> String {
            self.roster.log_indices().map(|i| format!("{}:{}", self.roster.name(i), cs[i])).collect::<Vec<_>>().join(",")
        };
        write!(f, "[{}] over Z/{}^{} with {}", self.roster, self.p, self.precision, cond(&self.conditions))?;
        if let Some(q) = &self.quotient {
            write!(f, " modulo {}", cond(q))?;
        }
        Ok(())
    }
}

/// Inclusive multidegree bounds per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeWindow {
    bounds: Vec<(i32, i32)>,
}

impl DegreeWindow {
    pub fn new(roster: &VarRoster, bounds: Vec<(i32, i32)>) -> Result<Self> {
        if bounds.len() != roster.len() {
            return Err(Error::DimensionMismatch { expected: roster.len(), got: bounds.len() });
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if lo > hi {
                return Err(Error::Window(format!("empty range {lo}:{hi}")));
            }
            if lo < 0 && !roster.is_log(i) {
                return Err(Error::Window(format!("plain variable '{}' has lower bound {lo}", roster.name(i))));
            }
        }
        Ok(DegreeWindow { bounds })
    }

    /// The same range for every variable, with plain lower bounds raised to 0.
    pub fn uniform(roster: &VarRoster, lo: i32, hi: i32) -> Result<Self> {
        let b = (0..roster.len()).map(|i| (if roster.is_log(i) { lo } else { lo.max(0) }, hi)).collect();
        DegreeWindow::new(roster, b)
    }

    /// Parses `LO:HI` (all variables) or a comma-separated list, one per variable.
    pub fn parse(roster: &VarRoster, s: &str) -> Result<Self> {
        let parse_one = |t: &str| -> Result<(i32, i32)> {
            let (a, b) = t.split_once(':').ok_or_else(|| Error::Parse(format!("expected LO:HI, got '{t}'")))?;
            let lo = a.trim().parse().map_err(|_| Error::Parse(format!("bad bound '{a}'")))?;
            let hi = b.trim().parse().map_err(|_| Error::Parse(format!("bad bound '{b}'")))?;
            Ok((lo, hi))
        };
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() == 1 {
            let (lo, hi) = parse_one(parts[0])?;
            if lo > hi {
                return Err(Error::Parse(format!("empty window {lo}:{hi}")));
            }
            DegreeWindow::uniform(roster, lo, hi)
        } else {
            let b = parts.iter().map(|t| parse_one(t)).collect::<Result<Vec<_>>>()?;
            DegreeWindow::new(roster, b).map_err(|e| Error::Parse(e.to_string()))
        }
    }

    pub fn bounds(&self) -> &[(i32, i32)] {
        &self.bounds
    }

    pub fn contains(&self, mu: &[i32]) -> bool {
        mu.len() == self.bounds.len() && mu.iter().zip(&self.bounds).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn count(&self) -> u64 {
        self.bounds.iter().map(|(lo, hi)| (hi - lo + 1) as u64).product()
    }

    /// All multidegrees in lexicographic order.
    pub fn multidegrees(&self) -> Vec<Exponent> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in &self.bounds {
            out = out.into_iter().flat_map(|v| (lo..=hi).map(move |x| {
                let mut w = v.clone();
                w.push(x);
                w
            })).collect();
        }
        out
    }

    /// Restricts one variable to a single value.
    pub fn slice(&self, i: usize, value: i32) -> DegreeWindow {
        let mut b = self.bounds.clone();
        b[i] = (value, value);
        DegreeWindow { bounds: b }
    }

    fn check_budget(&self, roster: &VarRoster) -> Result<()> {
        let cost = self.count().saturating_mul(1 << roster.len());
        if cost > RESOURCE_CAP {
            return Err(Error::Resource(format!("window needs about {cost} coordinates, cap is {RESOURCE_CAP}")));
        }
        Ok(())
    }
}

impl fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.bounds.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        write!(f, "{}", s.join(","))
    }
}

/// The finite subcomplex of one multidegree.
#[derive(Debug, Clone)]
pub struct Piece {
    mu: Exponent,
    basis: Vec<Vec<Subset>>,
    roster: VarRoster,
}

impl Piece {
    fn new(spec: &ComplexSpec, mu: &[i32]) -> Piece {
        let n = spec.roster.len();
        let mut basis = vec![Vec::new(); n + 1];
        for (i, b) in basis.iter_mut().enumerate() {
            for s in Subset::all_of_size(n, i) {
                let e = exponent_of(&spec.roster, mu, s);
                if spec.is_basis(s, &e) {
                    b.push(s);
                }
            }
        }
        Piece { mu: mu.to_vec(), basis, roster: spec.roster.clone() }
    }

    pub fn multidegree(&self) -> &Exponent {
        &self.mu
    }

    pub fn dim(&self, i: usize) -> usize {
        self.basis.get(i).map_or(0, |b| b.len())
    }

    pub fn basis(&self, i: usize) -> &[Subset] {
        self.basis.get(i).map_or(&[], |b| b.as_slice())
    }

    pub fn is_empty(&self) -> bool {
        self.basis.iter().all(|b| b.is_empty())
    }

    pub fn exponent(&self, s: Subset) -> Exponent {
        exponent_of(&self.roster, &self.mu, s)
    }

    /// Matrix of `d` from degree `i` to `i + 1`, rows indexed by the degree-`i` basis.
    pub fn dmatrix(&self, i: usize, work: Modulus) -> Vec<Vec<u64>> {
        let src = self.basis(i);
        let dst = self.basis(i + 1);
        src.iter()
            .map(|&s| {
                let mut row = vec![0; dst.len()];
                for (j, &t) in dst.iter().enumerate() {
                    if t.0 & s.0 == s.0 && t.len() == s.len() + 1 {
                        let v = (t.0 ^ s.0).trailing_zeros() as usize;
                        let c = work.reduce_i64(self.mu[v] as i64);
                        row[j] = if s.count_below(v) % 2 == 0 { c } else { work.neg(c) };
                    }
                }
                row
            })
            .collect()
    }

    fn relation(&self, k: u32, work: Modulus) -> u64 {
        work.pow_p(k)
    }

    /// Cycles of degree `i` in `(Z/p^W)^B / p^k`, including the relation rows.
    pub fn cycles(&self, i: usize, k: u32, work: Modulus) -> HowellMatrix {
        let n0 = self.dim(i);
        let n1 = self.dim(i + 1);
        if n1 == 0 {
            return HowellMatrix::from_residues(work, n0, identity(n0, 1 % work.order()));
        }
        let mut rows = self.dmatrix(i, work);
        let rel = self.relation(k, work);
        if rel != 0 {
            rows.extend(identity(n1, rel));
        }
        let gens: Vec<Vec<u64>> = kernel(work, &rows, n1).into_iter().map(|v| v[..n0].to_vec()).collect();
        HowellMatrix::from_residues(work, n0, gens)
    }

    /// Boundaries of degree `i` plus the relation rows; the transform's first
    /// `dim(i - 1)` coefficients of a solution give a primitive.
    pub fn boundaries(&self, i: usize, k: u32, work: Modulus) -> HowellMatrix {
        let n = self.dim(i);
        let mut rows = if i == 0 { Vec::new() } else { self.dmatrix(i - 1, work) };
        let rel = self.relation(k, work);
        if rel != 0 {
            rows.extend(identity(n, rel));
        }
        HowellMatrix::from_residues(work, n, rows)
    }

    /// Length of `H^i` (log_p of its order) and a generating set of cycles.
    pub fn cohomology(&self, i: usize, k: u32, work: Modulus) -> (u32, Vec<Vec<u64>>) {
        let z = self.cycles(i, k, work);
        let b = self.boundaries(i, k, work);
        let len = z.log_size() - b.log_size();
        if len == 0 {
            return (0, Vec::new());
        }
        let mut acc: Vec<Vec<u64>> = b.raw_rows().to_vec();
        let mut h = b;
        let mut gens = Vec::new();
        for row in z.raw_rows() {
            if !h.contains(row) {
                gens.push(row.clone());
                acc.push(row.clone());
                h = HowellMatrix::from_residues(work, self.dim(i), acc.clone());
            }
        }
        (len, gens)
    }

    /// Coordinates of piece terms `(S, c)` in the degree-`i` basis.
    pub fn vector(&self, i: usize, terms: &[(Subset, u64)]) -> Result<Vec<u64>> {
        let mut v = vec![0; self.dim(i)];
        for &(s, c) in terms {
            let j = self.basis(i).iter().position(|&t| t == s).ok_or_else(|| {
                Error::InvalidArgument(format!("basis word {s:?} is not in the complex at {:?}", self.mu))
            })?;
            v[j] = c;
        }
        Ok(v)
    }

    /// The form with the given coordinates.
    pub fn form(&self, i: usize, v: &[u64], work: Modulus) -> LogForm {
        LogForm::from_raw(
            &self.roster,
            work,
            i,
            self.basis(i).iter().zip(v).filter(|(_, c)| **c != 0).map(|(&s, &c)| ((s, self.exponent(s)), c)),
        )
    }

    pub(crate) fn sparse(&self, v: &[u64]) -> SparseVec {
        v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, &c)| ((self.mu.clone(), j), c)).collect()
    }

    pub(crate) fn boundary_rows(&self, i: usize, k: u32, work: Modulus) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> =
            if i == 0 { Vec::new() } else { self.dmatrix(i - 1, work).iter().map(|r| self.sparse(r)).collect() };
        let rel = self.relation(k, work);
        if rel != 0 {
            rows.extend((0..self.dim(i)).map(|j| {
                let mut s = SparseVec::new();
                s.insert((self.mu.clone(), j), rel);
                s
            }));
        }
        rows
    }
}

fn identity(n: usize, x: u64) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = x;
            r
        })
        .collect()
}

pub(crate) fn exponent_of(roster: &VarRoster, mu: &[i32], s: Subset) -> Exponent {
    let mut e = mu.to_vec();
    for i in s.indices() {
        if !roster.is_log(i) {
            e[i] -= 1;
        }
    }
    e
}

/// A closed form together with the complex its class lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    spec: ComplexSpec,
    rep: LogForm,
}

impl CohClass {
    pub fn new(spec: &ComplexSpec, rep: &LogForm) -> Result<Self> {
        let rep = spec.project(rep)?.with_precision(spec.precision)?;
        if !spec.d(&rep)?.is_zero() {
            return Err(Error::NotClosed(format!("{rep}")));
        }
        Ok(CohClass { spec: spec.clone(), rep })
    }

    pub fn spec(&self) -> &ComplexSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.rep.degree()
    }

    pub fn representative(&self) -> &LogForm {
        &self.rep
    }

    pub fn is_zero(&self) -> Result<bool> {
        self.spec.is_exact(&self.rep)
    }

    /// Equality of classes.
    pub fn same_class(&self, other: &CohClass) -> Result<bool> {
        if self.spec != other.spec {
            return Err(Error::InvalidArgument("classes live in different complexes".into()));
        }
        self.spec.is_exact(&(&self.rep - &other.rep))
    }
}

/// Per-multidegree summary of `H^i` on a window.
#[derive(Debug, Clone, Serialize)]
pub struct PieceCohomology {
    pub multidegree: Exponent,
    pub length: u32,
    #[serde(skip)]
    pub generators: Vec<LogForm>,
}

/// `H^i` piece by piece over the window; pieces with zero cohomology omitted.
pub fn cohomology_pieces(spec: &ComplexSpec, i: usize, w: &DegreeWindow) -> Result<Vec<PieceCohomology>> {
    if w.bounds().len() != spec.roster.len() {
        return Err(Error::DimensionMismatch { expected: spec.roster.len(), got: w.bounds().len() });
    }
    if i > spec.roster.len() {
        return Ok(Vec::new());
    }
    w.check_budget(&spec.roster)?;
    let work = spec.modulus();
    let mut out: Vec<PieceCohomology> = w
        .multidegrees()
        .into_par_iter()
        .filter_map(|mu| {
            let pc = spec.piece(&mu);
            if pc.dim(i) == 0 {
                return None;
            }
            let (len, gens) = pc.cohomology(i, spec.precision, work);
            (len > 0).then(|| PieceCohomology {
                multidegree: mu,
                length: len,
                generators: gens.iter().map(|g| pc.form(i, g, work)).collect(),
            })
        })
        .collect();
    out.sort_by(|a, b| a.multidegree.cmp(&b.multidegree));
    Ok(out)
}

/// Generating classes of `H^i` supported in the window, in multidegree order.
pub fn cohomology_basis(spec: &ComplexSpec, i: usize, w: &DegreeWindow) -> Result<Vec<CohClass>> {
    Ok(cohomology_pieces(spec, i, w)?
        .into_iter()
        .flat_map(|pc| pc.generators.into_iter().map(|rep| CohClass { spec: spec.clone(), rep }))
        .collect())
}

/// Total length of `H^i` over the window.
pub fn cohomology_length(spec: &ComplexSpec, i: usize, w: &DegreeWindow) -> Result<u64> {
    Ok(cohomology_pieces(spec, i, w)?.iter().map(|p| p.length as u64).sum())
}

/// Sparse coordinates of a form (already projected) in the degree-`i` bases.
pub(crate) fn sparse_of(spec: &ComplexSpec, w: &LogForm) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (mu, terms) in w.pieces() {
        let pc = spec.piece(&mu);
        let v = pc.vector(w.degree(), &terms)?;
        for (j, c) in v.into_iter().enumerate() {
            if c != 0 {
                out.insert((mu.clone(), j), c);
            }
        }
    }
    Ok(out)
}

/// Inverse of [`sparse_of`].
pub(crate) fn form_of(spec: &ComplexSpec, i: usize, v: &SparseVec, work: Modulus) -> LogForm {
    let mut by_piece: BTreeMap<&Exponent, Vec<(usize, u64)>> = BTreeMap::new();
    for ((mu, j), &c) in v {
        by_piece.entry(mu).or_default().push((*j, c));
    }
    let mut out = LogForm::zero(&spec.roster, work, i);
    for (mu, entries) in by_piece {
        let pc = spec.piece(mu);
        let mut dense = vec![0; pc.dim(i)];
        for (j, c) in entries {
            dense[j] = c;
        }
        out = &out + &pc.form(i, &dense, work);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roster(s: &str) -> VarRoster {
        VarRoster::parse(s).unwrap()
    }

    #[test]
    fn h0_over_f2_with_no_poles() {
        let r = roster("t:log");
        let spec = ComplexSpec::log_poles(&r, &PoleVector::zero(&r), 2, 1).unwrap();
        let w = DegreeWindow::uniform(&r, -3, 3).unwrap();
        let pcs = cohomology_pieces(&spec, 0, &w).unwrap();
        let degs: Vec<i32> = pcs.iter().map(|p| p.multidegree[0]).collect();
        assert_eq!(degs, vec![0, 2]);
        // Brute force: t^a is closed over F_2 iff a is even.
        for a in 0..=3 {
            let f = LogForm::monomial(&r, spec.modulus(), Subset::empty(), &[a], 1).unwrap();
            assert_eq!(spec.is_closed(&f).unwrap(), a % 2 == 0);
        }
    }

    #[test]
    fn dlog_class_is_nonzero() {
        let r = roster("t:log");
        let spec = ComplexSpec::log_poles(&r, &PoleVector::zero(&r), 3, 1).unwrap();
        let dlog = LogForm::basis(&r, spec.modulus(), &["t"]).unwrap();
        let c = CohClass::new(&spec, &dlog).unwrap();
        assert!(!c.is_zero().unwrap());
        let pcs = cohomology_pieces(&spec, 1, &DegreeWindow::uniform(&r, 0, 0).unwrap()).unwrap();
        assert_eq!(pcs.len(), 1);
        assert_eq!(pcs[0].length, 1);
    }

    #[test]
    fn degree_above_dimension_is_empty() {
        let r = roster("t:log");
        let spec = ComplexSpec::laurent(&r, 2, 1).unwrap();
        assert!(cohomology_basis(&spec, 2, &DegreeWindow::uniform(&r, -2, 2).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn lengths_match_brute_force_over_z4() {
        // t^a dlog t for a ≡ 2 mod 4 is closed; d(t^a) = a t^a dlog t.
        let r = roster("t:log");
        let spec = ComplexSpec::laurent(&r, 2, 2).unwrap();
        for a in -6..=6 {
            let pc = spec.piece(&[a]);
            let work = spec.modulus();
            let (h0, _) = pc.cohomology(0, 2, work);
            let (h1, _) = pc.cohomology(1, 2, work);
            // Brute force: H^0 = {x : a x = 0 mod 4}, H^1 = Z/4 / (a).
            let ker = (0..4).filter(|x| (a * x).rem_euclid(4) == 0).count();
            let img = (0..4).map(|x| (a * x).rem_euclid(4)).collect::<std::collections::BTreeSet<_>>().len();
            assert_eq!(2u32.pow(h0) as usize, ker, "a = {a}");
            assert_eq!(2u32.pow(h1) as usize, 4 / img, "a = {a}");
        }
    }

    #[test]
    fn primitive_solves() {
        let r = roster("t:log, s:plain");
        let spec = ComplexSpec::laurent(&r, 3, 2).unwrap();
        let w = LogForm::parse("3*t^3*s * dlog(t) + t^3 * d(s)", &r, spec.modulus()).unwrap();
        let eta = spec.primitive(&w).unwrap().unwrap();
        assert_eq!(spec.d(&eta).unwrap(), w);
        let bad = LogForm::parse("dlog(t)", &r, spec.modulus()).unwrap();
        assert!(spec.primitive(&bad).unwrap().is_none());
    }

    #[test]
    fn nested_windows_agree() {
        let r = roster("t:log, s:plain");
        let b = PoleVector::new(&r, &[("t", 2)]).unwrap();
        let spec = ComplexSpec::log_poles(&r, &b, 2, 2).unwrap();
        for i in 0..=2 {
            let small = cohomology_pieces(&spec, i, &DegreeWindow::uniform(&r, -3, 3).unwrap()).unwrap();
            let big = cohomology_pieces(&spec, i, &DegreeWindow::uniform(&r, -6, 6).unwrap()).unwrap();
            let w = DegreeWindow::uniform(&r, -3, 3).unwrap();
            let restricted: Vec<(Exponent, u32)> =
                big.iter().filter(|p| w.contains(&p.multidegree)).map(|p| (p.multidegree.clone(), p.length)).collect();
            let small: Vec<(Exponent, u32)> = small.iter().map(|p| (p.multidegree.clone(), p.length)).collect();
            assert_eq!(small, restricted);
        }
    }

    #[test]
    fn quotient_validation() {
        let r = roster("t:log");
        let spec = ComplexSpec::log_poles(&r, &PoleVector::new(&r, &[("t", 1)]).unwrap(), 2, 1).unwrap();
        assert!(spec.clone().quotient_by(vec![PoleCondition::Pole(2)]).is_err());
        assert!(spec.clone().quotient_by(vec![PoleCondition::Regular]).is_ok());
        assert!(spec.reduced(2).is_err());
    }

    #[test]
    fn window_parsing() {
        let r = roster("t:log, s:plain");
        let w = DegreeWindow::parse(&r, "-8:8").unwrap();
        assert_eq!(w.bounds(), &[(-8, 8), (0, 8)]);
        let w = DegreeWindow::parse(&r, "-2:2,0:3").unwrap();
        assert_eq!(w.count(), 20);
        assert!(DegreeWindow::parse(&r, "-2:2,-1:3").is_err());
        assert!(DegreeWindow::parse(&r, "3:2").is_err());
        assert!(DegreeWindow::parse(&r, "x").is_err());
        let huge = DegreeWindow::uniform(&r, -100000, 100000).unwrap();
        let spec = ComplexSpec::laurent(&r, 2, 1).unwrap();
        assert!(matches!(cohomology_pieces(&spec, 0, &huge), Err(Error::Resource(_))));
    }
}
