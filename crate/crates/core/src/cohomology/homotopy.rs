//! The contracting homotopy on a one-step pole quotient.

use serde::Serialize;

use super::{cohomology_length, ComplexSpec, DegreeWindow, PoleCondition};
use crate::error::{Error, Result};
use crate::forms::LogForm;

/// `π^j` on `t^-b Ω / t^-(b-1) Ω` along one log variable `t`: writes a
/// degree-`j` form as `α + β ∧ dlog t` and returns `(-1)^j β`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    spec: ComplexSpec,
    var: usize,
    b: i64,
}

impl Homotopy {
    pub fn spec(&self) -> &ComplexSpec {
        &self.spec
    }

    /// The log variable the quotient is taken along.
    pub fn variable(&self) -> &str {
        self.spec.roster().name(self.var)
    }

    /// The pole order `b`; `d π + π d = b` on the quotient.
    pub fn pole_order(&self) -> i64 {
        self.b
    }

    pub fn apply(&self, w: &LogForm) -> Result<LogForm> {
        let w = self.spec.project(w)?;
        let (_, beta) = w.split_top_variable(self.variable())?;
        let beta = if w.degree() % 2 == 0 { beta } else { beta.neg() };
        self.spec.project(&beta)
    }
}

/// The homotopy for a quotient complex differing from its subcomplex by one
/// pole step along a single log variable.
pub fn homotopy_pi(spec: &ComplexSpec) -> Result<Homotopy> {
    let sub = spec.quotient().ok_or_else(|| Error::UnsupportedSpec("not a quotient complex".into()))?;
    let mut step = None;
    for (i, (c, s)) in spec.conditions().iter().zip(sub).enumerate() {
        if c == s {
            continue;
        }
        match (c, s) {
            (PoleCondition::Pole(b), PoleCondition::Pole(b2)) if *b2 == b - 1 && *b >= 1 && step.is_none() => {
                step = Some((i, *b));
            }
            _ => {
                return Err(Error::UnsupportedSpec(format!(
                    "quotient along '{}' is not a single pole step ({c} modulo {s})",
                    spec.roster().name(i)
                )))
            }
        }
    }
    let (var, b) = step.ok_or_else(|| Error::UnsupportedSpec("the quotient is the zero complex".into()))?;
    Ok(Homotopy { spec: spec.clone(), var, b })
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyReport {
    pub pole_order: i64,
    /// Basis elements on which the identity was checked.
    pub checked: u64,
    pub identity_holds: bool,
    /// Total cohomology length over all degrees on the window.
    pub cohomology_length: u64,
    pub counterexample: Option<String>,
}

impl HomotopyReport {
    /// The identity holds and the complex is acyclic exactly when `p ∤ b`.
    pub fn consistent(&self, p: u64) -> bool {
        self.identity_holds && ((self.pole_order as u64).is_multiple_of(p) || self.cohomology_length == 0)
    }
}

/// Checks `d π^j + π^{j+1} d = b · id` on every basis element of the window
/// and computes the cohomology there.
pub fn verify_homotopy(spec: &ComplexSpec, w: &DegreeWindow) -> Result<HomotopyReport> {
    let h = homotopy_pi(spec)?;
    let m = spec.modulus();
    let n = spec.roster().len();
    let mut report = HomotopyReport {
        pole_order: h.b,
        checked: 0,
        identity_holds: true,
        cohomology_length: 0,
        counterexample: None,
    };
    for mu in w.multidegrees() {
        let pc = spec.piece(&mu);
        for j in 0..=n {
            for &s in pc.basis(j) {
                let x = LogForm::from_raw(spec.roster(), m, j, [((s, pc.exponent(s)), 1)]);
                let lhs = spec.d(&h.apply(&x)?)?.try_add(&h.apply(&spec.d(&x)?)?)?;
                let rhs = spec.project(&x.scale_i64(h.b))?;
                report.checked += 1;
                if lhs != rhs && !(lhs.is_zero() && rhs.is_zero()) {
                    report.identity_holds = false;
                    report.counterexample.get_or_insert(format!("at {x}: {lhs} vs {rhs}"));
                }
            }
        }
    }
    for j in 0..=n {
        report.cohomology_length += cohomology_length(spec, j, w)?;
    }
    Ok(report)
}
