//! Differential forms in the mixed basis `dlog t` (log variables) and `ds`
//! (plain variables) with Laurent coefficients.
//!
//! Basis words are wedges in roster order. In this basis `d` preserves the
//! multidegree `exponent + [v in S and v plain]`, which is what makes the
//! cohomology computations finite.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{parse_product, starts_basis, Exponent, LaurentPoly, VarRoster};
use crate::ring::Modulus;
use crate::text::{Parser, Tok};

/// A set of roster indices, ordered lexicographically as a sorted list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub fn empty() -> Self {
        Subset(0)
    }

    pub fn single(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices(ix: &[usize]) -> Self {
        Subset(ix.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn with(&self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    pub fn without(&self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        let m = self.0;
        (0..32).filter(move |i| m >> i & 1 == 1)
    }

    /// Number of elements below `i`.
    pub fn count_below(&self, i: usize) -> u32 {
        (self.0 & ((1u32 << i) - 1)).count_ones()
    }

    /// Number of elements above `i`.
    pub fn count_above(&self, i: usize) -> u32 {
        (self.0 >> (i + 1)).count_ones()
    }

    /// All subsets of `{0..n}` of size `k`, in lexicographic order.
    pub fn all_of_size(n: usize, k: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(Subset).collect();
        out.sort();
        out
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of `eps_S ∧ eps_T` relative to `eps_{S ∪ T}`; zero on overlap.
pub fn wedge_sign(s: Subset, t: Subset) -> i64 {
    if s.0 & t.0 != 0 {
        return 0;
    }
    let inversions: u32 = t.indices().map(|b| s.count_above(b)).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Allowed pole orders `b_a >= 0` along each log variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PoleVector(Vec<i64>);

impl PoleVector {
    pub fn zero(roster: &VarRoster) -> Self {
        PoleVector(vec![0; roster.len()])
    }

    /// Pole orders for the named log variables; the rest are zero.
    pub fn new(roster: &VarRoster, entries: &[(&str, i64)]) -> Result<Self> {
        let mut v = vec![0; roster.len()];
        for &(name, b) in entries {
            let i = roster.require_log(name)?;
            if b < 0 {
                return Err(Error::InvalidArgument(format!("negative pole order {b}")));
            }
            v[i] = b;
        }
        Ok(PoleVector(v))
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }
}

/// A homogeneous form `Σ c · x^a · eps_S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogForm {
    roster: VarRoster,
    modulus: Modulus,
    degree: usize,
    terms: BTreeMap<(Subset, Exponent), u64>,
}

impl LogForm {
    pub fn zero(roster: &VarRoster, modulus: Modulus, degree: usize) -> Self {
        LogForm { roster: roster.clone(), modulus, degree, terms: BTreeMap::new() }
    }

    /// The degree-0 form `f`.
    pub fn function(f: &LaurentPoly) -> Self {
        let mut w = Self::zero(f.roster(), f.modulus(), 0);
        for (e, c) in f.terms() {
            w.add_term(Subset::empty(), e.clone(), c);
        }
        w
    }

    /// `f · eps_S` for a basis subset.
    pub fn from_component(f: &LaurentPoly, s: Subset) -> Self {
        let mut w = Self::zero(f.roster(), f.modulus(), s.len());
        for (e, c) in f.terms() {
            w.add_term(s, e.clone(), c);
        }
        w
    }

    /// The wedge of basis elements for the named variables, in the given order.
    pub fn basis(roster: &VarRoster, modulus: Modulus, vars: &[&str]) -> Result<Self> {
        let mut w = LogForm::function(&LaurentPoly::one(roster, modulus));
        for v in vars {
            let i = roster.require(v)?;
            let b = LogForm::monomial(roster, modulus, Subset::single(i), &vec![0; roster.len()], 1)?;
            w = w.wedge(&b)?;
        }
        Ok(w)
    }

    /// `c · x^a · eps_S`.
    pub fn monomial(roster: &VarRoster, modulus: Modulus, s: Subset, exp: &[i32], c: i64) -> Result<Self> {
        let f = LaurentPoly::monomial(roster, modulus, exp, c)?;
        if s.indices().any(|i| i >= roster.len()) {
            return Err(Error::DimensionMismatch { expected: roster.len(), got: s.indices().last().unwrap_or(0) + 1 });
        }
        Ok(LogForm::from_component(&f, s))
    }

    pub(crate) fn from_raw(
        roster: &VarRoster,
        modulus: Modulus,
        degree: usize,
        terms: impl IntoIterator<Item = ((Subset, Exponent), u64)>,
    ) -> Self {
        let mut w = Self::zero(roster, modulus, degree);
        for ((s, e), c) in terms {
            debug_assert_eq!(s.len(), degree);
            w.add_term(s, e, c % modulus.order());
        }
        w
    }

    pub fn roster(&self) -> &VarRoster {
        &self.roster
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, &Exponent, u64)> + '_ {
        self.terms.iter().map(|((s, e), &c)| (*s, e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the basis word `eps_S`.
    pub fn component(&self, s: Subset) -> LaurentPoly {
        LaurentPoly::from_terms(
            &self.roster,
            self.modulus,
            self.terms.range((s, Exponent::new())..).take_while(|((t, _), _)| *t == s).map(|((_, e), &c)| (e.clone(), c)),
        )
    }

    /// Basis words with a nonzero coefficient.
    pub fn support(&self) -> Vec<Subset> {
        let mut v: Vec<Subset> = self.terms.keys().map(|(s, _)| *s).collect();
        v.dedup();
        v
    }

    pub(crate) fn add_term(&mut self, s: Subset, e: Exponent, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        use std::collections::btree_map::Entry;
        match self.terms.entry((s, e)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let x = m.add(*o.get(), c);
                if x == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = x;
                }
            }
        }
    }

    fn check(&self, other: &LogForm) -> Result<()> {
        if self.roster != other.roster {
            return Err(Error::RosterMismatch(format!("[{}] vs [{}]", self.roster, other.roster)));
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(format!("{} vs {}", self.modulus, other.modulus)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LogForm) -> Result<LogForm> {
        self.check(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "cannot add forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut r = if self.is_zero() { LogForm::zero(&self.roster, self.modulus, other.degree) } else { self.clone() };
        for ((s, e), &c) in &other.terms {
            r.add_term(*s, e.clone(), c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &LogForm) -> Result<LogForm> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> LogForm {
        self.scale(self.modulus.neg(1 % self.modulus.order()))
    }

    pub fn scale(&self, k: u64) -> LogForm {
        let m = self.modulus;
        let mut r = LogForm::zero(&self.roster, m, self.degree);
        for ((s, e), &c) in &self.terms {
            r.add_term(*s, e.clone(), m.mul(c, k % m.order()));
        }
        r
    }

    pub fn scale_i64(&self, k: i64) -> LogForm {
        self.scale(self.modulus.reduce_i64(k))
    }

    /// `f · ω` for a function `f`.
    pub fn mul_poly(&self, f: &LaurentPoly) -> Result<LogForm> {
        LogForm::function(f).wedge(self)
    }

    pub fn wedge(&self, other: &LogForm) -> Result<LogForm> {
        self.check(other)?;
        let m = self.modulus;
        let mut r = LogForm::zero(&self.roster, m, self.degree + other.degree);
        for ((s, a), &x) in &self.terms {
            for ((t, b), &y) in &other.terms {
                let sign = wedge_sign(*s, *t);
                if sign == 0 {
                    continue;
                }
                let e: Exponent = a.iter().zip(b).map(|(i, j)| i + j).collect();
                let c = m.mul(x, y);
                r.add_term(Subset(s.0 | t.0), e, if sign > 0 { c } else { m.neg(c) });
            }
        }
        Ok(r)
    }

    /// Exterior derivative.
    pub fn d(&self) -> LogForm {
        let m = self.modulus;
        let n = self.roster.len();
        let mut r = LogForm::zero(&self.roster, m, self.degree + 1);
        for ((s, e), &c) in &self.terms {
            for v in 0..n {
                if s.contains(v) || e[v] == 0 {
                    continue;
                }
                let mut f = e.clone();
                if !self.roster.is_log(v) {
                    f[v] -= 1;
                }
                let k = m.mul(c, m.reduce_i64(e[v] as i64));
                let k = if s.count_below(v) % 2 == 0 { k } else { m.neg(k) };
                r.add_term(s.with(v), f, k);
            }
        }
        r
    }

    /// Multidegree of a basis term: exponent plus one for each plain variable in `S`.
    pub fn multidegree(roster: &VarRoster, s: Subset, e: &[i32]) -> Exponent {
        let mut mu = e.to_vec();
        for i in s.indices() {
            if !roster.is_log(i) {
                mu[i] += 1;
            }
        }
        mu
    }

    /// Terms grouped by multidegree.
    pub fn pieces(&self) -> BTreeMap<Exponent, Vec<(Subset, u64)>> {
        let mut out: BTreeMap<Exponent, Vec<(Subset, u64)>> = BTreeMap::new();
        for ((s, e), &c) in &self.terms {
            out.entry(LogForm::multidegree(&self.roster, *s, e)).or_default().push((*s, c));
        }
        out
    }

    /// True iff `t^b ω` has no negative exponent in any log variable.
    pub fn pole_membership(&self, b: &PoleVector) -> bool {
        self.terms.keys().all(|(_, e)| (0..e.len()).all(|i| !self.roster.is_log(i) || e[i] as i64 >= -b.get(i)))
    }

    /// Writes `ω = α + β ∧ dlog t` with `α`, `β` free of `dlog t`.
    pub fn split_top_variable(&self, t: &str) -> Result<(LogForm, LogForm)> {
        let ti = self.roster.require_log(t)?;
        let m = self.modulus;
        let mut alpha = LogForm::zero(&self.roster, m, self.degree);
        let mut beta = LogForm::zero(&self.roster, m, self.degree.saturating_sub(1));
        for ((s, e), &c) in &self.terms {
            if s.contains(ti) {
                let c = if s.count_above(ti) % 2 == 0 { c } else { m.neg(c) };
                beta.add_term(s.without(ti), e.clone(), c);
            } else {
                alpha.add_term(*s, e.clone(), c);
            }
        }
        Ok((alpha, beta))
    }

    /// Coefficients after replacing `dlog t` by `dt / t`: each component
    /// containing `dlog t` is divided by `t`.
    pub fn dt_basis_components(&self, t: usize) -> Vec<(Subset, LaurentPoly)> {
        self.support()
            .into_iter()
            .map(|s| {
                let f = self.component(s);
                if s.contains(t) {
                    let mut sh = vec![0; self.roster.len()];
                    sh[t] = -1;
                    (s, f.shift(&sh))
                } else {
                    (s, f)
                }
            })
            .collect()
    }

    /// True iff the form lies in `Ω^i` without log pole along the log
    /// variable `t`: all coefficients in the `dt` basis are integral in `t`.
    pub fn regular_in(&self, t: usize) -> bool {
        self.dt_basis_components(t).iter().all(|(_, f)| f.is_integral_in(t))
    }

    /// The pair (ω ∈ t·Ω^i(log t), ω ∧ dlog t ∈ Ω^{i+1}) for a form `ω ∈ Ω^i`.
    pub fn lemma42_criterion(&self, t: &str) -> Result<(bool, bool)> {
        let ti = self.roster.require_log(t)?;
        if !self.regular_in(ti) {
            return Err(Error::Precondition(format!("form has a pole along {t}: {self}")));
        }
        let lhs = self.terms.keys().all(|(_, e)| e[ti] >= 1);
        let dlog_t = LogForm::basis(&self.roster, self.modulus, &[t])?;
        let rhs = self.wedge(&dlog_t)?.regular_in(ti);
        Ok((lhs, rhs))
    }

    /// Reduces or lifts coefficients to another precision.
    pub fn with_precision(&self, prec: u32) -> Result<LogForm> {
        let m = self.modulus.with_precision(prec)?;
        Ok(LogForm::from_raw(&self.roster, m, self.degree, self.terms.iter().map(|((s, e), &c)| ((*s, e.clone()), c))))
    }

    /// Moves the form to another roster by sending variable `i` to `map[i]`.
    pub fn remap(&self, target: &VarRoster, map: &[usize]) -> Result<LogForm> {
        let m = self.modulus;
        let mut r = LogForm::zero(target, m, self.degree);
        for ((s, e), &c) in &self.terms {
            let mut f = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                f[map[i]] += x;
            }
            for i in 0..target.len() {
                if f[i] < 0 && !target.is_log(i) {
                    return Err(Error::RosterMismatch(format!("negative exponent of plain '{}'", target.name(i))));
                }
            }
            // Relabel the basis word and restore roster order.
            let idx: Vec<usize> = s.indices().map(|i| map[i]).collect();
            let mut sign = 1i64;
            for a in 0..idx.len() {
                for b in a + 1..idx.len() {
                    if idx[a] > idx[b] {
                        sign = -sign;
                    }
                }
            }
            let c = if sign > 0 { c } else { m.neg(c) };
            r.add_term(Subset::from_indices(&idx), f, c);
        }
        Ok(r)
    }

    /// Parses e.g. `t^-1 * dlog(t) w d(s) + 3*s^2 * d(s) ∧ dlog(t)`.
    pub fn parse(s: &str, roster: &VarRoster, modulus: Modulus) -> Result<LogForm> {
        let mut p = Parser::new(s)?;
        let mut acc: Option<LogForm> = None;
        let mut neg = if p.eat(&Tok::Minus) {
            true
        } else {
            p.eat(&Tok::Plus);
            false
        };
        loop {
            let t = parse_form_term(&mut p, roster, modulus)?;
            let t = if neg { t.neg() } else { t };
            acc = Some(match acc {
                None => t,
                Some(a) => {
                    if a.degree != t.degree && !a.is_zero() && !t.is_zero() {
                        return Err(Error::Parse("form is not homogeneous".into()));
                    }
                    a.try_add(&t)?
                }
            });
            if p.eat(&Tok::Plus) {
                neg = false;
            } else if p.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        p.finish()?;
        Ok(acc.expect("at least one term"))
    }
}

fn parse_form_term(p: &mut Parser, roster: &VarRoster, m: Modulus) -> Result<LogForm> {
    let coeff = if starts_basis(p, 0) {
        LaurentPoly::one(roster, m)
    } else {
        let c = parse_product(p, roster, m)?;
        if p.peek() == Some(&Tok::Star) && starts_basis(p, 1) {
            p.next();
        } else {
            return Ok(LogForm::function(&c));
        }
        c
    };
    let mut word = LogForm::function(&coeff);
    let mut seen = Subset::empty();
    loop {
        let kind = p.ident()?;
        p.expect(&Tok::LParen)?;
        let name = p.ident()?;
        p.expect(&Tok::RParen)?;
        let i = roster.index(&name).ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
        if seen.contains(i) {
            return Err(Error::Parse(format!("variable '{name}' repeated in a basis word")));
        }
        seen = seen.with(i);
        let zero = vec![0; roster.len()];
        let mut unit = zero.clone();
        let factor = match (kind.as_str(), roster.is_log(i)) {
            ("dlog", true) => LogForm::monomial(roster, m, Subset::single(i), &zero, 1)?,
            ("dlog", false) => return Err(Error::Parse(format!("dlog of plain variable '{name}'"))),
            // d(t) = t dlog t for a log variable
            (_, true) => {
                unit[i] = 1;
                LogForm::monomial(roster, m, Subset::single(i), &unit, 1)?
            }
            (_, false) => LogForm::monomial(roster, m, Subset::single(i), &zero, 1)?,
        };
        word = word.wedge(&factor)?;
        let wedge_next = match p.peek() {
            Some(Tok::Wedge) => true,
            Some(Tok::Ident(w)) if w == "w" => true,
            _ => false,
        };
        if !wedge_next {
            return Ok(word);
        }
        p.next();
        if !starts_basis(p, 0) {
            return Err(p.error("expected d(..) or dlog(..) after wedge"));
        }
    }
}

impl fmt::Display for LogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, ((s, e), &c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let constant = e.iter().all(|&x| x == 0);
            let mut mono = String::new();
            if constant {
                if c != 1 || s.is_empty() {
                    mono = c.to_string();
                }
            } else {
                if c != 1 {
                    mono = format!("{c}*");
                }
                LaurentPoly::fmt_monomial(&self.roster, e, &mut mono);
            }
            out.push_str(&mono);
            if !s.is_empty() {
                if !mono.is_empty() {
                    out.push_str(" * ");
                }
                let word: Vec<String> = s
                    .indices()
                    .map(|i| {
                        if self.roster.is_log(i) {
                            format!("dlog({})", self.roster.name(i))
                        } else {
                            format!("d({})", self.roster.name(i))
                        }
                    })
                    .collect();
                out.push_str(&word.join(" w "));
            }
        }
        f.write_str(&out)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl std::ops::$tr<&LogForm> for &LogForm {
            type Output = LogForm;
            /// Panics on roster or modulus mismatch; the `try_` methods report it.
            fn $m(self, rhs: &LogForm) -> LogForm {
                self.$call(rhs).expect("operands share roster and modulus")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
