//! Sparse Laurent polynomials over Z/p^N: polynomial in plain variables,
//! Laurent in log variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Modulus, Scalar};
use crate::text::{Parser, Tok};

/// Multi-exponent, one entry per roster variable.
pub type Exponent = Vec<i32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Log,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub kind: VarKind,
}

/// Ordered list of variables. Only log variables admit negative exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRoster(Arc<[Var]>);

const MAX_VARS: usize = 16;

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !matches!(s, "d" | "dlog" | "w" | "W")
}

impl VarRoster {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, VarKind)>) -> Result<Self> {
        let vars: Vec<Var> = vars.into_iter().map(|(n, kind)| Var { name: n.into(), kind }).collect();
        if vars.len() > MAX_VARS {
            return Err(Error::InvalidArgument(format!("at most {MAX_VARS} variables")));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(&v.name) {
                return Err(Error::InvalidArgument(format!("invalid variable name '{}'", v.name)));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::InvalidArgument(format!("duplicate variable '{}'", v.name)));
            }
        }
        Ok(VarRoster(vars.into()))
    }

    /// Parses `t:log, s:plain`, optionally prefixed by `vars:`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix("vars:").unwrap_or(s);
        let mut vars = Vec::new();
        for item in body.split(',') {
            let (name, kind) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected name:kind, got '{}'", item.trim())))?;
            let kind = match kind.trim() {
                "log" => VarKind::Log,
                "plain" => VarKind::Plain,
                k => return Err(Error::Parse(format!("unknown variable kind '{k}'"))),
            };
            vars.push((name.trim().to_string(), kind));
        }
        if vars.is_empty() {
            return Err(Error::Parse("empty roster".into()));
        }
        VarRoster::new(vars).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i].name
    }

    pub fn kind(&self, i: usize) -> VarKind {
        self.0[i].kind
    }

    pub fn is_log(&self, i: usize) -> bool {
        self.0[i].kind == VarKind::Log
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name).ok_or_else(|| Error::RosterMismatch(format!("unknown variable '{name}'")))
    }

    pub fn require_log(&self, name: &str) -> Result<usize> {
        let i = self.require(name)?;
        if !self.is_log(i) {
            return Err(Error::InvalidArgument(format!("'{name}' is not a log variable")));
        }
        Ok(i)
    }

    pub fn log_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.is_log(i))
    }

    /// The same roster with variable `i` renamed.
    pub fn renamed(&self, i: usize, name: &str) -> Result<Self> {
        let mut v: Vec<(String, VarKind)> = self.0.iter().map(|v| (v.name.clone(), v.kind)).collect();
        v[i].0 = name.to_string();
        VarRoster::new(v)
    }

    /// The roster with variable `i` removed.
    pub fn without(&self, i: usize) -> Self {
        let v: Vec<(String, VarKind)> = self
            .0
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| (v.name.clone(), v.kind))
            .collect();
        VarRoster::new(v).expect("sub-roster of a valid roster")
    }
}

impl Serialize for VarRoster {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VarRoster {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VarRoster::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for VarRoster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let k = match v.kind {
                VarKind::Log => "log",
                VarKind::Plain => "plain",
            };
            write!(f, "{}:{k}", v.name)?;
        }
        Ok(())
    }
}

/// An element of Z/p^N[s][t, t^-1] stored as a sorted map from exponents to
/// nonzero residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    roster: VarRoster,
    modulus: Modulus,
    terms: BTreeMap<Exponent, u64>,
}

impl LaurentPoly {
    pub fn zero(roster: &VarRoster, modulus: Modulus) -> Self {
        LaurentPoly { roster: roster.clone(), modulus, terms: BTreeMap::new() }
    }

    pub fn constant(roster: &VarRoster, modulus: Modulus, c: i64) -> Self {
        let mut p = Self::zero(roster, modulus);
        p.add_term(vec![0; roster.len()], modulus.reduce_i64(c));
        p
    }

    pub fn one(roster: &VarRoster, modulus: Modulus) -> Self {
        Self::constant(roster, modulus, 1)
    }

    /// `c * x^exp`; plain exponents must be nonnegative.
    pub fn monomial(roster: &VarRoster, modulus: Modulus, exp: &[i32], c: i64) -> Result<Self> {
        check_exponent(roster, exp)?;
        let mut p = Self::zero(roster, modulus);
        p.add_term(exp.to_vec(), modulus.reduce_i64(c));
        Ok(p)
    }

    pub fn var(roster: &VarRoster, modulus: Modulus, name: &str) -> Result<Self> {
        let i = roster.require(name)?;
        let mut e = vec![0; roster.len()];
        e[i] = 1;
        Self::monomial(roster, modulus, &e, 1)
    }

    pub(crate) fn from_terms(
        roster: &VarRoster,
        modulus: Modulus,
        terms: impl IntoIterator<Item = (Exponent, u64)>,
    ) -> Self {
        let mut p = Self::zero(roster, modulus);
        for (e, c) in terms {
            p.add_term(e, c % modulus.order());
        }
        p
    }

    pub fn roster(&self) -> &VarRoster {
        &self.roster
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, u64)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: &[i32]) -> Scalar {
        Scalar::new(self.terms.get(exp).copied().unwrap_or(0) as i64, self.modulus)
    }


    /// Adds `c * x^exp` in place.
    pub(crate) fn add_term(&mut self, exp: Exponent, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = m.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &LaurentPoly) -> Result<()> {
        if self.roster != other.roster {
            return Err(Error::RosterMismatch(format!("[{}] vs [{}]", self.roster, other.roster)));
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(format!("{} vs {}", self.modulus, other.modulus)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, &c) in &other.terms {
            r.add_term(e.clone(), c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let m = self.modulus;
        let mut acc: HashMap<Exponent, u64> = HashMap::new();
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(i, j)| i + j).collect();
                let v = acc.entry(e).or_insert(0);
                *v = m.add(*v, m.mul(x, y));
            }
        }
        Ok(LaurentPoly {
            roster: self.roster.clone(),
            modulus: m,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        })
    }

    pub fn neg(&self) -> LaurentPoly {
        let m = self.modulus;
        LaurentPoly {
            roster: self.roster.clone(),
            modulus: m,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), m.neg(c))).collect(),
        }
    }

    /// Multiplies by a residue.
    pub fn scale(&self, k: u64) -> LaurentPoly {
        let m = self.modulus;
        let k = k % m.order();
        LaurentPoly {
            roster: self.roster.clone(),
            modulus: m,
            terms: self
                .terms
                .iter()
                .filter_map(|(e, &c)| {
                    let v = m.mul(c, k);
                    (v != 0).then(|| (e.clone(), v))
                })
                .collect(),
        }
    }

    pub fn scale_i64(&self, k: i64) -> LaurentPoly {
        self.scale(self.modulus.reduce_i64(k))
    }

    /// Multiplies by the monomial `x^exp`.
    pub fn shift(&self, exp: &[i32]) -> LaurentPoly {
        LaurentPoly {
            roster: self.roster.clone(),
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().zip(exp).map(|(a, b)| a + b).collect(), c))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut r = LaurentPoly::one(&self.roster, self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        r
    }

    /// Smallest and largest exponent of variable `i` over the support.
    pub fn exponent_range(&self, i: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    /// True when no exponent of variable `i` is negative.
    pub fn is_integral_in(&self, i: usize) -> bool {
        self.terms.keys().all(|e| e[i] >= 0)
    }

    /// True when no exponent is negative.
    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Smallest p-adic valuation of a coefficient; the precision for zero.
    pub fn valuation(&self) -> u32 {
        self.terms.values().map(|&c| self.modulus.valuation(c)).min().unwrap_or(self.modulus.precision())
    }

    /// Reinterprets residues at another precision: reduction when lowering,
    /// the canonical representative lift when raising.
    pub fn with_precision(&self, prec: u32) -> Result<LaurentPoly> {
        let m = self.modulus.with_precision(prec)?;
        Ok(LaurentPoly::from_terms(&self.roster, m, self.terms.iter().map(|(e, &c)| (e.clone(), c))))
    }

    /// Divides every coefficient by `p^k`, landing at precision `N - k`.
    pub fn div_p_pow(&self, k: u32) -> Result<LaurentPoly> {
        if k == 0 {
            return Ok(self.clone());
        }
        let m = self.modulus;
        if k >= m.precision() {
            return Err(Error::Precision(format!("cannot divide by p^{k} in {m}")));
        }
        let pk = m.p().pow(k);
        let target = m.with_precision(m.precision() - k)?;
        let mut out = LaurentPoly::zero(&self.roster, target);
        for (e, &c) in &self.terms {
            if c % pk != 0 {
                return Err(Error::Precision(format!("coefficient {c} not divisible by {pk}")));
            }
            out.add_term(e.clone(), (c / pk) % target.order());
        }
        Ok(out)
    }

    /// Moves the polynomial to another roster by sending variable `i` to `map[i]`.
    pub fn remap(&self, target: &VarRoster, map: &[usize]) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(target, self.modulus);
        for (e, &c) in &self.terms {
            let mut f = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    f[map[i]] += x;
                }
            }
            check_exponent(target, &f)?;
            out.add_term(f, c);
        }
        Ok(out)
    }

    /// Inverse of a unit `c * t^a * (1 + w)` with `c` a unit scalar, `t^a` a
    /// monomial in log variables and `w` divisible by p.
    pub fn invert_unit(&self) -> Result<LaurentPoly> {
        let m = self.modulus;
        let mut lead = self.terms.iter().filter(|(_, &c)| c % m.p() != 0);
        let (Some((a, &c)), None) = (lead.next(), lead.next()) else {
            return Err(Error::NotAUnit(format!("{self}")));
        };
        if a.iter().enumerate().any(|(i, &x)| x != 0 && !self.roster.is_log(i)) {
            return Err(Error::NotAUnit(format!("{self}: leading monomial involves a plain variable")));
        }
        let cinv = m.inv(c).expect("unit coefficient");
        let neg_a: Exponent = a.iter().map(|x| -x).collect();
        // v = c^-1 t^-a u = 1 + w
        let v = self.shift(&neg_a).scale(cinv);
        let one = LaurentPoly::one(&self.roster, m);
        let minus_w = one.try_sub(&v)?;
        let mut sum = one.clone();
        let mut pw = one;
        for _ in 1..m.precision() {
            pw = &pw * &minus_w;
            if pw.is_zero() {
                break;
            }
            sum = &sum + &pw;
        }
        Ok(sum.shift(&neg_a).scale(cinv))
    }

    /// Ring homomorphism sending `var` to `image` and every other variable to
    /// the variable of the same name in the image's roster.
    pub fn substitute(&self, var: &str, image: &LaurentPoly) -> Result<LaurentPoly> {
        let vi = self.roster.require(var)?;
        if image.modulus != self.modulus {
            return Err(Error::ModulusMismatch(format!("{} vs {}", image.modulus, self.modulus)));
        }
        let target = image.roster.clone();
        let mut map = vec![usize::MAX; self.roster.len()];
        for i in 0..self.roster.len() {
            if i != vi {
                map[i] = target.require(self.roster.name(i))?;
            }
        }
        let needs_inverse = self.terms.keys().any(|e| e[vi] < 0);
        let inverse = if needs_inverse { Some(image.invert_unit()?) } else { None };
        let mut cache: HashMap<i32, LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero(&target, self.modulus);
        for (e, &c) in &self.terms {
            let k = e[vi];
            let img = cache
                .entry(k)
                .or_insert_with(|| {
                    if k >= 0 {
                        image.pow(k as u32)
                    } else {
                        inverse.as_ref().expect("computed above").pow((-k) as u32)
                    }
                })
                .clone();
            let mut f = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if i != vi && x != 0 {
                    f[map[i]] += x;
                }
            }
            check_exponent(&target, &f)?;
            let term = img.shift(&f).scale(c);
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitutes `var -> u * target_var^e`.
    pub fn substitute_power(&self, var: &str, u: &LaurentPoly, target_var: &str, e: u32) -> Result<LaurentPoly> {
        if e < 1 {
            return Err(Error::InvalidArgument("ramification degree must be at least 1".into()));
        }
        u.invert_unit()?;
        let j = u.roster.require(target_var)?;
        let mut x = vec![0; u.roster.len()];
        x[j] = e as i32;
        self.substitute(var, &u.shift(&x))
    }

    /// The Frobenius lift: identity on coefficients, `x -> x^p` on variables.
    pub fn frobenius_lift(&self) -> LaurentPoly {
        let p = self.modulus.p() as i32;
        LaurentPoly {
            roster: self.roster.clone(),
            modulus: self.modulus,
            terms: self.terms.iter().map(|(e, &c)| (e.iter().map(|x| x * p).collect(), c)).collect(),
        }
    }

    /// Parses the text grammar, e.g. `3*t^-2*s + 1`.
    pub fn parse(s: &str, roster: &VarRoster, modulus: Modulus) -> Result<LaurentPoly> {
        let mut p = Parser::new(s)?;
        let f = parse_poly(&mut p, roster, modulus)?;
        p.finish()?;
        Ok(f)
    }

    pub(crate) fn fmt_monomial(roster: &VarRoster, e: &[i32], out: &mut String) {
        let mut first = true;
        for (i, &x) in e.iter().enumerate() {
            if x != 0 {
                if !first {
                    out.push('*');
                }
                first = false;
                out.push_str(roster.name(i));
                if x != 1 {
                    out.push_str(&format!("^{x}"));
                }
            }
        }
    }
}

fn check_exponent(roster: &VarRoster, exp: &[i32]) -> Result<()> {
    if exp.len() != roster.len() {
        return Err(Error::DimensionMismatch { expected: roster.len(), got: exp.len() });
    }
    for (i, &x) in exp.iter().enumerate() {
        if x < 0 && !roster.is_log(i) {
            return Err(Error::InvalidArgument(format!(
                "negative exponent of plain variable '{}'",
                roster.name(i)
            )));
        }
    }
    Ok(())
}

pub(crate) fn parse_poly(p: &mut Parser, roster: &VarRoster, m: Modulus) -> Result<LaurentPoly> {
    let mut acc = LaurentPoly::zero(roster, m);
    let mut neg = if p.eat(&Tok::Minus) {
        true
    } else {
        p.eat(&Tok::Plus);
        false
    };
    loop {
        let t = parse_product(p, roster, m)?;
        acc = &acc + &if neg { t.neg() } else { t };
        if p.eat(&Tok::Plus) {
            neg = false;
        } else if p.eat(&Tok::Minus) {
            neg = true;
        } else {
            return Ok(acc);
        }
    }
}

pub(crate) fn parse_product(p: &mut Parser, roster: &VarRoster, m: Modulus) -> Result<LaurentPoly> {
    let mut acc = parse_factor(p, roster, m)?;
    while p.peek() == Some(&Tok::Star) && !starts_basis(p, 1) {
        p.next();
        let f = parse_factor(p, roster, m)?;
        acc = &acc * &f;
    }
    Ok(acc)
}

/// True when the tokens at offset `k` begin a `d(`/`dlog(` basis word.
pub(crate) fn starts_basis(p: &Parser, k: usize) -> bool {
    matches!(p.peek_at(k), Some(Tok::Ident(s)) if s == "d" || s == "dlog")
        && p.peek_at(k + 1) == Some(&Tok::LParen)
}

fn parse_factor(p: &mut Parser, roster: &VarRoster, m: Modulus) -> Result<LaurentPoly> {
    match p.peek().cloned() {
        Some(Tok::Int(_)) => {
            let c = p.signed_int()?;
            Ok(LaurentPoly::constant(roster, m, c))
        }
        Some(Tok::LParen) => {
            p.next();
            let inner = parse_poly(p, roster, m)?;
            p.expect(&Tok::RParen)?;
            if p.eat(&Tok::Caret) {
                let k = p.signed_int()?;
                if k >= 0 {
                    Ok(inner.pow(k as u32))
                } else {
                    Ok(inner.invert_unit()?.pow((-k) as u32))
                }
            } else {
                Ok(inner)
            }
        }
        Some(Tok::Ident(name)) => {
            p.next();
            let i = roster
                .index(&name)
                .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
            let k = if p.eat(&Tok::Caret) { p.signed_int()? } else { 1 };
            let mut e = vec![0; roster.len()];
            e[i] = i32::try_from(k).map_err(|_| Error::Parse("exponent too large".into()))?;
            LaurentPoly::monomial(roster, m, &e, 1).map_err(|e| Error::Parse(e.to_string()))
        }
        _ => Err(p.error("expected a term")),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (k, (e, &c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let constant = e.iter().all(|&x| x == 0);
            if constant {
                s.push_str(&c.to_string());
            } else {
                if c != 1 {
                    s.push_str(&format!("{c}*"));
                }
                LaurentPoly::fmt_monomial(&self.roster, e, &mut s);
            }
        }
        f.write_str(&s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl std::ops::$tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics on roster or modulus mismatch; the `try_` methods report it.
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$call(rhs).expect("operands share roster and modulus")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
