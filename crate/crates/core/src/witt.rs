//! Witt vectors of Laurent rings over F_p, the map `β` from closed functions
//! over Z/p^n, and the Witt-vector filtration test.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::LogForm;
use crate::laurent::{LaurentPoly, VarRoster};
use crate::ring::{Modulus, RatExponent};
use crate::text::{Parser, Tok};

/// `(a_0, ..., a_{n-1})` with components over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittVector {
    p: u64,
    roster: VarRoster,
    comps: Vec<LaurentPoly>,
}

impl WittVector {
    pub fn new(comps: Vec<LaurentPoly>) -> Result<Self> {
        let first = comps.first().ok_or_else(|| Error::InvalidArgument("Witt vector of length 0".into()))?;
        let (p, roster) = (first.modulus().p(), first.roster().clone());
        for c in &comps {
            if c.roster() != &roster {
                return Err(Error::RosterMismatch(format!("[{}] vs [{roster}]", c.roster())));
            }
            if c.modulus().p() != p || c.modulus().precision() != 1 {
                return Err(Error::ModulusMismatch(format!("component over {} in W over F_{p}", c.modulus())));
            }
        }
        Ok(WittVector { p, roster, comps })
    }

    pub fn zero(roster: &VarRoster, p: u64, n: usize) -> Result<Self> {
        let m = Modulus::new(p, 1)?;
        WittVector::new(vec![LaurentPoly::zero(roster, m); n])
    }

    pub fn one(roster: &VarRoster, p: u64, n: usize) -> Result<Self> {
        WittVector::teichmuller(&LaurentPoly::one(roster, Modulus::new(p, 1)?), n)
    }

    /// `[f] = (f, 0, ..., 0)`.
    pub fn teichmuller(f: &LaurentPoly, n: usize) -> Result<Self> {
        let mut comps = vec![LaurentPoly::zero(f.roster(), f.modulus()); n];
        if n > 0 {
            comps[0] = f.clone();
        }
        WittVector::new(comps)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn roster(&self) -> &VarRoster {
        &self.roster
    }

    pub fn components(&self) -> &[LaurentPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn check_compatible(&self, other: &WittVector) -> Result<()> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::ModulusMismatch(format!(
                "W_{} over F_{} vs W_{} over F_{}",
                self.len(),
                self.p,
                other.len(),
                other.p
            )));
        }
        if self.roster != other.roster {
            return Err(Error::RosterMismatch(format!("[{}] vs [{}]", self.roster, other.roster)));
        }
        Ok(())
    }

    /// Ghost components `w_j = Σ_{i<=j} p^i x_i^{p^{j-i}}` of the lift with
    /// coefficients in `[0, p)`, mod p^n. Only `w_j` mod p^{j+1} is
    /// independent of the lift.
    pub fn ghost(&self) -> Vec<LaurentPoly> {
        let m = Modulus::new(self.p, self.len() as u32).expect("valid modulus");
        let lifts: Vec<LaurentPoly> = self.comps.iter().map(|c| c.with_precision(m.precision()).expect("lift")).collect();
        (0..self.len())
            .map(|j| {
                let mut w = LaurentPoly::zero(&self.roster, m);
                for (i, x) in lifts.iter().enumerate().take(j + 1) {
                    let term = x.pow(self.p.pow((j - i) as u32) as u32).scale(self.p.pow(i as u32));
                    w = &w + &term;
                }
                w
            })
            .collect()
    }

    /// The vector whose ghost components are `ghost`; component `j` only
    /// depends on `ghost[j]` mod p^{j+1}, and each division must be exact.
    fn from_ghost(p: u64, ghost: &[LaurentPoly]) -> Result<Self> {
        let n = ghost.len();
        let m = Modulus::new(p, n as u32)?;
        let f1 = Modulus::new(p, 1)?;
        let mut comps: Vec<LaurentPoly> = Vec::with_capacity(n);
        for (j, g) in ghost.iter().enumerate() {
            let mut num = g.clone();
            for (i, x) in comps.iter().enumerate() {
                let lift = x.with_precision(m.precision())?;
                num = &num - &lift.pow(p.pow((j - i) as u32) as u32).scale(p.pow(i as u32));
            }
            let s = if j == 0 { num } else { num.div_p_pow(j as u32).map_err(|e| Error::Precision(format!("ghost step {j}: {e}")))? };
            comps.push(s.with_precision(1)?.with_precision(f1.precision())?);
        }
        WittVector::new(comps)
    }

    pub fn try_add(&self, other: &WittVector) -> Result<Self> {
        self.check_compatible(other)?;
        let g: Vec<LaurentPoly> = self.ghost().iter().zip(other.ghost()).map(|(a, b)| a + &b).collect();
        WittVector::from_ghost(self.p, &g)
    }

    pub fn try_mul(&self, other: &WittVector) -> Result<Self> {
        self.check_compatible(other)?;
        let g: Vec<LaurentPoly> = self.ghost().iter().zip(other.ghost()).map(|(a, b)| a * &b).collect();
        WittVector::from_ghost(self.p, &g)
    }

    pub fn neg(&self) -> Self {
        let g: Vec<LaurentPoly> = self.ghost().iter().map(|a| a.neg()).collect();
        WittVector::from_ghost(self.p, &g).expect("negation is exact")
    }

    pub fn try_sub(&self, other: &WittVector) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// `k · a` for an integer `k`.
    pub fn scale(&self, k: i64) -> Self {
        let g: Vec<LaurentPoly> = self.ghost().iter().map(|a| a.scale_i64(k)).collect();
        WittVector::from_ghost(self.p, &g).expect("scaling is exact")
    }

    /// Frobenius: componentwise p-th powers.
    pub fn frobenius(&self) -> Self {
        WittVector { p: self.p, roster: self.roster.clone(), comps: self.comps.iter().map(|c| c.frobenius_lift()).collect() }
    }

    /// Verschiebung: `(0, a_0, ..., a_{n-2})`.
    pub fn verschiebung(&self) -> Self {
        let mut comps = vec![LaurentPoly::zero(&self.roster, self.comps[0].modulus())];
        comps.extend(self.comps[..self.len() - 1].iter().cloned());
        WittVector { p: self.p, roster: self.roster.clone(), comps }
    }

    /// Componentwise `p^k`-th roots; fails unless every component is a
    /// `p^k`-th power.
    pub fn frobenius_root(&self, k: u32) -> Result<Self> {
        let q = self.p.pow(k) as i32;
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut terms = Vec::new();
                for (e, v) in c.terms() {
                    if e.iter().any(|x| x % q != 0) {
                        return Err(Error::Precondition(format!("{c} is not a {q}-th power")));
                    }
                    terms.push((e.iter().map(|x| x / q).collect(), v));
                }
                Ok(LaurentPoly::from_terms(&self.roster, c.modulus(), terms))
            })
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(comps)
    }

    /// Parses `W(p=2,n=2)[a0; a1]`.
    pub fn parse(s: &str, roster: &VarRoster) -> Result<Self> {
        let mut ps = Parser::new(s)?;
        let w = ps.ident()?;
        if w != "W" {
            return Err(ps.error("expected 'W'"));
        }
        ps.expect(&Tok::LParen)?;
        let mut p = None;
        let mut n = None;
        loop {
            let key = ps.ident()?;
            ps.expect(&Tok::Eq)?;
            let v = ps.signed_int()?;
            match key.as_str() {
                "p" => p = Some(v),
                "n" => n = Some(v),
                _ => return Err(ps.error(&format!("unknown key '{key}'"))),
            }
            if !ps.eat(&Tok::Comma) {
                break;
            }
        }
        ps.expect(&Tok::RParen)?;
        let (Some(p), Some(n)) = (p, n) else { return Err(Error::Parse("W(...) needs p and n".into())) };
        if p < 2 || n < 1 {
            return Err(Error::Parse(format!("invalid p = {p} or n = {n}")));
        }
        let m = Modulus::new(p as u64, 1).map_err(|e| Error::Parse(e.to_string()))?;
        ps.expect(&Tok::LBracket)?;
        let mut comps = Vec::new();
        loop {
            comps.push(crate::laurent::parse_poly(&mut ps, roster, m)?);
            if !ps.eat(&Tok::Semicolon) {
                break;
            }
        }
        ps.expect(&Tok::RBracket)?;
        ps.finish()?;
        if comps.len() != n as usize {
            return Err(Error::Parse(format!("expected {n} components, got {}", comps.len())));
        }
        WittVector::new(comps)
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "W(p={},n={})[{}]", self.p, self.len(), c.join("; "))
    }
}

/// True when `d b = 0` over Z/p^n.
pub fn is_closed_mod(b: &LaurentPoly, n: u32) -> Result<bool> {
    Ok(LogForm::function(&b.with_precision(n)?).d().is_zero())
}

/// `β(b)` for a closed function `b` over Z/p^n given at precision `N >= 2n`:
/// solves `Σ_{i<=j} p^i ã_i^{p^{j-i}} = F^j b` successively and reduces mod p.
pub fn beta(b: &LaurentPoly, n: u32) -> Result<WittVector> {
    let m = b.modulus();
    let p = m.p();
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if m.precision() < 2 * n {
        return Err(Error::Precision(format!("β over Z/{p}^{n} needs precision {}, got {}", 2 * n, m.precision())));
    }
    if !is_closed_mod(b, n)? {
        return Err(Error::NotClosed(format!("d({}) != 0 over Z/{p}^{n}", b.with_precision(n)?)));
    }
    let mut lifts: Vec<LaurentPoly> = Vec::new();
    let mut fj = b.clone();
    for j in 0..n as usize {
        let mut num = fj.clone();
        for (i, x) in lifts.iter().enumerate() {
            num = &num - &x.pow(p.pow((j - i) as u32) as u32).scale(p.pow(i as u32));
        }
        let a = num.div_p_pow(j as u32).map_err(|e| Error::Precision(format!("step {j}: {e}")))?;
        lifts.push(a.with_precision(m.precision())?);
        fj = fj.frobenius_lift();
    }
    WittVector::new(lifts.iter().map(|a| a.with_precision(1)).collect::<Result<_>>()?)
}

/// Tests `t^{p^j (⌈r⌉-1)} a_j^{p^{n-1}}` integral in `t` for all `j`; at
/// `r = 0`, integrality of every component.
pub fn koizumi_membership(a: &WittVector, r: &RatExponent, t: &str) -> Result<bool> {
    if r.is_negative() {
        return Err(Error::InvalidArgument(format!("r = {r} is negative")));
    }
    let ti = a.roster().require_log(t)?;
    if r.is_zero() {
        return Ok(a.components().iter().all(|c| c.is_integral_in(ti)));
    }
    let c = r.ceil() - 1;
    let p = a.p() as i64;
    let n = a.len() as u32;
    Ok(a.components().iter().enumerate().all(|(j, comp)| {
        comp.terms().all(|(e, _)| p.pow(j as u32) * c + p.pow(n - 1) * e[ti] as i64 >= 0)
    }))
}
