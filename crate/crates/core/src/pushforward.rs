//! Traces along finite covers `t = u t'^e` of one log variable.
//!
//! The source ring is free over the target ring with basis
//! `1, t', ..., t'^{e-1}`; functions push forward by the trace of
//! multiplication. On forms containing `dlog t'` the trace is taken through
//! the residue pairing in the `t'` direction, with a correction for the
//! dependence of `u` on the other variables.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cohomology::{maps_agree, ChainMap, ComplexSpec, DegreeWindow};
use crate::error::{Error, Result};
use crate::forms::{LogForm, Subset};
use crate::laurent::{LaurentPoly, VarRoster};
use crate::ring::{Modulus, RatExponent};

/// `f: X' → X` with `f^* t = u t'^e`, all other variables fixed. The source
/// roster is the target roster with `t` renamed to `t'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCover {
    target: VarRoster,
    source: VarRoster,
    var: usize,
    u: LaurentPoly,
    u_inv: LaurentPoly,
    e: u32,
}

impl FiniteCover {
    /// `u` lives on the source roster and must be `c (1 + w)` with `c` a
    /// unit constant and `p | w`.
    pub fn new(target: &VarRoster, t: &str, t_prime: &str, u: &LaurentPoly, e: u32) -> Result<Self> {
        let var = target.require_log(t)?;
        let source = target.renamed(var, t_prime)?;
        if u.roster() != &source {
            return Err(Error::RosterMismatch(format!("u lives on [{}], expected [{source}]", u.roster())));
        }
        if e < 1 {
            return Err(Error::Cover("ramification degree must be at least 1".into()));
        }
        let m = u.modulus();
        let units: Vec<_> = u.terms().filter(|(_, c)| c % m.p() != 0).collect();
        if units.len() != 1 || units[0].0.iter().any(|&x| x != 0) {
            return Err(Error::Cover(format!("u = {u} is not a constant unit modulo p")));
        }
        let u_inv = u.invert_unit().map_err(|e| Error::Cover(e.to_string()))?;
        Ok(FiniteCover { target: target.clone(), source, var, u: u.clone(), u_inv, e })
    }

    /// `t = t'^e` over Z/p^N.
    pub fn pure(target: &VarRoster, t: &str, t_prime: &str, e: u32, m: Modulus) -> Result<Self> {
        let i = target.require_log(t)?;
        let source = target.renamed(i, t_prime)?;
        FiniteCover::new(target, t, t_prime, &LaurentPoly::one(&source, m), e)
    }

    /// Parses `t = u * t'^e`, e.g. `t = t'^2` or `t = (1 + 2*s) * t'^3`.
    pub fn parse(s: &str, target: &VarRoster, m: Modulus) -> Result<Self> {
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| Error::Parse(format!("expected 't = u * t'^e', got '{s}'")))?;
        let t = lhs.trim();
        let var = target.require_log(t).map_err(|e| Error::Parse(e.to_string()))?;
        // The covering variable is the one identifier on the right not in the target roster.
        let mut t_prime: Option<String> = None;
        for tok in crate::text::tokenize(rhs)? {
            if let crate::text::Tok::Ident(name) = tok {
                if name == t {
                    return Err(Error::Parse(format!("'{t}' appears on both sides")));
                }
                if target.index(&name).is_none() && t_prime.as_ref().is_some_and(|x| x != &name) {
                    return Err(Error::Parse("more than one new variable on the right side".into()));
                }
                if target.index(&name).is_none() {
                    t_prime = Some(name);
                }
            }
        }
        let t_prime = t_prime.ok_or_else(|| Error::Parse("no covering variable on the right side".into()))?;
        let source = target.renamed(var, &t_prime).map_err(|e| Error::Parse(e.to_string()))?;
        let poly = LaurentPoly::parse(rhs, &source, m)?;
        let units: Vec<_> = poly.terms().filter(|(_, c)| c % m.p() != 0).collect();
        if units.len() != 1 {
            return Err(Error::Cover(format!("{poly} is not u * {t_prime}^e with u a unit")));
        }
        let e = units[0].0[var];
        if e < 1 {
            return Err(Error::Cover(format!("ramification degree {e} is not positive")));
        }
        let mut shift = vec![0; source.len()];
        shift[var] = -e;
        FiniteCover::new(target, t, &t_prime, &poly.shift(&shift), e as u32)
    }

    pub fn target(&self) -> &VarRoster {
        &self.target
    }

    pub fn source(&self) -> &VarRoster {
        &self.source
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn unit(&self) -> &LaurentPoly {
        &self.u
    }

    pub fn modulus(&self) -> Modulus {
        self.u.modulus()
    }

    /// Index of `t` in the target and of `t'` in the source.
    pub fn variable(&self) -> usize {
        self.var
    }

    fn check_source(&self, f: &LaurentPoly) -> Result<()> {
        if f.roster() != &self.source {
            return Err(Error::RosterMismatch(format!("[{}] vs source [{}]", f.roster(), self.source)));
        }
        if f.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(format!("{} vs {}", f.modulus(), self.modulus())));
        }
        Ok(())
    }

    fn u_power(&self, k: i32) -> LaurentPoly {
        if k >= 0 {
            self.u.pow(k as u32)
        } else {
            self.u_inv.pow((-k) as u32)
        }
    }

    /// Coordinates of `f` in the basis `t'^k`, `0 <= k < e`, over the target.
    pub fn normal_form(&self, f: &LaurentPoly) -> Result<Vec<LaurentPoly>> {
        self.check_source(f)?;
        let m = self.modulus();
        let e = self.e as i32;
        let c0 = self.u.terms().find(|(_, c)| c % m.p() != 0).map(|(_, c)| c).expect("checked unit");
        let c0_inv = m.inv(c0).expect("unit");
        let mut out = vec![LaurentPoly::zero(&self.target, m); self.e as usize];
        // Pending source polynomials, keyed by the accumulated power of t.
        let mut queue: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        queue.insert(0, f.clone());
        let mut cache: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for _ in 0..=m.precision() {
            let mut next: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
            for (tpow, poly) in &queue {
                for (ex, c) in poly.terms() {
                    let j = ex[self.var];
                    let q = j.div_euclid(e);
                    let k = j.rem_euclid(e);
                    // t'^j = t^q t'^k u^-q, with u^-q = c0^-q + (terms divisible by p).
                    let lead = m.pow(if q >= 0 { c0_inv } else { c0 }, q.unsigned_abs() as u64);
                    let mut tex = ex.clone();
                    tex[self.var] = tpow + q;
                    out[k as usize].add_term(tex, m.mul(c, lead));
                    let rest = cache
                        .entry(q)
                        .or_insert_with(|| {
                            let full = self.u_power(-q);
                            full.try_sub(&LaurentPoly::constant(&self.source, m, lead as i64)).expect("same ring")
                        })
                        .clone();
                    if rest.is_zero() {
                        continue;
                    }
                    let mut sx = ex.clone();
                    sx[self.var] = k;
                    let term = rest.shift(&sx).scale(c);
                    let slot = next.entry(tpow + q).or_insert_with(|| LaurentPoly::zero(&self.source, m));
                    *slot = &*slot + &term;
                }
            }
            next.retain(|_, p| !p.is_zero());
            queue = next;
            if queue.is_empty() {
                return Ok(out);
            }
        }
        Err(Error::Precision("normal form did not terminate; u is not 1 modulo p up to a constant".into()))
    }

    /// Trace of multiplication by `f` on the free module with basis `t'^k`.
    pub fn trace0(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_source(f)?;
        let mut acc = LaurentPoly::zero(&self.target, self.modulus());
        let mut shift = vec![0; self.source.len()];
        for k in 0..self.e as usize {
            shift[self.var] = k as i32;
            let nf = self.normal_form(&f.shift(&shift))?;
            acc = &acc + &nf[k];
        }
        Ok(acc)
    }

    /// `τ(f)`: the trace of `f dlog t'` in the `t'` direction, as the
    /// coefficient of `dlog t`; the other variables are treated as constants.
    pub fn tau(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_source(f)?;
        let m = self.modulus();
        let Some((kmin, kmax)) = f.exponent_range(self.var) else { return Ok(LaurentPoly::zero(&self.target, m)) };
        let (wl, wh) = self.u.exponent_range(self.var).unwrap_or((0, 0));
        let (ul, uh) = self.u_inv.exponent_range(self.var).unwrap_or((0, 0));
        let spread = (m.precision() as i32 - 1).max(1);
        let dl = spread * wl.min(ul).min(0);
        let dh = spread * wh.max(uh).max(0);
        let e = self.e as i32;
        let lo = (-(kmax + dh)).div_euclid(e) - 1;
        let hi = (-(kmin + dl)).div_euclid(e) + 1;
        let mut out = LaurentPoly::zero(&self.target, m);
        let mut sh = vec![0; self.source.len()];
        for mm in lo..=hi {
            sh[self.var] = e * mm;
            let g = (f * &self.u_power(mm)).shift(&sh);
            for (ex, c) in g.terms() {
                if ex[self.var] == 0 {
                    let mut tex = ex.clone();
                    tex[self.var] = -mm;
                    out.add_term(tex, c);
                }
            }
        }
        Ok(out)
    }

    /// `D_v u / u`: the coefficient of `eps_v` in `dlog u`.
    fn dlog_u(&self, v: usize) -> LaurentPoly {
        let du = LogForm::function(&self.u).d();
        &du.component(Subset::single(v)) * &self.u_inv
    }

    /// `f_*` on forms.
    pub fn pushforward(&self, w: &LogForm) -> Result<LogForm> {
        if w.roster() != &self.source {
            return Err(Error::RosterMismatch(format!("[{}] vs source [{}]", w.roster(), self.source)));
        }
        let w = if w.modulus() == self.modulus() { w.clone() } else { w.with_precision(self.modulus().precision())? };
        let m = self.modulus();
        let name = self.source.name(self.var).to_string();
        let (alpha, beta) = w.split_top_variable(&name)?;
        let mut out = LogForm::zero(&self.target, m, w.degree());
        for s in alpha.support() {
            let f = self.trace0(&alpha.component(s))?;
            out = &out + &LogForm::from_component(&f, s);
        }
        if w.degree() == 0 {
            return Ok(out);
        }
        let dlog_t = LogForm::monomial(&self.target, m, Subset::single(self.var), &vec![0; self.target.len()], 1)?;
        for s in beta.support() {
            let b = beta.component(s);
            let eps = LogForm::monomial(&self.target, m, s, &vec![0; self.target.len()], 1)?;
            let mut inner = LogForm::from_component(&self.tau(&b)?, Subset::empty()).wedge(&dlog_t)?;
            for v in 0..self.source.len() {
                if v == self.var {
                    continue;
                }
                let mu = self.dlog_u(v);
                if mu.is_zero() {
                    continue;
                }
                let c = self.tau(&(&b * &mu))?;
                let ev = LogForm::monomial(&self.target, m, Subset::single(v), &vec![0; self.target.len()], 1)?;
                inner = &inner - &LogForm::from_component(&c, Subset::empty()).wedge(&ev)?;
            }
            out = &out + &eps.wedge(&inner)?;
        }
        Ok(out)
    }

    /// `f^*` on functions.
    pub fn pullback_function(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        if f.roster() != &self.target {
            return Err(Error::RosterMismatch(format!("[{}] vs target [{}]", f.roster(), self.target)));
        }
        let m = self.modulus();
        let f = if f.modulus() == m { f.clone() } else { f.with_precision(m.precision())? };
        let mut out = LaurentPoly::zero(&self.source, m);
        let mut sh = vec![0; self.source.len()];
        for (ex, c) in f.terms() {
            let k = ex[self.var];
            let mut rest = ex.clone();
            rest[self.var] = 0;
            sh[self.var] = self.e as i32 * k;
            let term = self.u_power(k).shift(&sh).shift(&rest).scale(c);
            out = &out + &term;
        }
        Ok(out)
    }

    /// `f^*` on forms: `dlog t ↦ e dlog t' + dlog u`.
    pub fn pullback(&self, w: &LogForm) -> Result<LogForm> {
        if w.roster() != &self.target {
            return Err(Error::RosterMismatch(format!("[{}] vs target [{}]", w.roster(), self.target)));
        }
        let m = self.modulus();
        let w = if w.modulus() == m { w.clone() } else { w.with_precision(m.precision())? };
        let zero = vec![0; self.source.len()];
        let basis = |v: usize| LogForm::monomial(&self.source, m, Subset::single(v), &zero, 1);
        let mut images = Vec::with_capacity(self.source.len());
        for v in 0..self.source.len() {
            if v == self.var {
                let mut img = basis(v)?.scale_i64(self.e as i64);
                for x in 0..self.source.len() {
                    let mu = self.dlog_u(x);
                    if !mu.is_zero() {
                        img = &img + &LogForm::from_component(&mu, Subset::single(x));
                    }
                }
                images.push(img);
            } else {
                images.push(basis(v)?);
            }
        }
        let mut out = LogForm::zero(&self.source, m, w.degree());
        for s in w.support() {
            let mut term = LogForm::function(&self.pullback_function(&w.component(s))?);
            for v in s.indices() {
                term = term.wedge(&images[v])?;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// `f_*` as a chain map between complexes on the source and target.
    pub fn chain_map(&self, source: &ComplexSpec, target: &ComplexSpec) -> Result<ChainMap> {
        if source.roster() != &self.source || target.roster() != &self.target {
            return Err(Error::RosterMismatch("complexes do not match the cover".into()));
        }
        let cover = self.clone();
        ChainMap::new(source, target, 0, move |w| cover.pushforward(w))
    }
}

/// True when `f` and `g` are lifts of the same cover modulo `p`.
pub fn same_reduction(f: &FiniteCover, g: &FiniteCover) -> bool {
    f.target == g.target
        && f.source == g.source
        && f.var == g.var
        && f.e == g.e
        && f.modulus() == g.modulus()
        && (f.u.try_sub(&g.u).map(|d| d.terms().all(|(_, c)| c % f.modulus().p() == 0)).unwrap_or(false))
}

/// Compares the maps induced on `H^i` by two lifts of the same cover.
pub fn check_lift_independence(
    f: &FiniteCover,
    g: &FiniteCover,
    source: &ComplexSpec,
    target: &ComplexSpec,
    i: usize,
    window: &DegreeWindow,
) -> Result<bool> {
    if !same_reduction(f, g) {
        return Err(Error::InvalidArgument(format!("'{f}' and '{g}' differ modulo p")));
    }
    maps_agree(&f.chain_map(source, target)?, &g.chain_map(source, target)?, i, window)
}

/// Outcome of the pole bounds for pushforwards of monomial generators.
#[derive(Debug, Clone, Serialize)]
pub struct PoleBoundReport {
    pub degree: usize,
    /// Lowest `t'`-exponent of the generators.
    pub source_bound: i32,
    /// Lowest `t`-exponent allowed in the images.
    pub target_bound: i32,
    pub generators: u64,
    pub counterexample: Option<String>,
}

impl PoleBoundReport {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Pushes forward every monomial generator of `t'^a Ω^i(log)` in the window
/// (other log variables regular, plain variables polynomial) and checks that
/// the `t`-exponents of the image are at least `b`.
pub fn verify_pole_bound(f: &FiniteCover, a: i32, b: i32, i: usize, window: &DegreeWindow) -> Result<PoleBoundReport> {
    let r = f.source();
    let m = f.modulus();
    let ti = f.variable();
    let mut rep = PoleBoundReport { degree: i, source_bound: a, target_bound: b, generators: 0, counterexample: None };
    for s in Subset::all_of_size(r.len(), i) {
        for e in window.multidegrees() {
            let ok = (0..r.len()).all(|v| if v == ti { e[v] >= a } else { e[v] >= 0 });
            if !ok {
                continue;
            }
            rep.generators += 1;
            let w = LogForm::monomial(r, m, s, &e, 1)?;
            let img = f.pushforward(&w)?;
            let low = img.terms().map(|(_, ex, _)| ex[ti]).min();
            if let Some(x) = low.filter(|&x| x < b) {
                rep.counterexample = Some(format!("{w} pushes forward to {img} with t-exponent {x}"));
                return Ok(rep);
            }
        }
    }
    Ok(rep)
}

/// `f_*(t' Ω^i(log)) ⊆ t Ω^i(log)`.
pub fn verify_integral_bound(f: &FiniteCover, i: usize, window: &DegreeWindow) -> Result<PoleBoundReport> {
    verify_pole_bound(f, 1, 1, i, window)
}

/// `f_*(t'^{-⌈r⌉+1} Ω^i(log)) ⊆ t^{-⌈r/e⌉+1} Ω^i(log)`.
pub fn verify_ramified_bound(f: &FiniteCover, r: &RatExponent, i: usize, window: &DegreeWindow) -> Result<PoleBoundReport> {
    if r.is_negative() {
        return Err(Error::InvalidArgument(format!("r = {r} is negative")));
    }
    let a = 1 - r.ceil() as i32;
    let b = 1 - r.div_int(f.degree() as u64)?.ceil() as i32;
    verify_pole_bound(f, a, b, i, window)
}

impl fmt::Display for FiniteCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.target.name(self.var);
        let tp = self.source.name(self.var);
        let one = LaurentPoly::one(&self.source, self.modulus());
        if self.u == one {
            write!(f, "{t} = {tp}^{}", self.e)
        } else {
            write!(f, "{t} = ({}) * {tp}^{}", self.u, self.e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::PoleVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn target() -> VarRoster {
        VarRoster::parse("t:log, s:plain").unwrap()
    }

    fn cover(u: &str, e: u32, p: u64, n: u32) -> FiniteCover {
        let m = Modulus::new(p, n).unwrap();
        let src = target().renamed(0, "t'").unwrap();
        FiniteCover::new(&target(), "t", "t'", &LaurentPoly::parse(u, &src, m).unwrap(), e).unwrap()
    }

    fn random_form(rng: &mut ChaCha8Rng, r: &VarRoster, m: Modulus, deg: usize) -> LogForm {
        let mut w = LogForm::zero(r, m, deg);
        let subs = Subset::all_of_size(r.len(), deg);
        for _ in 0..3 {
            let s = subs[rng.gen_range(0..subs.len())];
            let e = vec![rng.gen_range(-4..=4), rng.gen_range(0..=2)];
            w = &w + &LogForm::monomial(r, m, s, &e, rng.gen_range(0..m.order()) as i64).unwrap();
        }
        w
    }

    #[test]
    fn trace0_examples() {
        let f = cover("1", 2, 3, 1);
        let src = f.source().clone();
        let m = f.modulus();
        let p = |s: &str| LaurentPoly::parse(s, &src, m).unwrap();
        let q = |s: &str| LaurentPoly::parse(s, &target(), m).unwrap();
        assert_eq!(f.trace0(&p("1")).unwrap(), q("2"));
        assert_eq!(f.trace0(&p("t'")).unwrap(), q("0"));
        assert_eq!(f.trace0(&p("t'^2")).unwrap(), q("2*t"));
        assert_eq!(f.trace0(&p("t'^-2")).unwrap(), q("2*t^-1"));
    }

    #[test]
    fn trace1_examples() {
        let f = cover("1", 2, 3, 1);
        let m = f.modulus();
        let w = LogForm::parse("dlog(t')", f.source(), m).unwrap();
        assert_eq!(f.pushforward(&w).unwrap(), LogForm::parse("dlog(t)", &target(), m).unwrap());
        let g = cover("1 + 3*s", 3, 3, 2);
        let dlog_t = LogForm::parse("dlog(t)", &target(), g.modulus()).unwrap();
        assert_eq!(g.pushforward(&g.pullback(&dlog_t).unwrap()).unwrap(), dlog_t.scale(3));
        let id = cover("1", 1, 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for deg in 0..=2 {
            let w = random_form(&mut rng, id.source(), id.modulus(), deg);
            assert_eq!(id.pushforward(&w).unwrap().remap(&target(), &[0, 1]).unwrap(), w.remap(&target(), &[0, 1]).unwrap());
        }
    }

    #[test]
    fn lemma43_instances() {
        // p = 2, e = 2: dt' pushes into t Ω^1(log t).
        let f = cover("1", 2, 2, 1);
        let w = LogForm::parse("t' * dlog(t')", f.source(), f.modulus()).unwrap();
        let img = f.pushforward(&w).unwrap();
        assert!(img.terms().all(|(_, e, _)| e[0] >= 1), "{img}");
        // r = 3, e = 2: t'^-2 Ω^1(log) lands in t^-1 Ω^1(log).
        let f = cover("1 + 2*s", 2, 2, 2);
        for s in ["t'^-2 * dlog(t')", "t'^-2*s * d(s)", "t'^-1 * dlog(t') w d(s)"] {
            let w = LogForm::parse(s, f.source(), f.modulus()).unwrap();
            let img = f.pushforward(&w).unwrap();
            assert!(img.terms().all(|(_, e, _)| e[0] >= -1), "{s} -> {img}");
        }
    }

    #[test]
    fn projection_formula_and_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (u, e, p, n) in [("1", 2, 2, 2), ("1 + 2*s", 2, 2, 2), ("1 + 3*s*t'", 3, 3, 2), ("3 + 2*t'^-1", 4, 2, 3), ("1 + 3*t'^2", 2, 3, 2)] {
            let f = cover(u, e, p, n);
            let m = f.modulus();
            for _ in 0..20 {
                let di = rng.gen_range(0..=2);
                let dj = rng.gen_range(0..=2 - di);
                let w = random_form(&mut rng, &target(), m, di);
                let eta = random_form(&mut rng, f.source(), m, dj);
                let lhs = f.pushforward(&f.pullback(&w).unwrap().wedge(&eta).unwrap()).unwrap();
                let rhs = w.wedge(&f.pushforward(&eta).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "u={u} e={e} w={w} eta={eta}");
                assert_eq!(f.pushforward(&f.pullback(&w).unwrap()).unwrap(), w.scale(e as u64));
                // f_* commutes with d.
                assert_eq!(f.pushforward(&eta.d()).unwrap(), f.pushforward(&eta).unwrap().d(), "u={u} eta={eta}");
                // f^* is a ring map commuting with d.
                assert_eq!(f.pullback(&w.d()).unwrap(), f.pullback(&w).unwrap().d());
            }
        }
    }

    #[test]
    fn composition_of_covers() {
        // t = t'^2 then t' = t''^2 agrees with t = t''^4 (wild for p = 2).
        let m = Modulus::new(2, 2).unwrap();
        let f = FiniteCover::pure(&target(), "t", "t'", 2, m).unwrap();
        let g = FiniteCover::pure(f.source(), "t'", "t''", 2, m).unwrap();
        let h = FiniteCover::pure(&target(), "t", "t''", 4, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for deg in 0..=2 {
            for _ in 0..10 {
                let w = random_form(&mut rng, g.source(), m, deg);
                assert_eq!(f.pushforward(&g.pushforward(&w).unwrap()).unwrap(), h.pushforward(&w).unwrap());
            }
        }
    }

    #[test]
    fn chain_map_on_complexes() {
        let f = cover("1 + 2*s", 2, 2, 2);
        let src = ComplexSpec::log_poles(f.source(), &PoleVector::new(f.source(), &[("t'", 3)]).unwrap(), 2, 2).unwrap();
        let tgt = ComplexSpec::log_poles(&target(), &PoleVector::new(&target(), &[("t", 2)]).unwrap(), 2, 2).unwrap();
        let map = f.chain_map(&src, &tgt).unwrap();
        for i in 0..=2 {
            map.check(i, &DegreeWindow::uniform(f.source(), -6, 6).unwrap()).unwrap();
        }
    }

    #[test]
    fn parsing() {
        let m = Modulus::new(2, 2).unwrap();
        let f = FiniteCover::parse("t = t'^2", &target(), m).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "t = t'^2");
        let g = FiniteCover::parse("t = (1 + 2*s) * t'^3", &target(), m).unwrap();
        assert_eq!(g.degree(), 3);
        assert_eq!(FiniteCover::parse(&g.to_string(), &target(), m).unwrap(), g);
        assert!(FiniteCover::parse("t = (1 + s) * t'^2", &target(), m).is_err());
        assert!(FiniteCover::parse("t = 2*t'^2", &target(), m).is_err());
        assert!(FiniteCover::parse("t t'^2", &target(), m).is_err());
        assert!(FiniteCover::parse("s = t'^2", &target(), m).is_err());
    }

    #[test]
    fn lift_independence() {
        let f = cover("1", 2, 2, 2);
        let g = cover("1 + 2*s", 2, 2, 2);
        let src = ComplexSpec::laurent(f.source(), 2, 2).unwrap();
        let tgt = ComplexSpec::laurent(&target(), 2, 2).unwrap();
        let w = DegreeWindow::new(f.source(), vec![(-5, 5), (0, 3)]).unwrap();
        for i in 0..=2 {
            assert!(check_lift_independence(&f, &g, &src, &tgt, i, &w).unwrap(), "i={i}");
        }
        let (a, b) = (cover("1", 2, 3, 1), cover("2", 2, 3, 1));
        let src3 = ComplexSpec::laurent(a.source(), 3, 1).unwrap();
        let tgt3 = ComplexSpec::laurent(&target(), 3, 1).unwrap();
        assert!(check_lift_independence(&a, &b, &src3, &tgt3, 1, &w).is_err());
        let k = cover("1 + 2*s*t'", 1, 2, 2);
        let id = cover("1", 1, 2, 2);
        assert!(check_lift_independence(&id, &k, &src, &tgt, 1, &w).unwrap());
    }

    #[test]
    fn pole_bounds() {
        let w = DegreeWindow::new(&target().renamed(0, "t'").unwrap(), vec![(-8, 8), (0, 2)]).unwrap();
        for (u, e, p) in [("1", 2, 2), ("1 + 2*s", 4, 2), ("1 + 3*t'", 3, 3), ("2 + 3*s", 6, 3)] {
            let f = cover(u, e, p, 2);
            for i in 0..=2 {
                assert!(verify_integral_bound(&f, i, &w).unwrap().pass());
                for r in ["1/2", "1", "3/2", "2", "5/2", "3"] {
                    let rep = verify_ramified_bound(&f, &r.parse().unwrap(), i, &w).unwrap();
                    assert!(rep.pass(), "{u} e={e} r={r} {rep:?}");
                }
            }
        }
        // One step tighter fails: t'^{-2} dlog t' at e = 2 reaches t^{-1}.
        let f = cover("1", 2, 2, 2);
        assert!(!verify_pole_bound(&f, -2, 0, 1, &w).unwrap().pass());
    }
}
