//! The inverse Cartier operator over F_p and the pole correspondence it
//! induces between forms and cohomology.

use serde::Serialize;

use crate::cohomology::{induced_map, ChainMap, CohClass, ComplexSpec, DegreeWindow};
use crate::error::{Error, Result};
use crate::forms::{LogForm, PoleVector};
use crate::laurent::VarRoster;
use crate::ring::{HowellMatrix, RatExponent};

/// `C^{-1}` on forms over F_p: `x^e ↦ x^{pe}`, `dlog t ↦ dlog t`,
/// `ds ↦ s^{p-1} ds`. The result is a closed representative.
pub fn cartier_inverse(w: &LogForm) -> Result<LogForm> {
    let m = w.modulus();
    if m.precision() != 1 {
        return Err(Error::Precision(format!("the inverse Cartier operator needs coefficients in F_p, got {m}")));
    }
    let p = m.p() as i32;
    let r = w.roster();
    let terms = w.terms().map(|(s, e, c)| {
        let f: Vec<i32> =
            e.iter().enumerate().map(|(i, &x)| p * x + if s.contains(i) && !r.is_log(i) { p - 1 } else { 0 }).collect();
        ((s, f), c)
    });
    Ok(LogForm::from_raw(r, m, w.degree(), terms.collect::<Vec<_>>()))
}

/// The class of `C^{-1}(ω)` in a complex over F_p.
pub fn cartier_class(w: &LogForm, spec: &ComplexSpec) -> Result<CohClass> {
    CohClass::new(spec, &cartier_inverse(w)?)
}

/// Outcome of comparing `t^{-⌈r⌉+1} Ω^i(log)` with
/// `H^i(t^{-p⌈r⌉+1} Ω•(log))` through `C^{-1}`.
#[derive(Debug, Clone, Serialize)]
pub struct CartierReport {
    pub r: RatExponent,
    pub degree: usize,
    pub source_pole: i64,
    pub target_pole: i64,
    /// Target multidegrees examined.
    pub pieces: u64,
    /// Source basis forms mapped.
    pub forms: u64,
    pub images_closed: bool,
    pub pole_bound: bool,
    pub injective: bool,
    pub surjective: bool,
    /// `H^i(t^{-p⌈r⌉+1}) = H^i(t^{-p(⌈r⌉-1)})` on the window.
    pub collapse: bool,
    pub counterexample: Option<String>,
}

impl CartierReport {
    pub fn pass(&self) -> bool {
        self.images_closed && self.pole_bound && self.injective && self.surjective && self.collapse
    }
}

/// Checks that `C^{-1}` is a bijection from `t^{-⌈r⌉+1} Ω^i(log)` onto
/// `H^i(t^{-p⌈r⌉+1} Ω•(log))` piece by piece on the target window. Log
/// variables other than `t` carry no poles; at `r = 0` both sides have no
/// poles at all.
pub fn verify_fil_correspondence(
    roster: &VarRoster,
    t: &str,
    p: u64,
    r: &RatExponent,
    i: usize,
    window: &DegreeWindow,
) -> Result<CartierReport> {
    if r.is_negative() {
        return Err(Error::InvalidArgument(format!("r = {r} is negative")));
    }
    roster.require_log(t)?;
    let c = r.ceil();
    let (bs, bt, bl) = if r.is_zero() { (0, 0, 0) } else { (c - 1, p as i64 * c - 1, p as i64 * (c - 1)) };
    let source = ComplexSpec::log_poles(roster, &PoleVector::new(roster, &[(t, bs)])?, p, 1)?;
    let target = ComplexSpec::log_poles(roster, &PoleVector::new(roster, &[(t, bt)])?, p, 1)?;
    let lower = ComplexSpec::log_poles(roster, &PoleVector::new(roster, &[(t, bl)])?, p, 1)?;
    let work = target.modulus();
    let mut rep = CartierReport {
        r: *r,
        degree: i,
        source_pole: bs,
        target_pole: bt,
        pieces: 0,
        forms: 0,
        images_closed: true,
        pole_bound: true,
        injective: true,
        surjective: true,
        collapse: true,
        counterexample: None,
    };
    let low_poles = PoleVector::new(roster, &[(t, bl)])?;
    for mu in window.multidegrees() {
        let tp = target.piece(&mu);
        if tp.dim(i) == 0 {
            continue;
        }
        rep.pieces += 1;
        let (len, _) = tp.cohomology(i, 1, work);
        if mu.iter().any(|x| x.rem_euclid(p as i32) != 0) {
            if len != 0 {
                rep.surjective = false;
                rep.counterexample.get_or_insert(format!("H^{i} is nonzero at {mu:?}, outside the image"));
            }
            continue;
        }
        let nu: Vec<i32> = mu.iter().map(|x| x / p as i32).collect();
        let sp = source.piece(&nu);
        let mut rows: Vec<Vec<u64>> = tp.boundaries(i, 1, work).raw_rows().to_vec();
        let base = HowellMatrix::from_residues(work, tp.dim(i), rows.clone()).log_size();
        let cycles = tp.cycles(i, 1, work);
        for &s in sp.basis(i) {
            rep.forms += 1;
            let x = LogForm::from_raw(roster, work, i, [((s, sp.exponent(s)), 1)]);
            let y = cartier_inverse(&x)?;
            if !target.d(&y)?.is_zero() {
                rep.images_closed = false;
                rep.counterexample.get_or_insert(format!("C^-1({x}) = {y} is not closed"));
            }
            if !y.pole_membership(&low_poles) {
                rep.pole_bound = false;
                rep.counterexample.get_or_insert(format!("C^-1({x}) = {y} has pole beyond {bl}"));
            }
            let terms = y.pieces().remove(&mu).unwrap_or_default();
            rows.push(tp.vector(i, &terms)?);
        }
        let all = HowellMatrix::from_residues(work, tp.dim(i), rows);
        if all.log_size() - base != sp.dim(i) as u32 {
            rep.injective = false;
            rep.counterexample.get_or_insert(format!("images at {mu:?} are dependent modulo boundaries"));
        }
        if cycles.raw_rows().iter().any(|z| !all.contains(z)) || len != sp.dim(i) as u32 {
            rep.surjective = false;
            rep.counterexample.get_or_insert(format!("images at {mu:?} miss part of H^{i}"));
        }
    }
    if !r.is_zero() {
        let m = induced_map(&ChainMap::inclusion(&lower, &target)?, i, window, window)?;
        if !m.is_isomorphism() {
            rep.collapse = false;
            rep.counterexample.get_or_insert(format!("pole {bl} and pole {bt} give different H^{i}"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Subset;
    use crate::ring::Modulus;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn roster() -> VarRoster {
        VarRoster::parse("t:log, s:plain").unwrap()
    }

    #[test]
    fn examples() {
        let r = roster();
        let m3 = Modulus::new(3, 1).unwrap();
        let one = LogForm::parse("1", &r, m3).unwrap();
        assert_eq!(cartier_inverse(&one).unwrap(), one);
        let dlog = LogForm::parse("dlog(t)", &r, m3).unwrap();
        assert_eq!(cartier_inverse(&dlog).unwrap(), dlog);
        let w = LogForm::parse("t^-1 * dlog(t)", &r, m3).unwrap();
        let img = cartier_inverse(&w).unwrap();
        assert_eq!(img, LogForm::parse("t^-3 * dlog(t)", &r, m3).unwrap());
        let laurent = ComplexSpec::laurent(&r, 3, 1).unwrap();
        let c = cartier_class(&w, &laurent).unwrap();
        assert!(!c.is_zero().unwrap());
        assert_eq!(
            cartier_inverse(&LogForm::parse("d(s)", &r, m3).unwrap()).unwrap(),
            LogForm::parse("s^2 * d(s)", &r, m3).unwrap()
        );
        assert!(cartier_inverse(&LogForm::parse("1", &r, Modulus::new(3, 2).unwrap()).unwrap()).is_err());
    }

    #[test]
    fn images_closed_and_semilinear() {
        let r = roster();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3] {
            let m = Modulus::new(p, 1).unwrap();
            let laurent = ComplexSpec::laurent(&r, p, 1).unwrap();
            for i in 0..=2 {
                for s in Subset::all_of_size(2, i) {
                    for a in -4..=4 {
                        for b in 0..=3 {
                            let e = vec![a, b - s.contains(1) as i32];
                            if e[1] < 0 {
                                continue;
                            }
                            let x = LogForm::monomial(&r, m, s, &e, 1).unwrap();
                            assert!(laurent.is_closed(&cartier_inverse(&x).unwrap()).unwrap(), "{x}");
                        }
                    }
                }
            }
            for _ in 0..50 {
                let f = crate::laurent::LaurentPoly::from_terms(
                    &r,
                    m,
                    (0..3).map(|_| (vec![rng.gen_range(-3..=3), rng.gen_range(0..=3)], rng.gen_range(0..p))),
                );
                let w = LogForm::monomial(&r, m, Subset::single(rng.gen_range(0..2)), &[rng.gen_range(-3..=3), 0], 1).unwrap();
                let lhs = cartier_class(&w.mul_poly(&f).unwrap(), &laurent).unwrap();
                let rhs = cartier_class(&w, &laurent).unwrap().representative().mul_poly(&f.pow(p as u32)).unwrap();
                assert!(lhs.same_class(&CohClass::new(&laurent, &rhs).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn correspondence_small() {
        let r = roster();
        for p in [2u64, 3] {
            for rr in ["0", "1/2", "1", "2"] {
                for i in 0..=3 {
                    let w = DegreeWindow::uniform(&r, -3 * p as i32, 3 * p as i32).unwrap();
                    let rep = verify_fil_correspondence(&r, "t", p, &rr.parse().unwrap(), i, &w).unwrap();
                    assert!(rep.pass(), "p={p} r={rr} i={i} {rep:?}");
                    if i == 3 {
                        assert_eq!(rep.pieces, 0);
                    }
                }
            }
        }
    }
}
