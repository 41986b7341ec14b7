//! Chain maps between complexes, their induced maps on cohomology, and
//! exactness checks for short sequences.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::span::{SpanSet, SparseVec};
use super::{exponent_of, form_of, sparse_of, ComplexSpec, DegreeWindow};
use crate::error::{Error, Result};
use crate::forms::LogForm;
use crate::laurent::Exponent;
use crate::ring::Modulus;

type MapFn = dyn Fn(&LogForm) -> Result<LogForm> + Send + Sync;

/// A module map between complexes, raising degree by `shift`, given on
/// ambient forms at the work modulus.
pub struct ChainMap {
    source: ComplexSpec,
    target: ComplexSpec,
    shift: usize,
    apply: Box<MapFn>,
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainMap").field("source", &self.source).field("target", &self.target).field("shift", &self.shift).finish()
    }
}

impl ChainMap {
    pub fn new(
        source: &ComplexSpec,
        target: &ComplexSpec,
        shift: usize,
        apply: impl Fn(&LogForm) -> Result<LogForm> + Send + Sync + 'static,
    ) -> Result<Self> {
        if source.p() != target.p() {
            return Err(Error::ModulusMismatch(format!("p = {} vs p = {}", source.p(), target.p())));
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), shift, apply: Box::new(apply) })
    }

    /// The map induced by the identity on forms: inclusions, quotient
    /// projections and coefficient reductions.
    pub fn inclusion(source: &ComplexSpec, target: &ComplexSpec) -> Result<Self> {
        if source.roster() != target.roster() {
            return Err(Error::RosterMismatch(format!("[{}] vs [{}]", source.roster(), target.roster())));
        }
        for (a, b) in source.conditions().iter().zip(target.conditions()) {
            if !a.within(b) {
                return Err(Error::InvalidMap(format!("{source} is not contained in {target}")));
            }
        }
        ChainMap::new(source, target, 0, |w| Ok(w.clone()))
    }

    pub fn identity(spec: &ComplexSpec) -> Result<Self> {
        ChainMap::inclusion(spec, spec)
    }

    /// Multiplication by an integer.
    pub fn scalar(source: &ComplexSpec, target: &ComplexSpec, c: i64) -> Result<Self> {
        if source.roster() != target.roster() {
            return Err(Error::RosterMismatch(format!("[{}] vs [{}]", source.roster(), target.roster())));
        }
        ChainMap::new(source, target, 0, move |w| Ok(w.scale_i64(c)))
    }

    pub fn source(&self) -> &ComplexSpec {
        &self.source
    }

    pub fn target(&self) -> &ComplexSpec {
        &self.target
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// The modulus all computations with this map run at.
    pub fn work(&self) -> Modulus {
        Modulus::new(self.source.p(), self.source.precision().max(self.target.precision())).expect("valid modulus")
    }

    /// Image in the target quotient, at the work modulus.
    pub fn apply(&self, w: &LogForm) -> Result<LogForm> {
        let w = self.source.project(&w.with_precision(self.work().precision())?)?;
        let img = (self.apply)(&w)?;
        if img.degree() != w.degree() + self.shift && !img.is_zero() {
            return Err(Error::InvalidMap(format!("degree {} maps to degree {}", w.degree(), img.degree())));
        }
        let img = img.with_precision(self.work().precision())?;
        self.target.project(&img).map_err(|e| Error::InvalidMap(format!("image of {w} leaves the target: {e}")))
    }

    /// Verifies on every basis element over the window, in degree `i`, that
    /// the map is well defined on the quotient, on the coefficient ring, and
    /// commutes with `d`.
    pub fn check(&self, i: usize, w: &DegreeWindow) -> Result<()> {
        let work = self.work();
        let n = self.source.roster().len();
        let kill = work.pow_p(self.source.precision());
        for mu in w.multidegrees() {
            for s in crate::forms::Subset::all_of_size(n, i) {
                let e = exponent_of(self.source.roster(), &mu, s);
                if !self.source.in_ambient(s, &e) {
                    continue;
                }
                let x = LogForm::from_raw(self.source.roster(), work, i, [((s, e.clone()), 1)]);
                let fx = (self.apply)(&x)
                    .and_then(|y| self.target.project(&y.with_precision(work.precision())?))
                    .map_err(|e| Error::InvalidMap(format!("at {x}: {e}")))?;
                if self.source.in_sub(s, &e) {
                    if !fx.is_zero() {
                        return Err(Error::InvalidMap(format!("{x} is zero in the source but maps to {fx}")));
                    }
                    continue;
                }
                if kill != 0 && !fx.scale(kill).is_zero() {
                    let y = self.target.project(&fx.scale(kill))?;
                    if !y.is_zero() {
                        return Err(Error::InvalidMap(format!("p^{} {x} maps to {y}", self.source.precision())));
                    }
                }
                let lhs = self.target.d(&fx)?;
                let rhs = self.apply(&self.source.d(&x)?)?;
                if lhs != rhs && !(lhs.is_zero() && rhs.is_zero()) {
                    return Err(Error::InvalidMap(format!("d does not commute at {x}: {lhs} vs {rhs}")));
                }
            }
        }
        Ok(())
    }
}

/// The basis vectors of degree `i` over a window: one sparse unit vector per
/// quotient basis element, plus the relation rows `p^k e`.
fn chain_basis(spec: &ComplexSpec, i: usize, w: &DegreeWindow, work: Modulus) -> (Vec<LogForm>, Vec<SparseVec>) {
    let rel = work.pow_p(spec.precision());
    let mut forms = Vec::new();
    let mut rels = Vec::new();
    for mu in w.multidegrees() {
        let pc = spec.piece(&mu);
        for j in 0..pc.dim(i) {
            let mut v = vec![0; pc.dim(i)];
            v[j] = 1;
            forms.push(pc.form(i, &v, work));
            if rel != 0 {
                let mut r = SparseVec::new();
                r.insert((mu.clone(), j), rel);
                rels.push(r);
            }
        }
    }
    (forms, rels)
}

/// Class generators and boundary rows for the pieces of a window.
struct WindowCohomology {
    gens: Vec<LogForm>,
    boundary: Vec<SparseVec>,
    cycles: Vec<SparseVec>,
}

fn window_cohomology(spec: &ComplexSpec, i: usize, w: &DegreeWindow, work: Modulus) -> WindowCohomology {
    let mut out = WindowCohomology { gens: Vec::new(), boundary: Vec::new(), cycles: Vec::new() };
    for mu in w.multidegrees() {
        let pc = spec.piece(&mu);
        if pc.dim(i) == 0 {
            continue;
        }
        let (_, gens) = pc.cohomology(i, spec.precision(), work);
        out.gens.extend(gens.iter().map(|g| pc.form(i, g, work)));
        out.boundary.extend(pc.boundary_rows(i, spec.precision(), work));
        out.cycles.extend(pc.cycles(i, spec.precision(), work).raw_rows().iter().map(|r| pc.sparse(r)));
    }
    out
}

/// Boundary rows (including relations) of every target piece a set of
/// vectors touches.
fn boundaries_touching(spec: &ComplexSpec, i: usize, vs: &[SparseVec], work: Modulus) -> Vec<SparseVec> {
    let pieces: BTreeSet<&Exponent> = vs.iter().flat_map(|v| v.keys().map(|(mu, _)| mu)).collect();
    pieces.into_iter().flat_map(|mu| spec.piece(mu).boundary_rows(i, spec.precision(), work)).collect()
}

fn combine(vs: &[SparseVec], coeffs: &[(usize, u64)], work: Modulus) -> SparseVec {
    let mut out = SparseVec::new();
    for &(j, c) in coeffs {
        for (k, &x) in &vs[j] {
            let e = out.entry(k.clone()).or_insert(0);
            *e = work.add(*e, work.mul(c, x));
        }
    }
    out.retain(|_, x| *x != 0);
    out
}

/// The map on `H^i` of the source window.
#[derive(Debug, Clone, Serialize)]
pub struct InducedMap {
    /// Source class generators, as form strings.
    pub source_classes: Vec<String>,
    /// Target class generators, as form strings.
    pub target_classes: Vec<String>,
    /// Column `j` expresses the image of source class `j` in the target classes.
    pub matrix: Vec<Vec<u64>>,
    pub injective: bool,
    pub surjective: bool,
    /// A source class with zero image, when not injective.
    pub kernel_witness: Option<String>,
    /// A target class outside the image, when not surjective.
    pub cokernel_witness: Option<String>,
}

impl InducedMap {
    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.surjective
    }
}

/// The map on `H^i` induced by a chain map, from classes supported in
/// `window` to classes supported in `target_window`.
pub fn induced_map(map: &ChainMap, i: usize, window: &DegreeWindow, target_window: &DegreeWindow) -> Result<InducedMap> {
    map.check(i, window)?;
    if i > 0 {
        map.check(i - 1, window)?;
    }
    let work = map.work();
    let (src, tgt) = (map.source(), map.target());
    let it = i + map.shift();
    let s = window_cohomology(src, i, window, work);
    let t = window_cohomology(tgt, it, target_window, work);
    let images: Vec<SparseVec> =
        s.gens.iter().map(|g| map.apply(g).and_then(|y| sparse_of(tgt, &y))).collect::<Result<_>>()?;
    let mut tb = boundaries_touching(tgt, it, &images, work);
    tb.extend(t.boundary.iter().cloned());

    // Injectivity: combinations with image in B_target must be boundaries.
    let mut rows = images.clone();
    rows.extend(tb.iter().cloned());
    let span = SpanSet::new(work, &rows);
    let src_vecs: Vec<SparseVec> = s.gens.iter().map(|g| sparse_of(src, g)).collect::<Result<_>>()?;
    let src_b = SpanSet::new(work, &s.boundary);
    let mut kernel_witness = None;
    for kv in span.left_kernel(&rows) {
        let lam: Vec<(usize, u64)> = kv.into_iter().filter(|(j, _)| *j < images.len()).collect();
        let x = combine(&src_vecs, &lam, work);
        if !x.is_empty() && !src_b.contains(&x) {
            kernel_witness = Some(form_of(src, i, &x, work).to_string());
            break;
        }
    }

    // Surjectivity: every cycle of the target window is hit modulo boundaries.
    let mut cokernel_witness = None;
    for z in &t.cycles {
        if !span.contains(z) {
            cokernel_witness = Some(form_of(tgt, it, z, work).to_string());
            break;
        }
    }

    // Matrix against target class generators and boundaries.
    let tvecs: Vec<SparseVec> = t.gens.iter().map(|g| sparse_of(tgt, g)).collect::<Result<_>>()?;
    let mut basis_rows = tvecs.clone();
    basis_rows.extend(tb.iter().cloned());
    let bspan = SpanSet::new(work, &basis_rows);
    let mut matrix = vec![vec![0; images.len()]; tvecs.len()];
    for (j, img) in images.iter().enumerate() {
        let c = bspan.solve(img).ok_or_else(|| {
            Error::Window(format!("image of source class {j} is not supported in the target window {target_window}"))
        })?;
        for (r, x) in c {
            if r < tvecs.len() {
                matrix[r][j] = x;
            }
        }
    }

    Ok(InducedMap {
        source_classes: s.gens.iter().map(|g| g.to_string()).collect(),
        target_classes: t.gens.iter().map(|g| g.to_string()).collect(),
        matrix,
        injective: kernel_witness.is_none(),
        surjective: cokernel_witness.is_none(),
        kernel_witness,
        cokernel_witness,
    })
}

/// True when two chain maps with the same source and target induce the
/// same map on `H^i` of the window.
pub fn maps_agree(f: &ChainMap, g: &ChainMap, i: usize, window: &DegreeWindow) -> Result<bool> {
    if f.source() != g.source() || f.target() != g.target() || f.shift() != g.shift() {
        return Err(Error::InvalidArgument("maps have different source or target".into()));
    }
    f.check(i, window)?;
    g.check(i, window)?;
    let work = f.work();
    let it = i + f.shift();
    let s = window_cohomology(f.source(), i, window, work);
    for z in &s.gens {
        let diff = f.apply(z)?.try_sub(&g.apply(z)?)?;
        let v = sparse_of(f.target(), &diff)?;
        let b = boundaries_touching(f.target(), it, std::slice::from_ref(&v), work);
        if !SpanSet::new(work, &b).contains(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of checking `A → B → C` in degree `i` on windows.
#[derive(Debug, Clone, Serialize)]
pub struct ExactnessReport {
    pub degree: usize,
    pub composite_zero: bool,
    pub injective_left: bool,
    pub exact_middle: bool,
    pub surjective_right: bool,
    pub cohomology_exact_middle: bool,
    pub counterexample: Option<String>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.composite_zero && self.injective_left && self.exact_middle && self.surjective_right && self.cohomology_exact_middle
    }
}

/// Checks that `0 → A → B → C → 0` is exact in degree `i` of `B`, and that
/// `H(A) → H(B) → H(C)` is exact at `H(B)`. The windows must correspond:
/// `f` maps the `A` window into the `B` window and `g` the `B` window onto
/// the `C` window.
pub fn verify_exact_sequence(
    f: &ChainMap,
    g: &ChainMap,
    i: usize,
    windows: [&DegreeWindow; 3],
) -> Result<ExactnessReport> {
    if f.target() != g.source() {
        return Err(Error::InvalidMap("maps are not composable".into()));
    }
    let [wa, wb, wc] = windows;
    // Below the shift the left term is zero.
    let ia = i.checked_sub(f.shift());
    let ic = i + g.shift();
    if let Some(ia) = ia {
        f.check(ia, wa)?;
        if ia > 0 {
            f.check(ia - 1, wa)?;
        }
    }
    g.check(i, wb)?;
    if i > 0 {
        g.check(i - 1, wb)?;
    }
    let work = Modulus::new(f.source().p(), f.work().precision().max(g.work().precision()))?;
    let (a, b, c) = (f.source(), f.target(), g.target());
    let mut report = ExactnessReport {
        degree: i,
        composite_zero: true,
        injective_left: true,
        exact_middle: true,
        surjective_right: true,
        cohomology_exact_middle: true,
        counterexample: None,
    };
    let lift = |w: &LogForm| w.with_precision(work.precision());

    let (a_basis, _) = match ia {
        Some(ia) => chain_basis(a, ia, wa, work),
        None => (Vec::new(), Vec::new()),
    };
    let (b_basis, b_rel) = chain_basis(b, i, wb, work);
    let (c_basis, c_rel) = chain_basis(c, ic, wc, work);
    let fa: Vec<SparseVec> =
        a_basis.iter().map(|x| f.apply(x).and_then(|y| sparse_of(b, &lift(&y)?))).collect::<Result<_>>()?;
    let gb: Vec<SparseVec> =
        b_basis.iter().map(|x| g.apply(x).and_then(|y| sparse_of(c, &lift(&y)?))).collect::<Result<_>>()?;

    // g ∘ f = 0.
    for x in &a_basis {
        let y = g.apply(&lift(&f.apply(x)?)?)?;
        if !y.is_zero() {
            report.composite_zero = false;
            report.counterexample.get_or_insert(format!("g(f({x})) = {y}"));
        }
    }

    // f injective on chains.
    let mut rows = fa.clone();
    rows.extend(relations_touching(b, i, &fa, work));
    let span = SpanSet::new(work, &rows);
    let a_order = a.p().pow(a.precision());
    'inj: for kv in span.left_kernel(&rows) {
        for &(j, lam) in kv.iter().filter(|(j, _)| *j < fa.len()) {
            if lam % a_order != 0 {
                report.injective_left = false;
                report.counterexample.get_or_insert(format!("f kills a nonzero multiple of {}", a_basis[j]));
                break 'inj;
            }
        }
    }

    // ker g ⊆ im f on chains.
    let mut grows = gb.clone();
    grows.extend(relations_touching(c, ic, &gb, work));
    let gspan = SpanSet::new(work, &grows);
    let b_vecs: Vec<SparseVec> = b_basis.iter().map(|x| sparse_of(b, x)).collect::<Result<_>>()?;
    let mut im_f = fa.clone();
    im_f.extend(b_rel.iter().cloned());
    let im_f_span = SpanSet::new(work, &im_f);
    for kv in gspan.left_kernel(&grows) {
        let lam: Vec<(usize, u64)> = kv.into_iter().filter(|(j, _)| *j < gb.len()).collect();
        let x = combine(&b_vecs, &lam, work);
        if !x.is_empty() && !im_f_span.contains(&x) {
            report.exact_middle = false;
            report.counterexample.get_or_insert(format!("{} is in ker g but not in im f", form_of(b, i, &x, work)));
            break;
        }
    }

    // g surjective on chains.
    let mut onto = gb.clone();
    onto.extend(c_rel.iter().cloned());
    let onto_span = SpanSet::new(work, &onto);
    for x in &c_basis {
        let v = sparse_of(c, x)?;
        if !onto_span.contains(&v) {
            report.surjective_right = false;
            report.counterexample.get_or_insert(format!("{x} is not in the image of g"));
            break;
        }
    }

    // Exactness of H(A) → H(B) → H(C) at H(B).
    let hb = window_cohomology(b, i, wb, work);
    let ha_gens = match ia {
        Some(ia) => window_cohomology(a, ia, wa, work).gens,
        None => Vec::new(),
    };
    let images: Vec<SparseVec> =
        hb.gens.iter().map(|z| g.apply(z).and_then(|y| sparse_of(c, &lift(&y)?))).collect::<Result<_>>()?;
    let mut hrows = images.clone();
    hrows.extend(boundaries_touching(c, ic, &images, work));
    let hspan = SpanSet::new(work, &hrows);
    let zb: Vec<SparseVec> = hb.gens.iter().map(|z| sparse_of(b, z)).collect::<Result<_>>()?;
    let mut target_rows: Vec<SparseVec> =
        ha_gens.iter().map(|z| f.apply(z).and_then(|y| sparse_of(b, &lift(&y)?))).collect::<Result<_>>()?;
    target_rows.extend(hb.boundary.iter().cloned());
    let tspan = SpanSet::new(work, &target_rows);
    for kv in hspan.left_kernel(&hrows) {
        let lam: Vec<(usize, u64)> = kv.into_iter().filter(|(j, _)| *j < images.len()).collect();
        let x = combine(&zb, &lam, work);
        if !x.is_empty() && !tspan.contains(&x) {
            report.cohomology_exact_middle = false;
            report.counterexample.get_or_insert(format!("class of {} maps to zero but is not hit", form_of(b, i, &x, work)));
            break;
        }
    }
    Ok(report)
}

fn relations_touching(spec: &ComplexSpec, i: usize, vs: &[SparseVec], work: Modulus) -> Vec<SparseVec> {
    let rel = work.pow_p(spec.precision());
    if rel == 0 {
        return Vec::new();
    }
    let pieces: BTreeSet<&Exponent> = vs.iter().flat_map(|v| v.keys().map(|(mu, _)| mu)).collect();
    pieces
        .into_iter()
        .flat_map(|mu| {
            (0..spec.piece(mu).dim(i)).map(move |j| {
                let mut r = SparseVec::new();
                r.insert((mu.clone(), j), rel);
                r
            })
        })
        .collect()
}

/// The short exact sequence `0 → C'[-1] → Q → C' → 0` of a one-step pole
/// quotient `Q = t^-b Ω / t^-(b - e_t) Ω` along `t`, where `C'` is the
/// complex of the remaining variables with the remaining poles. The first
/// map sends `β` to `t^-b β ∧ dlog t`, the second keeps the part free of
/// `dlog t`.
pub struct PoleStepSequence {
    pub sub: ComplexSpec,
    pub quotient: ComplexSpec,
    pub phi: ChainMap,
    pub psi: ChainMap,
}

pub fn pole_step_sequence(
    roster: &crate::laurent::VarRoster,
    b: &crate::forms::PoleVector,
    var: &str,
    p: u64,
    n: u32,
) -> Result<PoleStepSequence> {
    use super::PoleCondition;
    use crate::forms::Subset;
    let t = roster.require_log(var)?;
    let bt = b.get(t);
    let mut sub_cond: Vec<PoleCondition> =
        (0..roster.len()).map(|i| if roster.is_log(i) { PoleCondition::Pole(b.get(i)) } else { PoleCondition::Regular }).collect();
    sub_cond[t] = PoleCondition::Pole(bt - 1);
    let quotient = ComplexSpec::log_poles(roster, b, p, n)?.quotient_by(sub_cond)?;
    let small = roster.without(t);
    let entries: Vec<(&str, i64)> =
        (0..roster.len()).filter(|&i| i != t && roster.is_log(i)).map(|i| (roster.name(i), b.get(i))).collect();
    let sub = ComplexSpec::log_poles(&small, &crate::forms::PoleVector::new(&small, &entries)?, p, n)?;
    let up = move |s: Subset| Subset::from_indices(&s.indices().map(|i| if i >= t { i + 1 } else { i }).collect::<Vec<_>>());
    let down = move |s: Subset| Subset::from_indices(&s.indices().map(|i| if i > t { i - 1 } else { i }).collect::<Vec<_>>());
    let (big, little) = (roster.clone(), small.clone());
    let phi = ChainMap::new(&sub, &quotient, 1, move |w| {
        let terms = w.terms().map(|(s, e, c)| {
            let mut f = e.clone();
            f.insert(t, -(bt as i32));
            // β ∧ dlog t written in roster order.
            let st = up(s);
            let c = if st.count_above(t) % 2 == 0 { c } else { w.modulus().neg(c) };
            ((st.with(t), f), c)
        });
        Ok(LogForm::from_raw(&big, w.modulus(), w.degree() + 1, terms.collect::<Vec<_>>()))
    })?;
    let psi = ChainMap::new(&quotient, &sub, 0, move |w| {
        let terms = w.terms().filter(|(s, e, _)| !s.contains(t) && e[t] == -(bt as i32)).map(|(s, e, c)| {
            let mut f = e.clone();
            f.remove(t);
            ((down(s), f), c)
        });
        Ok(LogForm::from_raw(&little, w.modulus(), w.degree(), terms.collect::<Vec<_>>()))
    })?;
    Ok(PoleStepSequence { sub, quotient, phi, psi })
}
