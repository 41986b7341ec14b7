//! Howell canonical form over Z/p^N.
//!
//! Z/p^N is a chain ring, so the form is computed by column-wise elimination
//! with a minimal-valuation pivot, normalising each pivot to a power of p and
//! feeding the annihilator row `p^(N-v) * pivot_row` back into the pending
//! set. The result satisfies the Howell property: for every column `c`, the
//! rows whose pivot lies at or after `c` span exactly the elements of the row
//! span that vanish before `c`. That property is what makes greedy reduction a
//! complete membership test and makes kernels readable from an augmented form.

use super::{Modulus, Scalar};
use crate::error::{Error, Result};

/// A matrix together with its Howell form and the transform expressing each
/// canonical row in terms of the input rows.
#[derive(Debug, Clone)]
pub struct HowellMatrix {
    modulus: Modulus,
    cols: usize,
    input: Vec<Vec<u64>>,
    rows: Vec<Vec<u64>>,
    pivots: Vec<(usize, u32)>,
    transform: Vec<Vec<u64>>,
}

impl HowellMatrix {
    /// Builds the Howell form of a matrix of scalars sharing one modulus.
    pub fn new(m: &[Vec<Scalar>]) -> Result<Self> {
        let Some(first) = m.iter().flatten().next() else {
            return Err(Error::InvalidArgument("empty matrix has no modulus".into()));
        };
        let modulus = first.modulus();
        let cols = m[0].len();
        let mut raw = Vec::with_capacity(m.len());
        for row in m {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            let mut r = Vec::with_capacity(cols);
            for s in row {
                if s.modulus() != modulus {
                    return Err(Error::ModulusMismatch(format!("{} vs {}", s.modulus(), modulus)));
                }
                r.push(s.value());
            }
            raw.push(r);
        }
        Ok(Self::from_residues(modulus, cols, raw))
    }

    /// Builds the form from raw residues (all `< p^N`).
    pub fn from_residues(modulus: Modulus, cols: usize, input: Vec<Vec<u64>>) -> Self {
        let nin = input.len();
        let mut pending: Vec<(Vec<u64>, Vec<u64>)> = input
            .iter()
            .enumerate()
            .filter(|(_, r)| r.iter().any(|&x| x != 0))
            .map(|(i, r)| {
                let mut t = vec![0; nin];
                t[i] = 1 % modulus.order();
                (r.clone(), t)
            })
            .collect();
        let mut rows = Vec::new();
        let mut transform = Vec::new();
        let mut pivots = Vec::new();

        for c in 0..cols {
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, (r, _))| r[c] != 0)
                .min_by_key(|(i, (r, _))| (modulus.valuation(r[c]), *i))
                .map(|(i, _)| i);
            let Some(best) = best else { continue };
            let (mut prow, mut ptr) = pending.remove(best);
            let (v, unit) = modulus.split(prow[c]);
            let uinv = modulus.inv(unit).expect("unit part is invertible");
            scale(&modulus, &mut prow, uinv);
            scale(&modulus, &mut ptr, uinv);
            let pv = modulus.p().pow(v);

            for (r, t) in pending.iter_mut() {
                if r[c] != 0 {
                    let q = r[c] / pv;
                    axpy(&modulus, r, &prow, modulus.neg(q % modulus.order()));
                    axpy(&modulus, t, &ptr, modulus.neg(q % modulus.order()));
                }
            }
            if v > 0 {
                let ann = modulus.p().pow(modulus.precision() - v);
                let mut arow = prow.clone();
                let mut atr = ptr.clone();
                scale(&modulus, &mut arow, ann);
                scale(&modulus, &mut atr, ann);
                pending.push((arow, atr));
            }
            pending.retain(|(r, _)| r.iter().any(|&x| x != 0));
            rows.push(prow);
            transform.push(ptr);
            pivots.push((c, v));
        }
        debug_assert!(pending.is_empty());

        for i in 0..rows.len() {
            let (c, v) = pivots[i];
            let pv = modulus.p().pow(v);
            for j in 0..i {
                let e = rows[j][c];
                let q = e / pv;
                if q != 0 {
                    let (upper, lower) = rows.split_at_mut(i);
                    axpy(&modulus, &mut upper[j], &lower[0], modulus.neg(q));
                    let (tu, tl) = transform.split_at_mut(i);
                    axpy(&modulus, &mut tu[j], &tl[0], modulus.neg(q));
                }
            }
        }

        HowellMatrix { modulus, cols, input, rows, pivots, transform }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn input_rows(&self) -> usize {
        self.input.len()
    }

    /// Rows of the canonical form.
    pub fn canonical_rows(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_residue(x, self.modulus)).collect())
            .collect()
    }

    pub(crate) fn raw_rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Pivot columns and the valuations of the pivot entries.
    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// log_p of the number of elements of the row span.
    pub fn log_size(&self) -> u32 {
        self.pivots.iter().map(|(_, v)| self.modulus.precision() - v).sum()
    }

    /// Coefficients `c` with `c * input = v`, if `v` lies in the row span.
    pub fn span_membership(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut raw = Vec::with_capacity(v.len());
        for s in v {
            if s.modulus() != self.modulus {
                return Err(Error::ModulusMismatch(format!("{} vs {}", s.modulus(), self.modulus)));
            }
            raw.push(s.value());
        }
        Ok(self.solve(&raw).map(|c| {
            c.into_iter().map(|x| Scalar::from_residue(x, self.modulus)).collect()
        }))
    }

    /// Raw-residue version of [`span_membership`](Self::span_membership).
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let mut v = v.to_vec();
        let mut coeffs = vec![0u64; self.input.len()];
        let mut next = 0;
        for c in 0..self.cols {
            if next < self.pivots.len() && self.pivots[next].0 == c {
                let pv = self.modulus.p().pow(self.pivots[next].1);
                let e = v[c];
                if !e.is_multiple_of(pv) {
                    return None;
                }
                let q = e / pv;
                if q != 0 {
                    axpy(&self.modulus, &mut v, &self.rows[next], self.modulus.neg(q));
                    axpy(&self.modulus, &mut coeffs, &self.transform[next], q);
                }
                next += 1;
            } else if v[c] != 0 {
                return None;
            }
        }
        Some(coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduces_to_zero(v)
    }

    fn reduces_to_zero(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        let mut next = 0;
        for c in 0..self.cols {
            if next < self.pivots.len() && self.pivots[next].0 == c {
                let pv = self.modulus.p().pow(self.pivots[next].1);
                if !v[c].is_multiple_of(pv) {
                    return false;
                }
                let q = v[c] / pv;
                if q != 0 {
                    axpy(&self.modulus, &mut v, &self.rows[next], self.modulus.neg(q));
                }
                next += 1;
            } else if v[c] != 0 {
                return false;
            }
        }
        true
    }
}

/// Generators of the left kernel `{x : x * M = 0}` of a residue matrix.
pub fn kernel(modulus: Modulus, rows: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let n = rows.len();
    let aug: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = Vec::with_capacity(cols + n);
            a.extend_from_slice(r);
            a.extend((0..n).map(|j| if i == j { 1 % modulus.order() } else { 0 }));
            a
        })
        .collect();
    let h = HowellMatrix::from_residues(modulus, cols + n, aug);
    h.rows
        .iter()
        .zip(&h.pivots)
        .filter(|(_, (c, _))| *c >= cols)
        .map(|(r, _)| r[cols..].to_vec())
        .collect()
}

fn scale(m: &Modulus, row: &mut [u64], k: u64) {
    for x in row.iter_mut() {
        *x = m.mul(*x, k);
    }
}

/// `y += k * x`.
pub(crate) fn axpy(m: &Modulus, y: &mut [u64], x: &[u64], k: u64) {
    if k == 0 {
        return;
    }
    for (a, &b) in y.iter_mut().zip(x) {
        if b != 0 {
            *a = m.add(*a, m.mul(b, k));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64, n: u32) -> Modulus {
        Modulus::new(p, n).unwrap()
    }

    fn sc(md: Modulus, rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&x| md.scalar(x)).collect()).collect()
    }

    /// Every element of the span, by enumerating all coefficient vectors.
    fn brute_span(md: Modulus, rows: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
        let q = md.order();
        let mut out = std::collections::BTreeSet::new();
        let total = q.pow(rows.len() as u32);
        for mut idx in 0..total {
            let mut v = vec![0; cols];
            for r in rows {
                let c = idx % q;
                idx /= q;
                axpy(&md, &mut v, r, c);
            }
            out.insert(v);
        }
        out.into_iter().collect()
    }

    #[test]
    fn zero_matrix_has_no_rows() {
        let md = m(2, 2);
        let h = HowellMatrix::new(&sc(md, &[&[0]])).unwrap();
        assert!(h.canonical_rows().is_empty());
        assert_eq!(h.log_size(), 0);
    }

    #[test]
    fn identity_is_canonical() {
        let md = m(3, 2);
        let id = sc(md, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let h = HowellMatrix::new(&id).unwrap();
        assert_eq!(h.canonical_rows(), id);
    }

    #[test]
    fn membership_over_z4() {
        let md = m(2, 2);
        let h = HowellMatrix::new(&sc(md, &[&[2, 0], &[0, 2]])).unwrap();
        // Brute-force span: {0,2}^2.
        let span = brute_span(md, &[vec![2, 0], vec![0, 2]], 2);
        assert_eq!(span.len(), 4);
        assert!(span.contains(&vec![2, 2]));
        assert!(!span.contains(&vec![1, 0]));
        assert!(h.span_membership(&[md.scalar(2), md.scalar(2)]).unwrap().is_some());
        assert!(h.span_membership(&[md.scalar(1), md.scalar(0)]).unwrap().is_none());
    }

    #[test]
    fn membership_over_z9() {
        let md = m(3, 2);
        let h = HowellMatrix::new(&sc(md, &[&[3]])).unwrap();
        let c = h.span_membership(&[md.scalar(6)]).unwrap().unwrap();
        assert_eq!(c, vec![md.scalar(2)]);
        assert!(h.span_membership(&[md.scalar(1)]).unwrap().is_none());
        let z = h.span_membership(&[md.scalar(0)]).unwrap().unwrap();
        assert_eq!(z, vec![md.scalar(0)]);
    }

    #[test]
    fn first_row_is_member() {
        let md = m(2, 3);
        let rows = sc(md, &[&[2, 4, 1], &[6, 0, 3]]);
        let h = HowellMatrix::new(&rows).unwrap();
        assert!(h.span_membership(&rows[0]).unwrap().is_some());
    }

    #[test]
    fn errors() {
        let a = m(2, 2);
        let b = m(2, 3);
        let mixed = vec![vec![a.scalar(1), b.scalar(1)]];
        assert!(matches!(HowellMatrix::new(&mixed), Err(Error::ModulusMismatch(_))));
        let h = HowellMatrix::new(&sc(a, &[&[1, 0]])).unwrap();
        assert!(matches!(
            h.span_membership(&[a.scalar(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn howell_property_needs_annihilator_rows() {
        // Over Z/4 the span of [2, 1] contains [0, 2] = 2 * [2, 1].
        let md = m(2, 2);
        let h = HowellMatrix::new(&sc(md, &[&[2, 1]])).unwrap();
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
        assert_eq!(h.log_size(), 2);
    }

    #[test]
    fn kernel_over_z8() {
        let md = m(2, 3);
        // x * [4] = 0 mod 8  <=>  x even.
        let k = kernel(md, &[vec![4]], 1);
        let h = HowellMatrix::from_residues(md, 1, k);
        assert!(h.contains(&[2]));
        assert!(!h.contains(&[1]));
    }

    fn small_matrix(max_rows: usize) -> impl Strategy<Value = (u64, u32, Vec<Vec<u64>>)> {
        prop_oneof![Just((2u64, 2u32)), Just((3u64, 2u32))].prop_flat_map(move |(p, n)| {
            let q = p.pow(n);
            (1usize..=3).prop_flat_map(move |cols| {
                prop::collection::vec(prop::collection::vec(0..q, cols), 0..=max_rows)
                    .prop_map(move |rows| (p, n, rows))
            })
        })
    }

    proptest! {
        #[test]
        fn membership_agrees_with_enumeration((p, n, rows) in small_matrix(2)) {
            let md = m(p, n);
            let cols = rows.first().map(|r| r.len()).unwrap_or(1);
            let rows: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.len() == cols).collect();
            let h = HowellMatrix::from_residues(md, cols, rows.clone());
            let span = brute_span(md, &rows, cols);
            prop_assert_eq!(h.log_size() as usize, (span.len() as f64).log(p as f64).round() as usize);
            // Every vector of the ambient space.
            let q = md.order();
            for mut idx in 0..q.pow(cols as u32) {
                let mut v = vec![0; cols];
                for x in v.iter_mut() { *x = idx % q; idx /= q; }
                let inside = span.binary_search(&v).is_ok();
                prop_assert_eq!(h.contains(&v), inside);
                if let Some(c) = h.solve(&v) {
                    let mut w = vec![0; cols];
                    for (r, k) in rows.iter().zip(&c) { axpy(&md, &mut w, r, *k); }
                    prop_assert_eq!(w, v);
                }
            }
        }

        #[test]
        fn idempotent((p, n, rows) in small_matrix(3)) {
            let md = m(p, n);
            let cols = rows.first().map(|r| r.len()).unwrap_or(1);
            let rows: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.len() == cols).collect();
            let h = HowellMatrix::from_residues(md, cols, rows);
            let again = HowellMatrix::from_residues(md, cols, h.raw_rows().to_vec());
            prop_assert_eq!(again.raw_rows(), h.raw_rows());
        }

        #[test]
        fn kernel_is_exact((p, n, rows) in small_matrix(3)) {
            let md = m(p, n);
            let cols = rows.first().map(|r| r.len()).unwrap_or(1);
            let rows: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.len() == cols).collect();
            let k = kernel(md, &rows, cols);
            let kh = HowellMatrix::from_residues(md, rows.len().max(1), if rows.is_empty() { vec![] } else { k.clone() });
            for x in &k {
                let mut w = vec![0; cols];
                for (r, c) in rows.iter().zip(x) { axpy(&md, &mut w, r, *c); }
                prop_assert!(w.iter().all(|&e| e == 0));
            }
            // Every kernel element found by enumeration lies in the span of the generators.
            if !rows.is_empty() {
                let q = md.order();
                for mut idx in 0..q.pow(rows.len() as u32) {
                    let mut x = vec![0; rows.len()];
                    for e in x.iter_mut() { *e = idx % q; idx /= q; }
                    let mut w = vec![0; cols];
                    for (r, c) in rows.iter().zip(&x) { axpy(&md, &mut w, r, *c); }
                    if w.iter().all(|&e| e == 0) {
                        prop_assert!(kh.contains(&x));
                    }
                }
            }
        }
    }
}
