//! Row spans of sparse vectors whose coordinates are grouped into pieces.
//!
//! Rows touching a common piece are merged into one block by union-find; the
//! blocks are independent direct summands, so membership and kernels are
//! computed block by block with dense Howell forms.

use std::collections::{BTreeMap, HashMap};

use crate::laurent::Exponent;
use crate::ring::{kernel, HowellMatrix, Modulus};

/// A coordinate: the piece (multidegree) and the index inside it.
pub(crate) type Coord = (Exponent, usize);
pub(crate) type SparseVec = BTreeMap<Coord, u64>;

struct Block {
    index: HashMap<Coord, usize>,
    rows: Vec<usize>,
    howell: HowellMatrix,
}

pub(crate) struct SpanSet {
    modulus: Modulus,
    blocks: Vec<Block>,
    piece_block: HashMap<Exponent, usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl SpanSet {
    pub fn new(modulus: Modulus, rows: &[SparseVec]) -> Self {
        let mut node: HashMap<Exponent, usize> = HashMap::new();
        let mut pieces: Vec<Exponent> = Vec::new();
        let mut parent: Vec<usize> = Vec::new();
        for row in rows {
            let mut first: Option<usize> = None;
            for (mu, _) in row.keys() {
                let id = *node.entry(mu.clone()).or_insert_with(|| {
                    pieces.push(mu.clone());
                    parent.push(parent.len());
                    parent.len() - 1
                });
                match first {
                    None => first = Some(id),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, id));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut root_block: BTreeMap<usize, usize> = BTreeMap::new();
        let mut piece_block = HashMap::new();
        for (id, mu) in pieces.iter().enumerate() {
            let r = find(&mut parent, id);
            let next = root_block.len();
            let b = *root_block.entry(r).or_insert(next);
            piece_block.insert(mu.clone(), b);
        }
        let mut coords: Vec<Vec<Coord>> = vec![Vec::new(); root_block.len()];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); root_block.len()];
        for (k, row) in rows.iter().enumerate() {
            let Some((mu, _)) = row.keys().next() else { continue };
            let b = piece_block[mu];
            members[b].push(k);
            coords[b].extend(row.keys().cloned());
        }
        let blocks = coords
            .into_iter()
            .zip(members)
            .map(|(mut cs, rs)| {
                cs.sort();
                cs.dedup();
                let index: HashMap<Coord, usize> = cs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
                let dense: Vec<Vec<u64>> = rs
                    .iter()
                    .map(|&k| {
                        let mut v = vec![0; cs.len()];
                        for (c, &x) in &rows[k] {
                            v[index[c]] = x;
                        }
                        v
                    })
                    .collect();
                let howell = HowellMatrix::from_residues(modulus, cs.len(), dense);
                Block { index, rows: rs, howell }
            })
            .collect();
        SpanSet { modulus, blocks, piece_block }
    }

    /// Splits a vector into dense block parts; `None` if it touches a
    /// coordinate no row reaches.
    fn split(&self, v: &SparseVec) -> Option<BTreeMap<usize, Vec<u64>>> {
        let mut parts: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (c, &x) in v {
            if x % self.modulus.order() == 0 {
                continue;
            }
            let b = *self.piece_block.get(&c.0)?;
            let i = *self.blocks[b].index.get(c)?;
            let n = self.blocks[b].index.len();
            parts.entry(b).or_insert_with(|| vec![0; n])[i] = x % self.modulus.order();
        }
        Some(parts)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        match self.split(v) {
            None => false,
            Some(parts) => parts.iter().all(|(b, d)| self.blocks[*b].howell.contains(d)),
        }
    }

    /// Coefficients on the input rows (global row index, coefficient).
    pub fn solve(&self, v: &SparseVec) -> Option<Vec<(usize, u64)>> {
        let parts = self.split(v)?;
        let mut out = Vec::new();
        for (b, d) in parts {
            let blk = &self.blocks[b];
            let c = blk.howell.solve(&d)?;
            out.extend(blk.rows.iter().zip(c).filter(|(_, x)| *x != 0).map(|(&r, x)| (r, x)));
        }
        Some(out)
    }

    /// Generators of the left kernel, as combinations of input rows.
    pub fn left_kernel(&self, rows: &[SparseVec]) -> Vec<Vec<(usize, u64)>> {
        let mut out = Vec::new();
        for blk in &self.blocks {
            let dense: Vec<Vec<u64>> = blk
                .rows
                .iter()
                .map(|&k| {
                    let mut v = vec![0; blk.index.len()];
                    for (c, &x) in &rows[k] {
                        v[blk.index[c]] = x;
                    }
                    v
                })
                .collect();
            for kv in kernel(self.modulus, &dense, blk.index.len()) {
                out.push(blk.rows.iter().zip(kv).filter(|(_, x)| *x != 0).map(|(&r, x)| (r, x)).collect());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(i32, usize, u64)]) -> SparseVec {
        entries.iter().map(|&(m, i, x)| ((vec![m], i), x)).collect()
    }

    #[test]
    fn blocks_are_independent() {
        let m = Modulus::new(2, 2).unwrap();
        let rows = vec![v(&[(0, 0, 2)]), v(&[(1, 0, 1), (1, 1, 1)]), v(&[(1, 1, 1), (2, 0, 1)])];
        let s = SpanSet::new(m, &rows);
        assert!(s.contains(&v(&[(0, 0, 2)])));
        assert!(!s.contains(&v(&[(0, 0, 1)])));
        assert!(s.contains(&v(&[(1, 0, 1), (2, 0, 3)])));
        assert!(!s.contains(&v(&[(5, 0, 1)])));
        let c = s.solve(&v(&[(0, 0, 2), (1, 0, 1), (2, 0, 3)])).unwrap();
        let mut acc: BTreeMap<Coord, u64> = BTreeMap::new();
        for (r, x) in c {
            for (k, &y) in &rows[r] {
                let e = acc.entry(k.clone()).or_insert(0);
                *e = m.add(*e, m.mul(x, y));
            }
        }
        acc.retain(|_, x| *x != 0);
        assert_eq!(acc, v(&[(0, 0, 2), (1, 0, 1), (2, 0, 3)]));
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let m = Modulus::new(3, 1).unwrap();
        let rows = vec![v(&[(0, 0, 1)]), v(&[(0, 0, 2)]), v(&[(4, 1, 1)])];
        let s = SpanSet::new(m, &rows);
        let k = s.left_kernel(&rows);
        assert_eq!(k.len(), 1);
        let mut coeffs = k[0].clone();
        coeffs.sort();
        // λ0 + 2 λ1 = 0 mod 3
        assert_eq!(m.add(coeffs[0].1, m.mul(2, coeffs[1].1)), 0);
    }
}
