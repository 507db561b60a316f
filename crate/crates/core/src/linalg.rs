//! Row reduction over cyclotomic fields.

use crate::scalars::CycloScalar;

/// Incrementally built row-echelon basis of a subspace of `F^width`.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    rows: Vec<(usize, Vec<CycloScalar>)>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, mut v: Vec<CycloScalar>) -> Vec<CycloScalar> {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&factor * r);
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<CycloScalar>) -> bool {
        assert_eq!(v.len(), self.width);
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inverse().expect("nonzero pivot");
        let v: Vec<CycloScalar> = v.iter().map(|x| x * &inv).collect();
        // keep rows fully reduced so `reduce` is a single pass
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x = &*x - &(&factor * r);
                    }
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: Vec<CycloScalar>) -> bool {
        self.reduce(v).iter().all(CycloScalar::is_zero)
    }
}

pub fn rank(rows: impl IntoIterator<Item = Vec<CycloScalar>>, width: usize) -> usize {
    let mut basis = EchelonBasis::new(width);
    for r in rows {
        basis.insert(r);
        if basis.is_full() {
            break;
        }
    }
    basis.rank()
}
