//! Exact row reduction over a [`Scalar`] field.

use crate::scalar::Scalar;

/// An echelon basis built incrementally; each stored row has a leading 1 at its pivot.
#[derive(Clone, Debug)]
pub struct RowSpace<C: Scalar> {
    dim: usize,
    rows: Vec<(usize, Vec<C>)>,
}

impl<C: Scalar> RowSpace<C> {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<C>) -> Vec<C> {
        assert_eq!(v.len(), self.dim, "vector length");
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(*p) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, v: Vec<C>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = C::one() / v[p].clone();
        for x in v.iter_mut().skip(p) {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (r, x) in row.iter_mut().zip(&v).skip(p) {
                    *r = r.clone() - c.clone() * x.clone();
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn contains(&self, v: Vec<C>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

/// Rank of a list of equal-length vectors.
pub fn rank<C: Scalar>(dim: usize, vectors: impl IntoIterator<Item = Vec<C>>) -> usize {
    let mut s = RowSpace::new(dim);
    for v in vectors {
        s.insert(v);
        if s.rank() == dim {
            break;
        }
    }
    s.rank()
}
