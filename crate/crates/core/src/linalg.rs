//! Incremental row echelon form over a finite field.

use crate::field::{Elem, FiniteField};
use smallvec::SmallVec;

/// Longest coordinate vector any supported geometry needs (AG(16, 2) has
/// 2^16 points and homogeneous vectors of length 17).
pub const MAX_DIM: usize = 17;

pub(crate) type Row = [Elem; MAX_DIM];

/// Rows are kept with a leading 1 at their pivot, and every row is reduced
/// against all earlier pivots, so one forward pass decides span membership.
pub(crate) struct Echelon<'f> {
    field: &'f FiniteField,
    dim: usize,
    rows: SmallVec<[(usize, Row); 6]>,
}

impl<'f> Echelon<'f> {
    pub fn new(field: &'f FiniteField, dim: usize) -> Self {
        debug_assert!(dim <= MAX_DIM);
        Self { field, dim, rows: SmallVec::new() }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    fn reduce(&self, v: &mut Row) {
        let f = self.field;
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for j in 0..self.dim {
                    if row[j] != 0 {
                        v[j] = f.sub(v[j], f.mul(c, row[j]));
                    }
                }
            }
        }
    }

    #[inline]
    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = [0; MAX_DIM];
        w[..self.dim].copy_from_slice(v);
        self.reduce(&mut w);
        w[..self.dim].iter().all(|&x| x == 0)
    }

    /// Adds `v` to the row space; returns whether it was independent.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let mut w = [0; MAX_DIM];
        w[..self.dim].copy_from_slice(v);
        self.reduce(&mut w);
        let Some(pivot) = w[..self.dim].iter().position(|&x| x != 0) else {
            return false;
        };
        let s = self.field.inv(w[pivot]).expect("pivot is nonzero");
        for x in w[..self.dim].iter_mut() {
            *x = self.field.mul(*x, s);
        }
        self.rows.push((pivot, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_vectors() {
        let f = FiniteField::new(3).unwrap();
        let mut e = Echelon::new(&f, 3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        // (1,2,0) + 2(0,1,1) = (1,1,2)
        assert!(!e.insert(&[1, 1, 2]));
        assert!(e.contains(&[2, 1, 0]));
        assert!(!e.contains(&[0, 0, 1]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn zero_vector_is_dependent() {
        let f = FiniteField::new(4).unwrap();
        let mut e = Echelon::new(&f, 2);
        assert!(!e.insert(&[0, 0]));
        assert!(e.contains(&[0, 0]));
    }
}
