//! Exact linear algebra over `Q(i)`: reduced row echelon forms, nullspaces
//! and subspaces with a canonical basis.
//!
//! Pivot rule: columns are scanned left to right and the pivot is taken
//! from the smallest row index with a nonzero entry in that column.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

/// Reduced row echelon form of `rows` (zero rows dropped) and its pivot columns.
pub fn rref(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &(&factor * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Incrementally built row space, kept in echelon form keyed by pivot.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ncols: usize,
    rows: BTreeMap<usize, Vector>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vector) -> Vector {
        for (&p, row) in &self.rows {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &(&factor * y);
                    }
                }
            }
        }
        v
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        // keep earlier rows reduced at the new pivot
        for row in self.rows.values_mut() {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &(&factor * y);
                    }
                }
            }
        }
        self.rows.insert(p, v);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(Scalar::is_zero)
    }

    /// Rows in reduced echelon form, ordered by pivot.
    pub fn into_rref(self) -> (Vec<Vector>, Vec<usize>) {
        let pivots = self.rows.keys().copied().collect();
        (self.rows.into_values().collect(), pivots)
    }
}

/// A subspace of `Q(i)^n` stored by its reduced row echelon basis, which
/// makes `==` exact subspace equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit(ambient, i)).collect();
        Subspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut rs = RowSpace::new(ambient);
        for v in vectors {
            rs.insert(v);
        }
        let (basis, pivots) = rs.into_rref();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    /// `{v : row · v = 0 for every row}`.
    pub fn nullspace(ambient: usize, rows: impl IntoIterator<Item = Vector>) -> Self {
        let mut rs = RowSpace::new(ambient);
        for r in rows {
            rs.insert(r);
        }
        let (reduced, pivots) = rs.into_rref();
        let is_pivot: Vec<bool> = {
            let mut mask = vec![false; ambient];
            for &p in &pivots {
                mask[p] = true;
            }
            mask
        };
        let vectors = (0..ambient).filter(|&f| !is_pivot[f]).map(|f| {
            let mut v = vec![Scalar::zero(); ambient];
            v[f] = Scalar::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        });
        Subspace::span(ambient, vectors.collect::<Vec<_>>())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &(&factor * y);
                    }
                }
            }
        }
        v.iter().all(Scalar::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// First basis vector of `self` outside `other`.
    pub fn first_outside(&self, other: &Subspace) -> Option<&Vector> {
        self.basis.iter().find(|v| !other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned().collect::<Vec<_>>(),
        )
    }

    /// Annihilator under the bilinear pairing `Σ w_i v_i`.
    pub fn annihilator(&self) -> Subspace {
        Subspace::nullspace(self.ambient, self.basis.clone())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let rows: Vec<Vector> = self
            .annihilator()
            .basis
            .into_iter()
            .chain(other.annihilator().basis)
            .collect();
        Subspace::nullspace(self.ambient, rows)
    }
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn rref_example() {
        let (r, p) = rref(&[v(&[0, 2, 4]), v(&[1, 1, 1]), v(&[1, 2, 3])], 3);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r, vec![v(&[1, 0, -1]), v(&[0, 1, 2])]);
    }

    #[test]
    fn incremental_matches_batch() {
        let rows = vec![v(&[0, 2, 4, 1]), v(&[1, 1, 1, 0]), v(&[1, 3, 5, 1]), v(&[0, 0, 1, 1])];
        let (batch, bp) = rref(&rows, 4);
        let s = Subspace::span(4, rows);
        assert_eq!(s.basis(), &batch[..]);
        assert_eq!(s.pivots(), &bp[..]);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![v(&[1, 1, 0, 0]), v(&[0, 1, 1, 0])];
        let n = Subspace::nullspace(4, rows.clone());
        assert_eq!(n.dim(), 2);
        for b in n.basis() {
            for r in &rows {
                let dot = b
                    .iter()
                    .zip(r)
                    .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y));
                assert!(dot.is_zero());
            }
        }
        assert!(Subspace::nullspace(3, vec![]).eq(&Subspace::full(3)));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span(3, vec![v(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert!(a.intersect(&b).is_subspace_of(&a));
        assert_eq!(a.first_outside(&b), Some(&v(&[1, 0, 0])));
    }

    #[test]
    fn complex_entries() {
        let i = Scalar::gaussian(0, 1);
        let s = Subspace::span(2, vec![vec![Scalar::one(), i.clone()]]);
        assert!(s.contains(&[i.clone(), Scalar::from_int(-1)]));
        assert!(!s.contains(&[Scalar::one(), Scalar::one()]));
    }
}
