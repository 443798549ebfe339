use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// Rank tolerance applied to user-supplied bases.
pub const INDEPENDENCE_TOL: f64 = 1e-10;
/// Residual below which a vector counts as a member of a subspace.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Linear subspace of the coordinate space of an algebra.
///
/// Keeps the caller's basis and an orthonormal basis of the same span.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
    ortho: DMatrix<f64>,
}

impl Subspace {
    /// Subspace spanned by linearly independent columns of `basis`.
    pub fn from_basis(basis: DMatrix<f64>) -> Result<Self> {
        let k = basis.ncols();
        if k > 0 && linalg::rank(&basis, INDEPENDENCE_TOL) < k {
            return Err(Error::Dependent);
        }
        let ortho = linalg::column_space(&basis, INDEPENDENCE_TOL);
        Ok(Subspace { basis, ortho })
    }

    pub fn from_vectors(n: usize, vectors: &[DVector<f64>]) -> Result<Self> {
        Self::from_basis(linalg::columns(vectors, n))
    }

    /// Span of arbitrary (possibly dependent) vectors; the stored basis is orthonormal.
    pub fn span(n: usize, vectors: &[DVector<f64>]) -> Self {
        let ortho = linalg::column_space(&linalg::columns(vectors, n), INDEPENDENCE_TOL);
        Subspace { basis: ortho.clone(), ortho }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { basis: DMatrix::zeros(n, 0), ortho: DMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { basis: DMatrix::identity(n, n), ortho: DMatrix::identity(n, n) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Basis vectors as columns.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<f64>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// The same span with a reduced echelon basis (pivot entries 1, tiny entries cleared).
    pub fn echelon(&self) -> Subspace {
        let (n, k) = (self.ortho.nrows(), self.ortho.ncols());
        let mut m = self.ortho.transpose();
        let mut r = 0;
        for c in 0..n {
            if r == k {
                break;
            }
            let (p, mag) = (r..k)
                .map(|i| (i, m[(i, c)].abs()))
                .fold((r, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if mag < 1e-8 {
                continue;
            }
            m.swap_rows(r, p);
            let inv = 1.0 / m[(r, c)];
            m.row_mut(r).scale_mut(inv);
            for i in 0..k {
                if i != r {
                    let f = m[(i, c)];
                    if f != 0.0 {
                        let row = m.row(r).into_owned() * f;
                        let mut target = m.row_mut(i);
                        target -= row;
                    }
                }
            }
            r += 1;
        }
        m.apply(|x| {
            if x.abs() < 1e-13 {
                *x = 0.0;
            }
        });
        Subspace { basis: m.transpose(), ortho: self.ortho.clone() }
    }

    /// Orthonormal basis as columns.
    pub fn orthonormal(&self) -> &DMatrix<f64> {
        &self.ortho
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.ortho * (self.ortho.transpose() * v)
    }

    /// Distance from `v` to the subspace (least-squares residual).
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn contains(&self, v: &DVector<f64>) -> bool {
        self.residual(v) < MEMBERSHIP_TOL
    }

    /// Coordinates of `v` in the stored basis (least squares) and the residual.
    pub fn coordinates(&self, v: &DVector<f64>) -> (DVector<f64>, f64) {
        linalg::least_squares(&self.basis, v)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim(), &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let n = self.ambient_dim();
        let (a, b) = (self.ortho.ncols(), other.ortho.ncols());
        if a == 0 || b == 0 {
            return Subspace::zero(n);
        }
        let mut stacked = DMatrix::zeros(n, a + b);
        stacked.view_mut((0, 0), (n, a)).copy_from(&self.ortho);
        stacked.view_mut((0, a), (n, b)).copy_from(&(-&other.ortho));
        let ns = linalg::null_space_f64(&stacked, 1e-9);
        let vs: Vec<DVector<f64>> = ns
            .column_iter()
            .map(|c| &self.ortho * c.rows(0, a))
            .collect();
        Subspace::span(n, &vs)
    }

    /// Largest residual of `other`'s orthonormal basis against `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        other
            .ortho
            .column_iter()
            .map(|c| self.residual(&c.into_owned()))
            .fold(0.0, f64::max)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.containment_residual(other) < MEMBERSHIP_TOL
    }

    /// Same span, up to the membership tolerance.
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other) && other.contains_subspace(self)
    }

    /// Image of the subspace under `m` (the span of the mapped basis).
    pub fn image(&self, m: &DMatrix<f64>) -> Subspace {
        let vs: Vec<DVector<f64>> = self.basis.column_iter().map(|c| m * c).collect();
        Subspace::span(m.nrows(), &vs)
    }

    /// Largest distance of `m·v` from the subspace over an orthonormal basis.
    pub fn invariance_residual(&self, m: &DMatrix<f64>) -> f64 {
        self.ortho
            .column_iter()
            .map(|c| self.residual(&(m * c)))
            .fold(0.0, f64::max)
    }
}

/// `true` when the subspaces form a direct sum equal to the whole space.
pub fn is_direct_sum(parts: &[&Subspace], n: usize) -> bool {
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    let vs: Vec<DVector<f64>> = parts.iter().flat_map(|p| p.basis_vectors()).collect();
    total == n && linalg::rank(&linalg::columns(&vs, n), 1e-9) == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn dependent_basis_rejected() {
        let r = Subspace::from_vectors(3, &[e(3, 0), e(3, 0) * 2.0]);
        assert_eq!(r, Err(Error::Dependent));
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::from_vectors(3, &[e(3, 0), e(3, 1)]).unwrap();
        let b = Subspace::from_vectors(3, &[e(3, 1), e(3, 2)]).unwrap();
        let c = a.intersection(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(3, 1)));
        assert_eq!(a.sum(&b).dim(), 3);
    }
}
