//! Automorphisms and derivations of a Lie algebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie::{AlgebraScalar, LieAlgebra};
use crate::linalg;
use crate::scalar::{Rational, Scalar};

/// Bracket-compatibility tolerance, scaled by the squared entry size.
pub const AUTOMORPHISM_TOL: f64 = 1e-9;

/// An invertible matrix `α*` with `α*[x, y] = [α*x, α*y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    matrix: DMatrix<f64>,
}

fn entry_scale(m: &DMatrix<f64>) -> f64 {
    m.amax().max(1.0)
}

/// Worst basis-pair violation of the bracket law, `(i, j, residual)`.
pub fn bracket_law_residual(alg: &LieAlgebra, m: &DMatrix<f64>) -> (usize, usize, f64) {
    let n = alg.dim();
    let images: Vec<DVector<f64>> = (0..n).map(|i| m.column(i).into_owned()).collect();
    let mut worst = (0, 0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = m * alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j));
            let rhs = alg.bracket(&images[i], &images[j]);
            let r = (lhs - rhs).norm();
            if r > worst.2 {
                worst = (i, j, r);
            }
        }
    }
    worst
}

/// Validates `matrix` as an automorphism of `alg`.
pub fn check_automorphism(matrix: DMatrix<f64>, alg: &LieAlgebra) -> Result<Automorphism> {
    let n = alg.dim();
    if matrix.nrows() != n || matrix.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: matrix.nrows().max(matrix.ncols()) });
    }
    if linalg::rank(&matrix, 1e-12) < n {
        return Err(Error::Singular);
    }
    let (i, j, residual) = bracket_law_residual(alg, &matrix);
    let s = entry_scale(&matrix);
    if residual > AUTOMORPHISM_TOL * s * s {
        return Err(Error::NotAutomorphism { i, j, residual });
    }
    Ok(Automorphism { matrix })
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism { matrix: DMatrix::identity(n, n) }
    }

    /// Wraps a matrix already known to be an automorphism (products, inverses, powers).
    pub(crate) fn from_trusted(matrix: DMatrix<f64>) -> Self {
        Automorphism { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { matrix: &self.matrix * &other.matrix }
    }

    pub fn inverse(&self) -> Automorphism {
        let inv = self.matrix.clone().try_inverse().expect("automorphisms are invertible");
        Automorphism { matrix: inv }
    }

    pub fn power(&self, k: i64) -> Automorphism {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Automorphism::identity(self.dim());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }
}

/// A basis of `Der(𝔤)`.
#[derive(Debug, Clone)]
pub struct DerivationAlgebra {
    pub basis: Vec<DMatrix<f64>>,
}

impl DerivationAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ c_i D_i`.
    pub fn combination(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let n = self.basis.first().map_or(0, |m| m.nrows());
        self.basis
            .iter()
            .zip(coeffs)
            .fold(DMatrix::zeros(n, n), |acc, (m, c)| acc + m * *c)
    }
}

fn derivation_rows<T: AlgebraScalar>(alg: &LieAlgebra) -> Vec<Vec<T>> {
    // unknown d[p][q] (row p, column q) sits at index p·n + q
    let n = alg.dim();
    let c = |i: usize, j: usize, k: usize| -> T {
        let mut x = alloc::vec![T::zero(); n];
        let mut y = alloc::vec![T::zero(); n];
        x[i] = T::one();
        y[j] = T::one();
        alg.bracket_in(&x, &y).expect("scalar type supported")[k].clone()
    };
    let mut table = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                table.push(c(i, j, k));
            }
        }
    }
    let at = |i: usize, j: usize, k: usize| table[(i * n + j) * n + k].clone();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                let mut row = alloc::vec![T::zero(); n * n];
                for r in 0..n {
                    row[k * n + r] = row[k * n + r].clone() + at(i, j, r);
                }
                for p in 0..n {
                    row[p * n + i] = row[p * n + i].clone() - at(p, j, k);
                    row[p * n + j] = row[p * n + j].clone() - at(i, p, k);
                }
                if row.iter().any(|v| !v.is_negligible()) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

fn to_matrix<T: Scalar>(n: usize, v: &[T]) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |p, q| v[p * n + q].to_f64())
}

/// Solution space of `D[x, y] = [Dx, y] + [x, Dy]`; exact for rational algebras.
pub fn derivations(alg: &LieAlgebra) -> DerivationAlgebra {
    let n = alg.dim();
    let basis = if alg.is_exact() {
        let rows = derivation_rows::<Rational>(alg);
        linalg::null_space(&rows, n * n).iter().map(|v| to_matrix(n, v)).collect()
    } else {
        let rows = derivation_rows::<f64>(alg);
        let mut a = DMatrix::zeros(rows.len(), n * n);
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                a[(r, c)] = *v;
            }
        }
        let ns = linalg::null_space_f64(&a, 1e-10);
        ns.column_iter().map(|c| to_matrix(n, c.as_slice())).collect()
    };
    DerivationAlgebra { basis }
}

/// Largest violation of the derivation law over basis pairs.
pub fn derivation_residual(alg: &LieAlgebra, d: &DMatrix<f64>) -> f64 {
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (ei, ej) = (alg.basis_vector(i), alg.basis_vector(j));
            let lhs = d * alg.bracket(&ei, &ej);
            let rhs = alg.bracket(&(d * &ei), &ej) + alg.bracket(&ei, &(d * &ej));
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// `exp(D)` for a derivation `D`, validated as an automorphism.
pub fn exp_derivation(alg: &LieAlgebra, d: &DMatrix<f64>) -> Result<Automorphism> {
    let n = alg.dim();
    if d.nrows() != n || d.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: d.nrows() });
    }
    let residual = derivation_residual(alg, d);
    if residual > AUTOMORPHISM_TOL * entry_scale(d) {
        return Err(Error::NotDerivation { residual });
    }
    check_automorphism(linalg::expm(d), alg)
}

fn vectorize(ms: &[DMatrix<f64>]) -> DMatrix<f64> {
    let len = ms.first().map_or(0, |m| m.len());
    let mut a = DMatrix::zeros(len, ms.len());
    for (j, m) in ms.iter().enumerate() {
        a.set_column(j, &DVector::from_column_slice(m.as_slice()));
    }
    a
}

fn span_of(ms: &[DMatrix<f64>], n: usize) -> Vec<DMatrix<f64>> {
    if ms.is_empty() {
        return Vec::new();
    }
    let q = linalg::column_space(&vectorize(ms), 1e-10);
    q.column_iter()
        .map(|c| DMatrix::from_column_slice(n, n, c.as_slice()))
        .collect()
}

/// Whether the matrix Lie algebra spanned by `mats` is solvable.
///
/// Fails with [`Error::NotClosed`] when the span is not closed under commutators.
pub fn is_solvable(mats: &[DMatrix<f64>]) -> Result<bool> {
    let Some(first) = mats.first() else { return Ok(true) };
    let n = first.nrows();
    let mut current = span_of(mats, n);
    let q = vectorize(&current);
    let scale = mats.iter().map(|m| m.amax()).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    for a in &current {
        for b in &current {
            let c = DVector::from_column_slice((a * b - b * a).as_slice());
            worst = worst.max((&c - &q * (q.transpose() * &c)).norm());
        }
    }
    if worst > 1e-8 * scale * scale {
        return Err(Error::NotClosed { residual: worst });
    }
    loop {
        if current.is_empty() {
            return Ok(true);
        }
        let mut comms = Vec::new();
        for (i, a) in current.iter().enumerate() {
            for b in current.iter().skip(i + 1) {
                comms.push(a * b - b * a);
            }
        }
        let next = span_of(&comms, n);
        if next.len() == current.len() {
            return Ok(false);
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::catalog;
    use crate::g54;

    fn diag(xs: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_row_slice(xs))
    }

    #[test]
    fn automorphism_fixtures() {
        let h3 = catalog::h3();
        assert!(check_automorphism(DMatrix::identity(3, 3), &h3).is_ok());
        assert!(matches!(check_automorphism(diag(&[2., 1., 1.]), &h3), Err(Error::NotAutomorphism { i: 0, j: 1, .. })));
        assert_eq!(check_automorphism(diag(&[1., 0., 0.]), &h3), Err(Error::Singular));
        let g = catalog::g5_4();
        assert!(check_automorphism(diag(&[2., 0.5, 1., 2., 0.5]), &g).is_ok());
    }

    #[test]
    fn derivation_dimensions() {
        assert_eq!(derivations(&LieAlgebra::abelian(2)).dim(), 4);
        assert_eq!(derivations(&catalog::h3()).dim(), 6);
    }

    #[test]
    fn n4_derivations_lower_triangular() {
        let der = derivations(&catalog::n4());
        for d in &der.basis {
            for p in 0..4 {
                for q in (p + 1)..4 {
                    assert_eq!(d[(p, q)], 0.0);
                }
            }
        }
        assert!(is_solvable(&der.basis).unwrap());
    }

    #[test]
    fn solvability_verdicts() {
        let gl2 = vec![
            DMatrix::from_row_slice(2, 2, &[1., 0., 0., 0.]),
            DMatrix::from_row_slice(2, 2, &[0., 1., 0., 0.]),
            DMatrix::from_row_slice(2, 2, &[0., 0., 1., 0.]),
            DMatrix::from_row_slice(2, 2, &[0., 0., 0., 1.]),
        ];
        assert!(!is_solvable(&gl2).unwrap());
        let upper = vec![gl2[0].clone(), gl2[1].clone(), gl2[3].clone()];
        assert!(is_solvable(&upper).unwrap());
        let not_closed = vec![gl2[1].clone(), gl2[2].clone()];
        assert!(matches!(is_solvable(&not_closed), Err(Error::NotClosed { .. })));
        for name in ["n4+R", "g5_3", "g5_5", "g5_6"] {
            let der = derivations(&catalog::catalog(name).unwrap());
            assert!(is_solvable(&der.basis).unwrap(), "{name}");
        }
        assert!(!is_solvable(&derivations(&catalog::g5_4()).basis).unwrap());
    }

    #[test]
    fn exp_of_derivations() {
        let h3 = catalog::h3();
        assert_eq!(exp_derivation(&h3, &DMatrix::zeros(3, 3)).unwrap(), Automorphism::identity(3));
        let a = exp_derivation(&h3, &diag(&[1., 0., 1.])).unwrap();
        let e = core::f64::consts::E;
        assert!((a.matrix() - diag(&[e, 1., e])).norm() < 1e-13);
        assert!(matches!(exp_derivation(&h3, &diag(&[1., 0., 0.])), Err(Error::NotDerivation { .. })));

        let n4 = catalog::n4();
        let ad = n4.ad(&n4.basis_vector(0));
        let u = exp_derivation(&n4, &ad).unwrap();
        let nil = u.matrix() - DMatrix::identity(4, 4);
        assert_eq!(nil.pow(4), DMatrix::zeros(4, 4));
        let eig = u.matrix().clone().complex_eigenvalues();
        assert!(eig.iter().all(|z| (z - nalgebra::Complex::new(1.0, 0.0)).norm() < 1e-4));
    }

    #[test]
    fn powers_and_inverse() {
        let g = catalog::g5_4();
        let a = g54::extend_gl2(&nalgebra::Matrix2::new(2., 1., 1., 1.)).unwrap();
        let p = a.power(3).compose(&a.power(-3));
        assert!((p.matrix() - DMatrix::identity(5, 5)).norm() < 1e-10);
        assert!(check_automorphism(a.power(4).matrix().clone(), &g).is_ok());
    }
}
