//! Automorphisms of the free 3-step nilpotent Lie algebra on two generators.
//!
//! Basis `x1..x5` with `[x1,x2] = x3`, `[x1,x3] = x4`, `[x2,x3] = x5`.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2};

use crate::automorphism::Automorphism;
use crate::catalog;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;

pub const SHAPE_TOL: f64 = 1e-9;

/// The automorphism of `g5_4` whose action on `⟨x1, x2⟩` has matrix `m`.
///
/// The columns of `m` are the images of `x1` and `x2`.
pub fn extend_gl2(m: &Matrix2<f64>) -> Result<Automorphism> {
    let det = m.determinant();
    if det.abs() < 1e-14 * m.amax().max(1.0).powi(2) {
        return Err(Error::Singular);
    }
    let mut a = DMatrix::zeros(5, 5);
    for r in 0..2 {
        for c in 0..2 {
            a[(r, c)] = m[(r, c)];
            a[(r + 3, c + 3)] = det * m[(r, c)];
        }
    }
    a[(2, 2)] = det;
    Ok(Automorphism::from_trusted(a))
}

/// Outcome of [`g54_shape_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeReport {
    pub gamma: f64,
    pub deviations: Vec<(String, f64)>,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.deviations.is_empty()
    }
}

fn is_g54(alg: &LieAlgebra) -> bool {
    if alg.dim() != 5 {
        return false;
    }
    let reference = catalog::g5_4();
    (0..5).all(|i| {
        (0..5).all(|j| {
            let d = alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j))
                - reference.bracket(&reference.basis_vector(i), &reference.basis_vector(j));
            d.amax() == 0.0
        })
    })
}

/// Checks the block form of an automorphism of `g5_4`: zeros above the
/// diagonal blocks, `γ = det ρ(α)` at (3,3), and `γ·ρ(α)` in the bottom-right block.
pub fn g54_shape_check(alg: &LieAlgebra, alpha: &Automorphism) -> Result<ShapeReport> {
    if !is_g54(alg) || alpha.dim() != 5 {
        return Err(Error::WrongAlgebra);
    }
    let a = alpha.matrix();
    let gamma = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let tol = SHAPE_TOL * a.amax().max(1.0).powi(3);
    let mut deviations = Vec::new();
    let mut check = |label: String, value: f64| {
        if value.abs() > tol {
            deviations.push((label, value));
        }
    };
    for r in 0..3 {
        for c in (r.max(1) + 1)..5 {
            if r < 2 || c > 2 {
                check(alloc::format!("entry ({},{}) should vanish", r + 1, c + 1), a[(r, c)]);
            }
        }
    }
    check(String::from("entry (3,3) should equal gamma"), a[(2, 2)] - gamma);
    for r in 0..2 {
        for c in 0..2 {
            check(
                alloc::format!("entry ({},{}) should equal gamma * ({},{})", r + 4, c + 4, r + 1, c + 1),
                a[(r + 3, c + 3)] - gamma * a[(r, c)],
            );
        }
    }
    Ok(ShapeReport { gamma, deviations })
}

/// The top-left 2×2 block of a shape-checked automorphism of `g5_4`.
pub fn rho_projection(alg: &LieAlgebra, alpha: &Automorphism) -> Result<Matrix2<f64>> {
    let report = g54_shape_check(alg, alpha)?;
    if !report.passed() {
        return Err(Error::ShapeCheckFailed);
    }
    let a = alpha.matrix();
    Ok(Matrix2::new(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::check_automorphism;
    use nalgebra::DVector;

    #[test]
    fn extend_examples() {
        let g = catalog::g5_4();
        assert_eq!(extend_gl2(&Matrix2::identity()).unwrap(), Automorphism::identity(5));
        let l = extend_gl2(&Matrix2::new(2.0, 0.0, 0.0, 0.5)).unwrap();
        let expected = DMatrix::from_diagonal(&DVector::from_row_slice(&[2.0, 0.5, 1.0, 2.0, 0.5]));
        assert_eq!(l.matrix(), &expected);
        let neg = extend_gl2(&(-Matrix2::identity())).unwrap();
        assert_eq!(neg.matrix()[(2, 2)], 1.0);
        assert_eq!(neg.matrix()[(3, 3)], -1.0);
        assert_eq!(neg.matrix()[(4, 4)], -1.0);
        assert_eq!(extend_gl2(&Matrix2::new(1.0, 2.0, 2.0, 4.0)), Err(Error::Singular));
        for m in [Matrix2::new(1.0, 1.0, 0.0, 1.0), Matrix2::new(2.0, 1.0, 1.0, 1.0), Matrix2::new(0.3, -2.0, 1.5, 0.7)] {
            let a = extend_gl2(&m).unwrap();
            assert!(check_automorphism(a.matrix().clone(), &g).is_ok());
            assert_eq!(rho_projection(&g, &a).unwrap(), m);
        }
    }

    #[test]
    fn shape_examples() {
        let g = catalog::g5_4();
        let r = g54_shape_check(&g, &Automorphism::identity(5)).unwrap();
        assert!(r.passed());
        assert_eq!(r.gamma, 1.0);
        let r = g54_shape_check(&g, &extend_gl2(&Matrix2::new(2.0, 0.0, 0.0, 0.5)).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.gamma, 1.0);
        let r = g54_shape_check(&g, &extend_gl2(&Matrix2::new(1.0, 1.0, 0.0, 1.0)).unwrap()).unwrap();
        assert!(r.passed() && r.gamma == 1.0);
        assert_eq!(rho_projection(&g, &Automorphism::identity(5)).unwrap(), Matrix2::identity());

        let mut bad = DMatrix::identity(5, 5);
        bad[(0, 3)] = 1.0;
        let r = g54_shape_check(&g, &Automorphism::from_trusted(bad.clone())).unwrap();
        assert_eq!(r.deviations.len(), 1);
        assert_eq!(rho_projection(&g, &Automorphism::from_trusted(bad)), Err(Error::ShapeCheckFailed));
        assert_eq!(
            g54_shape_check(&catalog::catalog("g5_5").unwrap(), &Automorphism::identity(5)),
            Err(Error::WrongAlgebra)
        );
    }
}
