//! The affine group `Aff(N) = N ⋊ Aut(N)` acting on `N`, and the affine
//! representation of two-step nilpotent groups on their Lie algebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::group::{GroupPoint, NilpotentGroup};
use crate::lie::LieAlgebra;

/// `(n, α)` acting by `m ↦ n·α(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMotion {
    pub trans: GroupPoint,
    pub auto: Automorphism,
}

impl AffineMotion {
    pub fn new(trans: GroupPoint, auto: Automorphism) -> Result<Self> {
        if trans.dim() != auto.dim() {
            return Err(Error::DimensionMismatch { expected: auto.dim(), got: trans.dim() });
        }
        Ok(AffineMotion { trans, auto })
    }

    pub fn identity(n: usize) -> Self {
        AffineMotion { trans: GroupPoint::identity(n), auto: Automorphism::identity(n) }
    }

    pub fn translation(n: GroupPoint) -> Self {
        let d = n.dim();
        AffineMotion { trans: n, auto: Automorphism::identity(d) }
    }

    pub fn linear(auto: Automorphism) -> Self {
        AffineMotion { trans: GroupPoint::identity(auto.dim()), auto }
    }

    pub fn dim(&self) -> usize {
        self.auto.dim()
    }

    /// `ℓ(g)`.
    pub fn linear_part(&self) -> &Automorphism {
        &self.auto
    }

    pub fn act(&self, grp: &NilpotentGroup, m: &GroupPoint) -> GroupPoint {
        grp.mul(&self.trans, &GroupPoint::from_log(self.auto.apply(m.log())))
    }

    /// `self ∘ other = (n₁ α₁(n₂), α₁α₂)`.
    pub fn compose(&self, grp: &NilpotentGroup, other: &AffineMotion) -> AffineMotion {
        let moved = GroupPoint::from_log(self.auto.apply(other.trans.log()));
        AffineMotion { trans: grp.mul(&self.trans, &moved), auto: self.auto.compose(&other.auto) }
    }

    pub fn inverse(&self, grp: &NilpotentGroup) -> AffineMotion {
        let inv = self.auto.inverse();
        let trans = GroupPoint::from_log(inv.apply(grp.inverse(&self.trans).log()));
        AffineMotion { trans, auto: inv }
    }

    pub fn power(&self, grp: &NilpotentGroup, k: i64) -> AffineMotion {
        let base = if k < 0 { self.inverse(grp) } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = AffineMotion::identity(self.dim());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(grp, &sq);
            }
            sq = sq.compose(grp, &sq);
            e >>= 1;
        }
        acc
    }

    /// `h g h⁻¹` where `self = g`.
    pub fn conjugate_by(&self, grp: &NilpotentGroup, h: &AffineMotion) -> AffineMotion {
        h.compose(grp, self).compose(grp, &h.inverse(grp))
    }
}

/// `y ↦ L y + b` on `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalAffineMap {
    pub linear: DMatrix<f64>,
    pub offset: DVector<f64>,
}

impl ClassicalAffineMap {
    pub fn apply(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.linear * y + &self.offset
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ClassicalAffineMap) -> ClassicalAffineMap {
        ClassicalAffineMap { linear: &self.linear * &other.linear, offset: self.apply(&other.offset) }
    }

    pub fn inverse(&self) -> Option<ClassicalAffineMap> {
        let inv = self.linear.clone().try_inverse()?;
        let offset = -(&inv * &self.offset);
        Some(ClassicalAffineMap { linear: inv, offset })
    }
}

/// `λ(n, α)(y) = log n + α y + ½[log n, α y]` for an algebra of class at most 2.
#[derive(Debug, Clone)]
pub struct TwoStepRep {
    alg: LieAlgebra,
}

pub fn two_step_rep(alg: &LieAlgebra) -> Result<TwoStepRep> {
    let class = alg.nilpotency_class()?;
    if class > 2 {
        return Err(Error::ClassTooHigh { class });
    }
    Ok(TwoStepRep { alg: alg.clone() })
}

impl TwoStepRep {
    pub fn map(&self, g: &AffineMotion) -> ClassicalAffineMap {
        let n = self.alg.dim();
        let log_n = g.trans.log();
        let shear = DMatrix::identity(n, n) + self.alg.ad(log_n) * 0.5;
        ClassicalAffineMap { linear: shear * g.auto.matrix(), offset: log_n.clone() }
    }

    /// The unique `n` with `λ(n, id)(y) = z`.
    pub fn solve_translation(&self, y: &DVector<f64>, z: &DVector<f64>) -> GroupPoint {
        GroupPoint::from_log(z - y - self.alg.bracket(z, y) * 0.5)
    }

    /// `e_v(m) = λ(m, id)(0)`.
    pub fn orbit_map(&self, m: &GroupPoint) -> DVector<f64> {
        self.map(&AffineMotion::translation(m.clone())).offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivarianceReport {
    pub samples: usize,
    pub max_residual: f64,
}

/// Largest `‖e_v(g·m) − λ(g)(e_v(m))‖` over the samples.
pub fn equivariance_check(
    grp: &NilpotentGroup,
    samples: &[(AffineMotion, GroupPoint)],
) -> Result<EquivarianceReport> {
    let rep = two_step_rep(grp.algebra())?;
    let max_residual = samples
        .iter()
        .map(|(g, m)| {
            let lhs = rep.orbit_map(&g.act(grp, m));
            let rhs = rep.map(g).apply(&rep.orbit_map(m));
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max);
    Ok(EquivarianceReport { samples: samples.len(), max_residual })
}

/// Maximum of `‖λ(g₁g₂)(y) − λ(g₁)(λ(g₂)(y))‖`-style matrix deviations over pairs.
pub fn homomorphism_residual(grp: &NilpotentGroup, rep: &TwoStepRep, pairs: &[(AffineMotion, AffineMotion)]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        let lhs = rep.map(&a.compose(grp, b));
        let rhs = rep.map(a).compose(&rep.map(b));
        worst = worst.max((&lhs.linear - &rhs.linear).amax()).max((&lhs.offset - &rhs.offset).amax());
    }
    worst
}

/// Collects motions into pairs `(gᵢ, gᵢ₊₁)`; convenience for sampled checks.
pub fn consecutive_pairs(motions: &[AffineMotion]) -> Vec<(AffineMotion, AffineMotion)> {
    motions.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}
