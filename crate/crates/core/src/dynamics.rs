//! Pseudohyperbolic affine motions: invariant lines, translational parts,
//! the projection onto the invariant line, and transversal/positive pairs.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::affine::AffineMotion;
use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::group::{GroupPoint, NilpotentGroup};
use crate::lie::LieAlgebra;
use crate::linalg;
use crate::splitting::{self, spectral_splitting, SpectralSplitting, CLUSTER_RADIUS};
use crate::subspace::Subspace;

/// Tolerance for `ℓ(g)v = v` on the zero part and for `τ(g) ≠ 1`.
pub const OMEGA_TOL: f64 = 1e-9;
/// Tolerance for the line equation `g(m·exp(tA)) = m·exp(tA)·τ(g)`.
pub const LINE_TOL: f64 = 1e-9;
/// Membership tolerance for `E⁺_g`.
pub const DOMAIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaClass {
    NotOmega,
    /// Pseudohyperbolic with a fixed point (`τ(g) = 1`).
    Omega,
    /// Pseudohyperbolic and fixed-point free.
    Omega0,
}

/// `φ(m) = m⁻¹·n·α(m)`.
pub fn phi(grp: &NilpotentGroup, n: &GroupPoint, alpha: &Automorphism, m: &GroupPoint) -> GroupPoint {
    let moved = GroupPoint::from_log(alpha.apply(m.log()));
    grp.mul(&grp.left_divide(m, n), &moved)
}

/// `(algebraic, geometric)` multiplicity of the eigenvalue 1.
pub fn unit_eigenvalue_multiplicities(alpha: &DMatrix<f64>) -> (usize, usize) {
    let n = alpha.nrows();
    let algebraic = alpha
        .clone()
        .complex_eigenvalues()
        .iter()
        .filter(|z| (*z - nalgebra::Complex::new(1.0, 0.0)).norm() <= CLUSTER_RADIUS)
        .count();
    let shifted = alpha - DMatrix::identity(n, n);
    let geometric = n - linalg::rank(&shifted, 1e-9);
    (algebraic, geometric)
}

/// Solves `n + (α − I)m ∈ E` in an abelian algebra; `draw` adds an arbitrary element of `E`.
fn solve_abelian(n: &DVector<f64>, alpha: &DMatrix<f64>, e: &Subspace, draw: &mut dyn FnMut() -> f64) -> DVector<f64> {
    let d = n.len();
    let shifted = alpha - DMatrix::identity(d, d);
    let w = linalg::column_space(&shifted, 1e-10);
    let mut frame = DMatrix::zeros(d, e.dim() + w.ncols());
    frame.view_mut((0, 0), (d, e.dim())).copy_from(e.orthonormal());
    frame.view_mut((0, e.dim()), (d, w.ncols())).copy_from(&w);
    let (c, _) = linalg::least_squares(&frame, &(-n));
    let target = &w * c.rows(e.dim(), w.ncols());
    let (mut m, _) = linalg::least_squares(&shifted, &target);
    for col in e.orthonormal().column_iter() {
        m += col * draw();
    }
    m
}

fn solve_recursive(
    alg: &LieAlgebra,
    n: &DVector<f64>,
    alpha: &DMatrix<f64>,
    e: &Subspace,
    draw: &mut dyn FnMut() -> f64,
) -> Result<DVector<f64>> {
    if alg.is_abelian() {
        return Ok(solve_abelian(n, alpha, e, draw));
    }
    let grp = NilpotentGroup::new(alg.clone())?;
    let z = alg.center();
    let q = alg.quotient_by_center()?;
    let alpha_q = &q.projection * alpha * &q.section;
    let e_q = Subspace::span(q.projection.nrows(), &e.orthonormal().column_iter().map(|c| &q.projection * c).collect::<Vec<_>>());
    let m_q = solve_recursive(&q.algebra, &(&q.projection * n), &alpha_q, &e_q, draw)?;
    let m1 = GroupPoint::from_log(&q.section * m_q);
    let u = phi(&grp, &GroupPoint::from_log(n.clone()), &Automorphism::from_trusted(alpha.clone()), &m1);

    // u ∈ E + 𝔷; correct the central part by z₀ with (α − I)z₀ absorbing it modulo E ∩ 𝔷
    let (ke, kz) = (e.dim(), z.dim());
    let mut frame = DMatrix::zeros(n.len(), ke + kz);
    frame.view_mut((0, 0), (n.len(), ke)).copy_from(e.orthonormal());
    frame.view_mut((0, ke), (n.len(), kz)).copy_from(z.orthonormal());
    let (c, _) = linalg::least_squares(&frame, u.log());
    let zeta = c.rows(ke, kz).into_owned();
    let alpha_z = splitting::restriction(alpha, &Subspace::from_basis(z.orthonormal().clone())?);
    let fixed_z = linalg::null_space_f64(&(&alpha_z - DMatrix::identity(kz, kz)), 1e-9);
    let e_z = Subspace::span(kz, &fixed_z.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>());
    let z0 = solve_abelian(&zeta, &alpha_z, &e_z, draw);
    Ok(m1.into_log() + z.orthonormal() * z0)
}

fn check_fixed_space(alpha: &Automorphism, e: &Subspace) -> Result<()> {
    let (algebraic, geometric) = unit_eigenvalue_multiplicities(alpha.matrix());
    if algebraic != geometric {
        return Err(Error::MultiplicityMismatch { algebraic, geometric });
    }
    let moved = e.orthonormal().column_iter().map(|c| (alpha.matrix() * c - c).norm()).fold(0.0, f64::max);
    if e.dim() != geometric || moved > OMEGA_TOL * alpha.matrix().amax().max(1.0) {
        return Err(Error::InvalidStructure("E is not the fixed space of the automorphism".into()));
    }
    Ok(())
}

/// Finds `m` with `m⁻¹·n·α(m) ∈ exp(E)`, where `E` is the fixed space of `α`.
pub fn solve_phi_in_e(grp: &NilpotentGroup, n: &GroupPoint, alpha: &Automorphism, e: &Subspace) -> Result<GroupPoint> {
    solve_phi_in_e_perturbed(grp, n, alpha, e, &mut || 0.0)
}

/// As [`solve_phi_in_e`], adding `draw()`-weighted elements of the fixed spaces
/// at every stage of the recursion (the solution is only unique modulo `exp(E)`).
pub fn solve_phi_in_e_perturbed(
    grp: &NilpotentGroup,
    n: &GroupPoint,
    alpha: &Automorphism,
    e: &Subspace,
    draw: &mut dyn FnMut() -> f64,
) -> Result<GroupPoint> {
    if n.dim() != grp.dim() || alpha.dim() != grp.dim() {
        return Err(Error::DimensionMismatch { expected: grp.dim(), got: n.dim() });
    }
    check_fixed_space(alpha, e)?;
    let m = GroupPoint::from_log(solve_recursive(grp.algebra(), n.log(), alpha.matrix(), e, draw)?);
    let out = phi(grp, n, alpha, &m);
    let residual = e.residual(out.log());
    let scale = (1.0 + n.log().norm() + m.log().norm()) * alpha.matrix().amax().max(1.0);
    if residual > 1e-10 * scale {
        return Err(Error::NoConvergence { residual });
    }
    Ok(m)
}

/// The `g`-invariant line `C_g = m·exp(ℝA)` and the translational part `τ(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantLine {
    pub base: GroupPoint,
    /// Unit vector spanning `𝔫⁰(g)`, along `T(g)` when `T(g) ≠ 0`.
    pub direction: DVector<f64>,
    pub tau: GroupPoint,
    /// `T(g) = log τ(g)`.
    pub t: DVector<f64>,
}

impl InvariantLine {
    pub fn point(&self, grp: &NilpotentGroup, t: f64) -> GroupPoint {
        grp.mul(&self.base, &GroupPoint::from_log(&self.direction * t))
    }

    /// Largest `ρ(g(m·exp(tA)), m·exp(tA)·τ(g))` over `ts`.
    pub fn translation_residual(&self, grp: &NilpotentGroup, g: &AffineMotion, ts: &[f64]) -> f64 {
        ts.iter()
            .map(|&t| {
                let p = self.point(grp, t);
                grp.quasi_distance(&g.act(grp, &p), &grp.mul(&p, &self.tau))
            })
            .fold(0.0, f64::max)
    }
}

/// A motion in `Ω` with its splitting and invariant line.
#[derive(Debug, Clone)]
pub struct Pseudohyperbolic {
    pub motion: AffineMotion,
    pub splitting: SpectralSplitting,
    pub line: InvariantLine,
}

fn unit_zero_vector(s: &SpectralSplitting) -> Option<DVector<f64>> {
    if s.zero().dim() != 1 {
        return None;
    }
    Some(s.zero().orthonormal().column(0).into_owned())
}

fn acts_trivially_on_zero(g: &AffineMotion, s: &SpectralSplitting) -> bool {
    match unit_zero_vector(s) {
        Some(v) => (g.auto.apply(&v) - &v).norm() < OMEGA_TOL,
        None => false,
    }
}

fn zero_coefficient(s: &SpectralSplitting, a: &DVector<f64>, v: &DVector<f64>) -> f64 {
    s.decompose(v)[1].dot(a)
}

/// Replaces `m` by `m·exp(−uA)` so that `log m` has no `𝔫⁰`-component.
fn normalize_base(grp: &NilpotentGroup, s: &SpectralSplitting, a: &DVector<f64>, m: &GroupPoint) -> GroupPoint {
    let at = |u: f64| grp.mul(m, &GroupPoint::from_log(a * (-u)));
    let f = |u: f64| zero_coefficient(s, a, at(u).log());
    let mut u = f(0.0);
    for _ in 0..50 {
        let fu = f(u);
        if fu.abs() <= 1e-15 * (1.0 + m.log().norm()) {
            break;
        }
        let h = 1e-6 * (1.0 + u.abs());
        let slope = (f(u + h) - f(u - h)) / (2.0 * h);
        if slope.abs() < 1e-12 {
            break;
        }
        u -= fu / slope;
    }
    at(u)
}

impl Pseudohyperbolic {
    /// Fails with [`Error::NotPseudohyperbolic`] unless `g ∈ Ω`.
    pub fn new(grp: &NilpotentGroup, g: &AffineMotion) -> Result<Self> {
        Self::build(grp, g, &mut || 0.0)
    }

    /// As [`Pseudohyperbolic::new`] with a perturbed (but then normalized) solver run.
    pub fn new_perturbed(grp: &NilpotentGroup, g: &AffineMotion, draw: &mut dyn FnMut() -> f64) -> Result<Self> {
        Self::build(grp, g, draw)
    }

    fn build(grp: &NilpotentGroup, g: &AffineMotion, draw: &mut dyn FnMut() -> f64) -> Result<Self> {
        let splitting = spectral_splitting(&g.auto)?;
        if !acts_trivially_on_zero(g, &splitting) {
            return Err(Error::NotPseudohyperbolic);
        }
        let zero = unit_zero_vector(&splitting).expect("checked above");
        let e = Subspace::span(g.dim(), core::slice::from_ref(&zero));
        let raw = solve_phi_in_e_perturbed(grp, &g.trans, &g.auto, &e, draw)?;
        let tau = phi(grp, &g.trans, &g.auto, &raw);
        let t = e.project(tau.log());
        let direction = if t.norm() > OMEGA_TOL { t.normalize() } else { zero };
        let base = normalize_base(grp, &splitting, &direction, &raw);
        let line = InvariantLine { base, direction, tau: GroupPoint::from_log(t.clone()), t };
        let scale = (1.0 + g.trans.log().norm() + line.base.log().norm()) * g.auto.matrix().amax().max(1.0);
        let ts: Vec<f64> = (-2..=2).map(f64::from).collect();
        let residual = line.translation_residual(grp, g, &ts);
        if residual > LINE_TOL * scale {
            return Err(Error::NoConvergence { residual });
        }
        Ok(Pseudohyperbolic { motion: g.clone(), splitting, line })
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.line.t.norm() > OMEGA_TOL
    }

    pub fn class(&self) -> OmegaClass {
        if self.is_fixed_point_free() {
            OmegaClass::Omega0
        } else {
            OmegaClass::Omega
        }
    }

    /// Distance of `log(m⁻¹x)` from `𝔡⁺(g)`; zero exactly on `E⁺_g`.
    pub fn e_plus_residual(&self, grp: &NilpotentGroup, x: &GroupPoint) -> f64 {
        self.splitting.dplus().residual(grp.left_divide(&self.line.base, x).log())
    }

    /// Writes `m⁻¹x = exp(uA)·n⁺` with `n⁺ ∈ N⁺(g)`; returns `(u, n⁺)`.
    pub fn factor(&self, grp: &NilpotentGroup, x: &GroupPoint) -> Result<(f64, GroupPoint)> {
        let residual = self.e_plus_residual(grp, x);
        if residual > DOMAIN_TOL * (1.0 + x.log().norm()) {
            return Err(Error::NotInDomain { residual });
        }
        let rel = grp.left_divide(&self.line.base, x);
        let (n0, np) = grp.factor_within(&rel, self.splitting.zero(), self.splitting.plus())?;
        Ok((n0.log().dot(&self.line.direction), np))
    }

    /// `P_g(x)`: the point of `C_g` with `x ∈ P_g(x)·N⁺(g)`.
    pub fn project(&self, grp: &NilpotentGroup, x: &GroupPoint) -> Result<GroupPoint> {
        let (u, _) = self.factor(grp, x)?;
        Ok(self.line.point(grp, u))
    }

    /// `t₀` with `P_g(x) = m·τ(g)^{t₀}`; requires `g ∈ Ω₀`.
    pub fn tau_coordinate(&self, grp: &NilpotentGroup, x: &GroupPoint) -> Result<f64> {
        if !self.is_fixed_point_free() {
            return Err(Error::NotPseudohyperbolic);
        }
        let (u, _) = self.factor(grp, x)?;
        Ok(u / self.line.t.norm())
    }

    /// `V = λ(V)·T(g) + a(V)` with `a(V) ∈ 𝔫⁺(g)` for `V ∈ 𝔡⁺(g)`; returns `(λ(V), a(V))`.
    pub fn decompose_dplus(&self, v: &DVector<f64>) -> (f64, DVector<f64>) {
        let [minus, zero, plus] = self.splitting.decompose(v);
        let lambda = zero.dot(&self.line.t) / self.line.t.norm_squared();
        (lambda, plus + minus)
    }
}

/// Ω / Ω₀ membership of `g`.
pub fn omega_test(grp: &NilpotentGroup, g: &AffineMotion) -> Result<OmegaClass> {
    let s = spectral_splitting(&g.auto)?;
    if !acts_trivially_on_zero(g, &s) {
        return Ok(OmegaClass::NotOmega);
    }
    Ok(Pseudohyperbolic::new(grp, g)?.class())
}

pub fn invariant_line(grp: &NilpotentGroup, g: &AffineMotion) -> Result<InvariantLine> {
    Ok(Pseudohyperbolic::new(grp, g)?.line)
}

/// `P_g(x)`.
pub fn project_p(grp: &NilpotentGroup, g: &AffineMotion, x: &GroupPoint) -> Result<GroupPoint> {
    Pseudohyperbolic::new(grp, g)?.project(grp, x)
}

/// Geometry of a transversal pair.
#[derive(Debug, Clone)]
pub struct PairGeometry {
    pub first: Pseudohyperbolic,
    pub second: Pseudohyperbolic,
    /// Unit vector spanning `𝔡⁺(g₁) ∩ 𝔡⁺(g₂)`, oriented so that `λ₁(V) > 0`.
    pub v: DVector<f64>,
    /// `(λ₁(V), λ₂(V))`.
    pub lambdas: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVerdict {
    PositiveAsIs,
    PositiveAfterInvertingG2,
    Failure,
}

fn direct_sum_rank(a: &Subspace, b: &Subspace) -> usize {
    let mut vs = a.basis_vectors();
    vs.extend(b.basis_vectors());
    linalg::rank(&linalg::columns(&vs, a.ambient_dim()), 1e-9)
}

fn check_direct(a: &Subspace, b: &Subspace, what: &'static str) -> Result<()> {
    let n = a.ambient_dim();
    let rank = direct_sum_rank(a, b);
    if a.dim() + b.dim() != n || rank != n {
        return Err(Error::NotTransversal { what, rank, expected: n });
    }
    Ok(())
}

/// Checks `𝔫 = 𝔫⁺(g₁) ⊕ 𝔡⁺(g₂) = 𝔡⁺(g₁) ⊕ 𝔫⁺(g₂)` and computes `V`.
pub fn transversality(grp: &NilpotentGroup, g1: &AffineMotion, g2: &AffineMotion) -> Result<PairGeometry> {
    let first = Pseudohyperbolic::new(grp, g1)?;
    let second = Pseudohyperbolic::new(grp, g2)?;
    if !first.is_fixed_point_free() || !second.is_fixed_point_free() {
        return Err(Error::NotPseudohyperbolic);
    }
    let (d1, d2) = (first.splitting.dplus(), second.splitting.dplus());
    check_direct(first.splitting.plus(), &d2, "n+(g1) + d+(g2)")?;
    check_direct(&d1, second.splitting.plus(), "d+(g1) + n+(g2)")?;
    let meet = d1.intersection(&d2);
    if meet.dim() != 1 {
        return Err(Error::NotTransversal { what: "d+(g1) meet d+(g2)", rank: meet.dim(), expected: 1 });
    }
    let mut v = meet.orthonormal().column(0).into_owned();
    let mut l1 = first.decompose_dplus(&v).0;
    if l1 < 0.0 {
        v = -v;
        l1 = -l1;
    }
    let l2 = second.decompose_dplus(&v).0;
    Ok(PairGeometry { first, second, v, lambdas: (l1, l2) })
}

pub fn positive_pair(pg: &PairGeometry) -> PairVerdict {
    let (l1, l2) = pg.lambdas;
    if l1.abs() <= OMEGA_TOL || l2.abs() <= OMEGA_TOL {
        PairVerdict::Failure
    } else if (l1 > 0.0) == (l2 > 0.0) {
        PairVerdict::PositiveAsIs
    } else {
        PairVerdict::PositiveAfterInvertingG2
    }
}
