//! The simply connected nilpotent group `N = exp(𝔫)` in logarithmic coordinates.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::{AlgebraScalar, LieAlgebra};
use crate::linalg;
use crate::scalar::{Rational, Scalar};
use crate::subspace::Subspace;

/// Samples used by [`NilpotentGroup::distance_to_segment`] before local refinement.
pub const SEGMENT_GRID: usize = 1024;

/// An element `exp(log)` of the group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    log: DVector<f64>,
}

impl GroupPoint {
    pub fn from_log(log: DVector<f64>) -> Self {
        GroupPoint { log }
    }

    pub fn from_slice(log: &[f64]) -> Self {
        GroupPoint { log: DVector::from_row_slice(log) }
    }

    pub fn identity(n: usize) -> Self {
        GroupPoint { log: DVector::zeros(n) }
    }

    pub fn log(&self) -> &DVector<f64> {
        &self.log
    }

    pub fn into_log(self) -> DVector<f64> {
        self.log
    }

    pub fn dim(&self) -> usize {
        self.log.len()
    }
}

/// Half-open segment `{ base · τ^t : 0 ≤ t < 1 }` of a one-parameter coset.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub base: GroupPoint,
    pub tau: GroupPoint,
}

/// A left coset `m · exp(𝔥)` of a connected subgroup.
#[derive(Debug, Clone)]
pub struct AffineSubspace {
    pub base: GroupPoint,
    pub direction: Subspace,
}

/// Bernoulli numbers `B_0 … B_m`.
fn bernoulli(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for k in 1..=m {
        // Σ_{j<k+1} C(k+1, j) B_j = 0
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(k + 1)));
    }
    b
}

/// `B_{2p} / (2p)!` for `p = 1 … max_p`.
fn bch_coefficients(max_p: usize) -> Vec<Rational> {
    let b = bernoulli(2 * max_p);
    let mut fact = BigInt::one();
    let mut out = Vec::new();
    for q in 1..=2 * max_p {
        fact *= BigInt::from(q);
        if q % 2 == 0 {
            out.push(b[q].clone() / Rational::from_integer(fact.clone()));
        }
    }
    out
}

fn compositions(n: usize, parts: usize, prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if parts == 0 {
        if n == 0 {
            f(prefix);
        }
        return;
    }
    for first in 1..=(n + 1).saturating_sub(parts) {
        prefix.push(first);
        compositions(n - first, parts - 1, prefix, f);
        prefix.pop();
    }
}

/// Nilpotent Lie group of a validated nilpotent algebra.
///
/// The product is the Baker–Campbell–Hausdorff series truncated at the
/// nilpotency class, evaluated through the recursion
/// `(n+1) Z_{n+1} = ½[x−y, Z_n] + Σ_p B_{2p}/(2p)! Σ [Z_{k_1},[…,[Z_{k_{2p}}, x+y]…]]`
/// on homogeneous components; truncation is exact for nilpotent algebras.
#[derive(Debug, Clone)]
pub struct NilpotentGroup {
    alg: LieAlgebra,
    class: usize,
    coeffs: Vec<Rational>,
    coeffs_f64: Vec<f64>,
}

impl NilpotentGroup {
    pub fn new(alg: LieAlgebra) -> Result<Self> {
        let class = alg.nilpotency_class()?;
        let coeffs = bch_coefficients(class / 2 + 1);
        let coeffs_f64 = coeffs.iter().map(Scalar::to_f64).collect();
        Ok(NilpotentGroup { alg, class, coeffs, coeffs_f64 })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint::identity(self.dim())
    }

    fn bch_generic<T: AlgebraScalar>(&self, coeffs: &[T], x: &[T], y: &[T]) -> Result<Vec<T>> {
        let br = |a: &[T], b: &[T]| self.alg.bracket_in(a, b);
        let add = |a: &[T], b: &[T]| -> Vec<T> { a.iter().zip(b).map(|(p, q)| p.clone() + q.clone()).collect() };
        let scale = |a: &[T], s: &T| -> Vec<T> { a.iter().map(|p| p.clone() * s.clone()).collect() };
        let sum = add(x, y);
        let diff: Vec<T> = x.iter().zip(y).map(|(p, q)| p.clone() - q.clone()).collect();
        let half = T::one() / T::from_int(2);
        let mut z: Vec<Vec<T>> = vec![Vec::new(), sum.clone()];
        for n in 1..self.class {
            let mut acc = scale(&br(&diff, &z[n])?, &half);
            let mut p = 1;
            while 2 * p <= n {
                let mut inner = vec![T::zero(); x.len()];
                let mut err = None;
                compositions(n, 2 * p, &mut Vec::new(), &mut |ks| {
                    let mut nested = sum.clone();
                    for &k in ks.iter().rev() {
                        match br(&z[k], &nested) {
                            Ok(v) => nested = v,
                            Err(e) => err = Some(e),
                        }
                    }
                    inner = add(&inner, &nested);
                });
                if let Some(e) = err {
                    return Err(e);
                }
                acc = add(&acc, &scale(&inner, &coeffs[p - 1]));
                p += 1;
            }
            z.push(scale(&acc, &(T::one() / T::from_int(n as i64 + 1))));
        }
        Ok(z[1..].iter().fold(vec![T::zero(); x.len()], |a, b| add(&a, b)))
    }

    /// `log(exp(x) exp(y))` over the rationals; requires exact structure constants.
    pub fn bch_exact(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        self.bch_generic(&self.coeffs, x, y)
    }

    /// `log(exp(x) exp(y))` in floating point.
    pub fn bch(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        self.bch_generic(&self.coeffs_f64, x.as_slice(), y.as_slice())
            .map(DVector::from_vec)
    }

    /// Group product. Panics on a dimension mismatch.
    pub fn mul(&self, a: &GroupPoint, b: &GroupPoint) -> GroupPoint {
        GroupPoint::from_log(self.bch(&a.log, &b.log).expect("operands belong to this group"))
    }

    pub fn try_mul(&self, a: &GroupPoint, b: &GroupPoint) -> Result<GroupPoint> {
        self.bch(&a.log, &b.log).map(GroupPoint::from_log)
    }

    pub fn inverse(&self, a: &GroupPoint) -> GroupPoint {
        GroupPoint::from_log(-&a.log)
    }

    /// `a⁻¹ b`.
    pub fn left_divide(&self, a: &GroupPoint, b: &GroupPoint) -> GroupPoint {
        self.mul(&self.inverse(a), b)
    }

    /// `a^k`; integer powers stay on the one-parameter subgroup through `a`.
    pub fn power(&self, a: &GroupPoint, k: i64) -> GroupPoint {
        self.power_real(a, k as f64)
    }

    /// `a^t = exp(t log a)`.
    pub fn power_real(&self, a: &GroupPoint, t: f64) -> GroupPoint {
        GroupPoint::from_log(&a.log * t)
    }

    /// `ρ(x, y) = ‖log(x⁻¹ y)‖₂`, left-invariant and symmetric.
    pub fn quasi_distance(&self, x: &GroupPoint, y: &GroupPoint) -> f64 {
        self.left_divide(x, y).log.norm()
    }

    pub fn segment_point(&self, seg: &Segment, t: f64) -> GroupPoint {
        self.mul(&seg.base, &self.power_real(&seg.tau, t))
    }

    /// Parameter `t` with `x = base · τ^t`, if `x` lies on the line through the segment.
    pub fn segment_parameter(&self, seg: &Segment, x: &GroupPoint) -> Option<f64> {
        let d = self.left_divide(&seg.base, x);
        let tl = seg.tau.log();
        let nn = tl.norm_squared();
        if nn == 0.0 {
            return None;
        }
        let t = d.log.dot(tl) / nn;
        let res = (&d.log - tl * t).norm();
        (res < 1e-9 * (1.0 + d.log.norm())).then_some(t)
    }

    /// Whether `x` lies in the half-open segment.
    pub fn segment_contains(&self, seg: &Segment, x: &GroupPoint) -> bool {
        self.segment_parameter(seg, x).is_some_and(|t| (0.0..1.0).contains(&t))
    }

    /// `inf_{t ∈ [0,1)} ρ(x, base · τ^t)`.
    pub fn distance_to_segment(&self, x: &GroupPoint, seg: &Segment) -> f64 {
        self.distance_to_segment_hinted(x, seg, &[]).0
    }

    /// Like [`Self::distance_to_segment`], also probing the parameters in `hints`;
    /// returns the distance and the minimizing parameter.
    pub fn distance_to_segment_hinted(&self, x: &GroupPoint, seg: &Segment, hints: &[f64]) -> (f64, f64) {
        let f = |t: f64| self.quasi_distance(x, &self.segment_point(seg, t));
        let step = 1.0 / SEGMENT_GRID as f64;
        let candidates = (0..=SEGMENT_GRID)
            .map(|j| j as f64 * step)
            .chain(hints.iter().filter(|t| (0.0..=1.0).contains(*t)).cloned());
        let (mut best_t, mut best) = (0.0, f(0.0));
        for t in candidates {
            let v = f(t);
            if v < best {
                best = v;
                best_t = t;
            }
        }
        // golden-section refinement on the squared distance around the best sample
        let (mut lo, mut hi) = ((best_t - step).max(0.0), (best_t + step).min(1.0));
        let g = (5.0f64.sqrt() - 1.0) / 2.0;
        let sq = |t: f64| {
            let v = f(t);
            v * v
        };
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let (mut fc, mut fd) = (sq(c), sq(d));
        for _ in 0..200 {
            if hi - lo < 1e-14 {
                break;
            }
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = sq(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = sq(d);
            }
        }
        for t in [c, d] {
            let v = f(t);
            if v < best {
                best = v;
                best_t = t;
            }
        }
        (best, best_t)
    }

    /// Writes `n = a b` with `log a ∈ 𝔞`, `log b ∈ 𝔟`, where `𝔞 + 𝔟 = 𝔫`.
    pub fn factor_through_subalgebras(&self, n: &GroupPoint, a: &Subspace, b: &Subspace) -> Result<(GroupPoint, GroupPoint)> {
        let dim = self.dim();
        let rank = a.sum(b).dim();
        if rank < dim {
            return Err(Error::NotSpanning { rank, dim });
        }
        self.factor_within(n, a, b)
    }

    /// Factorization inside the subgroup `exp(𝔞 + 𝔟)`; `log n` must lie in `𝔞 + 𝔟`.
    ///
    /// Starts from the linear splitting (exact modulo `[𝔫, 𝔫]`) and corrects it
    /// by Newton steps. The differential of `(a, b) ↦ ab` has image
    /// `Ad(b⁻¹)𝔞 + 𝔟 = 𝔞 + 𝔟` everywhere, so the steps are always solvable.
    /// Components along `𝔟` are kept minimal, so `n ∈ exp(𝔞)` yields `b = 1`.
    pub fn factor_within(&self, n: &GroupPoint, a: &Subspace, b: &Subspace) -> Result<(GroupPoint, GroupPoint)> {
        let ambient = a.sum(b);
        let target = n.log();
        let miss = ambient.residual(target);
        if miss > 1e-8 * (1.0 + target.norm()) {
            return Err(Error::NotInDomain { residual: miss });
        }
        let qa = a.orthonormal().clone();
        let qb = b.orthonormal().clone();
        let (ka, kb) = (qa.ncols(), qb.ncols());
        let split = |ja: &DMatrix<f64>, jb: &DMatrix<f64>, rhs: &DVector<f64>| {
            // b-part: least squares modulo the range of ja; a-part: the rest
            let ra = linalg::column_space(ja, 1e-12);
            let proj = DMatrix::<f64>::identity(rhs.len(), rhs.len()) - &ra * ra.transpose();
            let off = &proj * rhs;
            let cb = if off.norm() <= 1e-13 * (1.0 + rhs.norm()) {
                DVector::zeros(jb.ncols())
            } else {
                linalg::least_squares(&(&proj * jb), &off).0
            };
            let (ca, _) = linalg::least_squares(ja, &(rhs - jb * &cb));
            (ca, cb)
        };
        let (mut ca, mut cb) = split(&qa, &qb, target);
        let eval = |ca: &DVector<f64>, cb: &DVector<f64>| self.bch(&(&qa * ca), &(&qb * cb));
        let scale = 1.0 + target.norm();
        let mut residual = f64::INFINITY;
        // the part of the target outside 𝔞 + 𝔟 (rounding only) is not chased
        let reachable = ambient.orthonormal() * ambient.orthonormal().transpose();
        for _ in 0..60 {
            let f = eval(&ca, &cb)? - target;
            residual = (&reachable * &f).norm();
            if residual <= 1e-14 * scale {
                break;
            }
            let mut ja = DMatrix::zeros(target.len(), ka);
            let mut jb = DMatrix::zeros(target.len(), kb);
            for i in 0..ka {
                let h = 1e-6 * (1.0 + ca[i].abs());
                let (mut p, mut m) = (ca.clone(), ca.clone());
                p[i] += h;
                m[i] -= h;
                ja.set_column(i, &((eval(&p, &cb)? - eval(&m, &cb)?) / (2.0 * h)));
            }
            for i in 0..kb {
                let h = 1e-6 * (1.0 + cb[i].abs());
                let (mut p, mut m) = (cb.clone(), cb.clone());
                p[i] += h;
                m[i] -= h;
                jb.set_column(i, &((eval(&ca, &p)? - eval(&ca, &m)?) / (2.0 * h)));
            }
            let (da, db) = split(&ja, &jb, &f);
            ca -= da;
            cb -= db;
        }
        if residual > 1e-10 * scale {
            return Err(Error::NoConvergence { residual });
        }
        Ok((GroupPoint::from_log(&qa * ca), GroupPoint::from_log(&qb * cb)))
    }

    /// Coset `base · exp(direction)`; the direction must be a subalgebra.
    pub fn affine_subspace(&self, base: GroupPoint, direction: Subspace) -> Result<AffineSubspace> {
        if !self.alg.is_subalgebra(&direction) {
            return Err(Error::InvalidStructure("direction is not a subalgebra".into()));
        }
        Ok(AffineSubspace { base, direction })
    }

    /// Residual of `log(base⁻¹ x)` against the coset's direction.
    pub fn coset_residual(&self, coset: &AffineSubspace, x: &GroupPoint) -> f64 {
        coset.direction.residual(self.left_divide(&coset.base, x).log())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::ratio;

    fn p(xs: &[f64]) -> GroupPoint {
        GroupPoint::from_slice(xs)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(6);
        assert_eq!(b[1], ratio(-1, 2));
        assert_eq!(b[2], ratio(1, 6));
        assert_eq!(b[4], ratio(-1, 30));
        assert_eq!(b[6], ratio(1, 42));
        assert_eq!(bch_coefficients(2), vec![ratio(1, 12), ratio(-1, 720)]);
    }

    #[test]
    fn heisenberg_product() {
        let g = NilpotentGroup::new(catalog::h3()).unwrap();
        assert_eq!(g.mul(&p(&[1., 0., 0.]), &p(&[0., 1., 0.])), p(&[1., 1., 0.5]));
        let x = p(&[0.4, -2.0, 1.5]);
        assert_eq!(g.mul(&x, &g.inverse(&x)), g.identity());
    }

    #[test]
    fn n4_product_exact() {
        let g = NilpotentGroup::new(catalog::n4()).unwrap();
        let one = ratio(1, 1);
        let zero = ratio(0, 1);
        let x = vec![one.clone(), zero.clone(), zero.clone(), zero.clone()];
        let y = vec![zero.clone(), one.clone(), zero.clone(), zero];
        let z = g.bch_exact(&x, &y).unwrap();
        assert_eq!(z, vec![ratio(1, 1), ratio(1, 1), ratio(1, 2), ratio(1, 12)]);
    }

    #[test]
    fn exact_mode_needs_rational_constants() {
        let alg = LieAlgebra::from_float(3, None, vec![(0, 1, 2, 1.0)]).unwrap();
        let g = NilpotentGroup::new(alg).unwrap();
        let v = vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)];
        assert_eq!(g.bch_exact(&v, &v), Err(Error::NotExact));
    }

    #[test]
    fn powers() {
        let g = NilpotentGroup::new(catalog::h3()).unwrap();
        let x = g.mul(&p(&[1., 0., 0.]), &p(&[0., 1., 0.]));
        // (1,1,½)·(1,1,½) = (2,2,1) by the class-2 closed form
        assert_eq!(g.power(&x, 2), p(&[2., 2., 1.]));
        assert_eq!(g.mul(&x, &x), p(&[2., 2., 1.]));
        assert_eq!(g.power(&x, 0), g.identity());
        assert_eq!(g.power(&x, -1), g.inverse(&x));
    }

    #[test]
    fn distances() {
        let g = NilpotentGroup::new(catalog::h3()).unwrap();
        let a = p(&[1., 0., 0.]);
        let b = p(&[0., 1., 0.]);
        assert!((g.quasi_distance(&a, &b) - 1.5).abs() < 1e-15);
        assert_eq!(g.quasi_distance(&a, &a), 0.0);
        let v = p(&[3., 4., 0.]);
        assert!((g.quasi_distance(&g.identity(), &v) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn segment_distance() {
        let g = NilpotentGroup::new(LieAlgebra::abelian(2)).unwrap();
        let seg = Segment { base: p(&[0., 0.]), tau: p(&[1., 0.]) };
        assert!((g.distance_to_segment(&p(&[0.5, 1.0]), &seg) - 1.0).abs() < 1e-12);
        assert_eq!(g.distance_to_segment(&p(&[0., 0.]), &seg), 0.0);
        assert!(g.distance_to_segment(&p(&[0.5, 0.]), &seg) <= 1e-6);
        assert!(g.segment_contains(&seg, &g.segment_point(&seg, 0.999)));
        assert!(!g.segment_contains(&seg, &g.segment_point(&seg, 1.0)));
    }

    #[test]
    fn heisenberg_factorization() {
        let g = NilpotentGroup::new(catalog::h3()).unwrap();
        let e = |i| g.algebra().basis_vector(i);
        let a = Subspace::from_vectors(3, &[e(0), e(2)]).unwrap();
        let b = Subspace::from_vectors(3, &[e(1)]).unwrap();
        let (fa, fb) = g.factor_through_subalgebras(&p(&[1., 1., 0.]), &a, &b).unwrap();
        assert!((fa.log() - DVector::from_row_slice(&[1., 0., -0.5])).norm() < 1e-12);
        assert!((fb.log() - e(1)).norm() < 1e-12);

        let (fa, fb) = g.factor_through_subalgebras(&p(&[0.3, 0., 2.]), &a, &b).unwrap();
        assert!((fa.log() - DVector::from_row_slice(&[0.3, 0., 2.])).norm() < 1e-14);
        assert_eq!(fb.log().norm(), 0.0);

        let narrow = Subspace::from_vectors(3, &[e(0)]).unwrap();
        assert_eq!(
            g.factor_through_subalgebras(&p(&[1., 1., 0.]), &narrow, &b).unwrap_err(),
            Error::NotSpanning { rank: 2, dim: 3 }
        );
    }

    #[test]
    fn cosets_require_subalgebras() {
        let g = NilpotentGroup::new(catalog::h3()).unwrap();
        let e = |i| g.algebra().basis_vector(i);
        let plane = Subspace::from_vectors(3, &[e(0), e(1)]).unwrap();
        assert!(g.affine_subspace(g.identity(), plane).is_err());
        let line = Subspace::from_vectors(3, &[e(0)]).unwrap();
        let c = g.affine_subspace(p(&[0., 1., 0.]), line).unwrap();
        let on = g.mul(&p(&[0., 1., 0.]), &p(&[2.5, 0., 0.]));
        assert!(g.coset_residual(&c, &on) < 1e-14);
    }
}
