//! Failure of proper discontinuity for positive pairs: fundamental segments,
//! the indices `k(x, g)`, and a certificate for the sequences `sᵢ, tᵢ`.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::affine::AffineMotion;
use crate::error::{Error, Result};
use crate::g54;
use crate::group::{GroupPoint, NilpotentGroup, Segment};
use crate::dynamics::{positive_pair, transversality, PairGeometry, PairVerdict, Pseudohyperbolic};
use crate::splitting::restriction;

/// Parameters within this (relative) distance of an integer are snapped to it before flooring.
pub const SNAP_TOL: f64 = 1e-9;
/// Powers `g^k` are applied literally only while `‖ℓ(g)^{±1}‖^{|k|}` stays below this.
pub const AMPLIFICATION_LIMIT: f64 = 1e6;
/// Tolerance for the witness identities, relative to `1 + ‖log xᵢ‖`.
pub const WITNESS_TOL: f64 = 1e-9;
/// Largest `|k|` that `k_index` confirms by iteration.
pub const VERIFY_STEPS: u64 = 4096;
/// Records needed in the tail before fitted quantities are checked.
pub const MIN_TAIL: usize = 3;

/// `R(g) = { m(g)·τ(g)^t : 0 ≤ t < 1 }` for a base `m(g)` on `C_g`.
pub fn fundamental_segment(ph: &Pseudohyperbolic, grp: &NilpotentGroup, base: &GroupPoint) -> Result<Segment> {
    if !ph.is_fixed_point_free() {
        return Err(Error::NotPseudohyperbolic);
    }
    let rel = grp.left_divide(&ph.line.base, base).into_log();
    let a = &ph.line.direction;
    let residual = (&rel - a * rel.dot(a)).norm();
    if residual > 1e-9 * (1.0 + base.log().norm()) {
        return Err(Error::BaseNotOnLine { residual });
    }
    Ok(Segment { base: base.clone(), tau: ph.line.tau.clone() })
}

/// `⌊t⌋`, after snapping `t` to a nearby integer.
pub fn floor_snapped(t: f64) -> f64 {
    let r = t.round();
    if (t - r).abs() <= SNAP_TOL * t.abs().max(1.0) {
        r
    } else {
        t.floor()
    }
}

/// `t` with `P_g(x) = base(R)·τ(g)^t`.
pub fn segment_offset(ph: &Pseudohyperbolic, grp: &NilpotentGroup, seg: &Segment, x: &GroupPoint) -> Result<f64> {
    Ok(ph.tau_coordinate(grp, x)? - ph.tau_coordinate(grp, &seg.base)?)
}

fn amplification(m: &DMatrix<f64>, k: i64) -> f64 {
    let a = if k < 0 { m.clone().try_inverse().expect("automorphism") } else { m.clone() };
    a.norm().max(1.0).powi(k.unsigned_abs().min(i32::MAX as u64) as i32)
}

fn to_index(t: f64, budget: i64) -> Result<i64> {
    let f = floor_snapped(t);
    if !f.is_finite() || f.abs() > budget as f64 {
        return Err(Error::IndexOverflow(if f > 0.0 { i64::MAX } else { i64::MIN }));
    }
    Ok(f as i64)
}

/// The unique `k` with `P_g(g^k x) ∈ R(g)`, i.e. `k = −⌊t₀⌋`.
///
/// The result is confirmed by iterating `g^{±1}` when that is well conditioned:
/// `k ≤ 0` (contracting on `𝔫⁺`) up to `VERIFY_STEPS` steps, or `k > 0` while
/// the amplification stays below `AMPLIFICATION_LIMIT`.
pub fn k_index(ph: &Pseudohyperbolic, grp: &NilpotentGroup, seg: &Segment, x: &GroupPoint) -> Result<i64> {
    let t0 = segment_offset(ph, grp, seg, x)?;
    let k = -to_index(t0, i64::MAX / 4)?;
    let verify = if k <= 0 {
        k.unsigned_abs() <= VERIFY_STEPS
    } else {
        amplification(ph.motion.auto.matrix(), k) <= AMPLIFICATION_LIMIT
    };
    if verify {
        let y = iterate_on_e_plus(ph, grp, x, k);
        let t = segment_offset(ph, grp, seg, &y)?;
        if !(-1e-8..1.0).contains(&t) {
            return Err(Error::NoConvergence { residual: t });
        }
    }
    Ok(k)
}

/// `g^k x` for `x ∈ E⁺_g`, as `P_g(x)·τ^k · α^k(n⁺)`; for `k < 0` this only
/// ever applies the contraction `α⁻¹|𝔫⁺`.
pub fn power_on_e_plus(ph: &Pseudohyperbolic, grp: &NilpotentGroup, x: &GroupPoint, k: i64) -> Result<GroupPoint> {
    let (u, np) = ph.factor(grp, x)?;
    let plus = ph.splitting.plus();
    let mut c = plus.coordinates(np.log()).0;
    if plus.dim() > 0 {
        let r = restriction(ph.motion.auto.matrix(), plus);
        let step = if k < 0 { r.try_inverse().ok_or(Error::Singular)? } else { r };
        for _ in 0..k.unsigned_abs() {
            c = &step * c;
        }
    }
    let moved = GroupPoint::from_log(plus.basis() * c);
    let on_line = ph.line.point(grp, u + k as f64 * ph.line.t.norm());
    Ok(grp.mul(&on_line, &moved))
}

/// `g^k x` by `|k|` literal applications of `g^{±1}`, removing after each step
/// the `𝔫⁻`-component that rounding introduces (the exact orbit stays in `E⁺_g`).
pub fn iterate_on_e_plus(ph: &Pseudohyperbolic, grp: &NilpotentGroup, x: &GroupPoint, k: i64) -> GroupPoint {
    let step = if k < 0 { ph.motion.inverse(grp) } else { ph.motion.clone() };
    let mut y = x.clone();
    for _ in 0..k.unsigned_abs() {
        y = step.act(grp, &y);
        let rel = grp.left_divide(&ph.line.base, &y).into_log();
        let [_, zero, plus] = ph.splitting.decompose(&rel);
        y = grp.mul(&ph.line.base, &GroupPoint::from_log(zero + plus));
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoOptions {
    /// Largest admissible `sᵢ`, `tᵢ`.
    pub max_index: i64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions { max_index: 1_000_000 }
    }
}

/// One index `i` of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub i: usize,
    pub s: i64,
    pub t: i64,
    /// `dist(g₁^{−sᵢ}xᵢ, R(g₁))`.
    pub d1: f64,
    /// `dist(g₂^{−tᵢ}xᵢ, R(g₂))`.
    pub d2: f64,
    /// Segment offsets of `P_{g₁}(xᵢ)` and `P_{g₂}(xᵢ)`.
    pub offset1: f64,
    pub offset2: f64,
    /// `ρ` between the decomposed and the literally iterated `g₁^{−sᵢ}xᵢ`, `g₂^{−tᵢ}xᵢ`.
    pub iteration_residual: f64,
    /// `ρ(g₁^{−sᵢ}g₂^{tᵢ}·(g₂^{−tᵢ}xᵢ), g₁^{−sᵢ}xᵢ)` with full motions, when the powers are well conditioned.
    pub direct_residual: Option<f64>,
    pub x_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Fitted `d₁ᵢ ≈ ĉ·e^{−b̂ sᵢ}` on the tail.
    pub b_hat: f64,
    pub c_hat: f64,
    /// Slope of `log d₁ᵢ + b̂ sᵢ` against `log i` (the polynomial envelope degree).
    pub poly_degree: f64,
}

/// Numerical record of the construction for one positive pair.
#[derive(Debug, Clone)]
pub struct ObstructionCertificate {
    pub algebra: Option<String>,
    pub inverted_g2: bool,
    /// `g₁` and the element actually paired with it (`g₂` or `g₂⁻¹`).
    pub g1: AffineMotion,
    pub g2: AffineMotion,
    pub m1: GroupPoint,
    pub m2: GroupPoint,
    pub x0: GroupPoint,
    pub v: DVector<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
    pub r0: f64,
    pub r0_2: f64,
    pub records: Vec<Record>,
    pub bound1: f64,
    pub bound2: f64,
    pub decay_fit: Option<DecayFit>,
}

fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Least-squares decay fit on the records with `i ≥ i_max / 2` and `d₁ > 0`.
pub fn fit_decay(records: &[(usize, i64, f64)]) -> Option<DecayFit> {
    let i_max = records.iter().map(|r| r.0).max()?;
    let tail: Vec<&(usize, i64, f64)> = records.iter().filter(|r| 2 * r.0 >= i_max && r.2 > 0.0).collect();
    if tail.len() < MIN_TAIL {
        return None;
    }
    let s: Vec<f64> = tail.iter().map(|r| r.1 as f64).collect();
    let ld: Vec<f64> = tail.iter().map(|r| r.2.ln()).collect();
    let (slope, intercept) = fit_line(&s, &ld);
    let b_hat = -slope;
    let li: Vec<f64> = tail.iter().map(|r| (r.0 as f64).ln()).collect();
    let env: Vec<f64> = ld.iter().zip(&s).map(|(l, s)| l + b_hat * s).collect();
    let (poly_degree, _) = fit_line(&li, &env);
    Some(DecayFit { b_hat, c_hat: intercept.exp(), poly_degree })
}

fn pair_for(grp: &NilpotentGroup, g1: &AffineMotion, g2: &AffineMotion) -> Result<(PairGeometry, AffineMotion, bool)> {
    let describe = |e: Error| Error::NotPositivePair(alloc::format!("{e}"));
    let pg = transversality(grp, g1, g2).map_err(describe)?;
    match positive_pair(&pg) {
        PairVerdict::PositiveAsIs => Ok((pg, g2.clone(), false)),
        PairVerdict::PositiveAfterInvertingG2 => {
            // d⁺(g₂⁻¹) = d⁻(g₂), so transversality has to be checked again
            let inv = g2.inverse(grp);
            let pg = transversality(grp, g1, &inv).map_err(describe)?;
            match positive_pair(&pg) {
                PairVerdict::PositiveAsIs => Ok((pg, inv, true)),
                _ => Err(Error::NotPositivePair("no orientation of V is positive for g1 and g2^-1".into())),
            }
        }
        PairVerdict::Failure => Err(Error::NotPositivePair("V has a vanishing translational coefficient".into())),
    }
}

/// Runs the construction for `i = 1 … i_max`.
pub fn run_demonstrator(
    grp: &NilpotentGroup,
    g1: &AffineMotion,
    g2: &AffineMotion,
    i_max: usize,
    opts: DemoOptions,
) -> Result<ObstructionCertificate> {
    let (pg, g2_eff, inverted) = pair_for(grp, g1, g2)?;
    let (p1, p2) = (&pg.first, &pg.second);
    let (m1, m2) = (p1.line.base.clone(), p2.line.base.clone());
    let seg1 = fundamental_segment(p1, grp, &m1)?;
    let seg2 = fundamental_segment(p2, grp, &m2)?;

    let (a, _) = grp.factor_through_subalgebras(&grp.left_divide(&m1, &m2), &p1.splitting.dplus(), &p2.splitting.dplus())?;
    let x0 = grp.mul(&m1, &a);

    let scale = 1.0 / pg.lambdas.0.min(pg.lambdas.1);
    let v = &pg.v * scale;
    let (lambda1, lambda2) = (pg.lambdas.0 * scale, pg.lambdas.1 * scale);
    let r0 = segment_offset(p1, grp, &seg1, &x0)?;
    let r0_2 = segment_offset(p2, grp, &seg2, &x0)?;

    let (alpha1, alpha2) = (g1.auto.matrix(), g2_eff.auto.matrix());
    let mut records = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let xi = grp.mul(&x0, &GroupPoint::from_log(&v * i as f64));
        let offset1 = segment_offset(p1, grp, &seg1, &xi)?;
        let offset2 = segment_offset(p2, grp, &seg2, &xi)?;
        let s = to_index(offset1, opts.max_index)?;
        let t = to_index(offset2, opts.max_index)?;
        let w1 = power_on_e_plus(p1, grp, &xi, -s)?;
        let w2 = power_on_e_plus(p2, grp, &xi, -t)?;
        let (d1, _) = grp.distance_to_segment_hinted(&w1, &seg1, &[offset1 - s as f64]);
        let (d2, _) = grp.distance_to_segment_hinted(&w2, &seg2, &[offset2 - t as f64]);

        let lit1 = iterate_on_e_plus(p1, grp, &xi, -s);
        let lit2 = iterate_on_e_plus(p2, grp, &xi, -t);
        let iteration_residual = grp.quasi_distance(&lit1, &w1).max(grp.quasi_distance(&lit2, &w2));

        let amp = amplification(alpha1, -s) * amplification(alpha2, t) * amplification(alpha2, -t);
        let direct_residual = (amp <= AMPLIFICATION_LIMIT).then(|| {
            let h = g1.power(grp, -s).compose(grp, &g2_eff.power(grp, t));
            let direct2 = g2_eff.power(grp, -t).act(grp, &xi);
            grp.quasi_distance(&h.act(grp, &w2), &w1).max(grp.quasi_distance(&direct2, &w2))
        });
        records.push(Record {
            i,
            s,
            t,
            d1,
            d2,
            offset1,
            offset2,
            iteration_residual,
            direct_residual,
            x_norm: xi.log().norm(),
        });
    }
    let bound1 = records.iter().map(|r| r.d1).fold(0.0, f64::max);
    let bound2 = records.iter().map(|r| r.d2).fold(0.0, f64::max);
    let decay_fit = fit_decay(&records.iter().map(|r| (r.i, r.s, r.d1)).collect::<Vec<_>>());
    Ok(ObstructionCertificate {
        algebra: grp.algebra().name().map(String::from),
        inverted_g2: inverted,
        g1: g1.clone(),
        g2: g2_eff,
        m1,
        m2,
        x0,
        v,
        lambda1,
        lambda2,
        r0,
        r0_2,
        records,
        bound1,
        bound2,
        decay_fit,
    })
}

/// Outcome of one certificate check.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckStatus {
    Pass,
    Fail(String),
    /// Not enough records to evaluate; reported as a warning.
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.status, CheckStatus::Fail(_)))
    }

    pub fn warnings(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| matches!(c.status, CheckStatus::Skipped(_)))
    }
}

/// The numeric content of a certificate that the invariant checks read.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateData {
    pub lambda1: f64,
    pub lambda2: f64,
    pub r0: f64,
    pub r0_2: f64,
    pub bound1: f64,
    pub bound2: f64,
    pub records: Vec<Record>,
    pub decay_fit: Option<DecayFit>,
}

impl ObstructionCertificate {
    pub fn data(&self) -> CertificateData {
        CertificateData {
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            r0: self.r0,
            r0_2: self.r0_2,
            bound1: self.bound1,
            bound2: self.bound2,
            records: self.records.clone(),
            decay_fit: self.decay_fit,
        }
    }

    pub fn check_invariants(&self) -> InvariantReport {
        check_invariants(&self.data())
    }
}

fn status(ok: bool, why: impl FnOnce() -> String) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail(why())
    }
}

/// Eventual decay starts being required at this index.
pub const DECAY_FROM: usize = 20;
/// Strict index growth is required from this index on.
pub const GROWTH_FROM: usize = 5;
/// Allowed relative deviation of `i/sᵢ` from `1/λ₁` at the last index.
pub const RATIO_TOL: f64 = 0.05;
/// Largest admissible degree of the polynomial envelope.
pub const MAX_POLY_DEGREE: f64 = 10.0;

/// Re-evaluates the certificate's claims from its numbers alone.
pub fn check_invariants(c: &CertificateData) -> InvariantReport {
    use alloc::format;
    let recs = &c.records;
    let mut checks = Vec::new();
    let mut push = |name: &'static str, status: CheckStatus| checks.push(InvariantCheck { name, status });
    let short = |need: usize| CheckStatus::Skipped(format!("insufficient tail: {} records, need {need}", recs.len()));

    let bad = recs.iter().find(|r| !(r.d1 <= c.bound1 && r.d2 <= c.bound2));
    push("witness bounds", status(bad.is_none() && !recs.is_empty(), || match bad {
        Some(r) => format!("i = {}: d1 = {:e}, d2 = {:e} exceed M1 = {:e}, M2 = {:e}", r.i, r.d1, r.d2, c.bound1, c.bound2),
        None => "no records".into(),
    }));

    let bad = recs.iter().find(|r| {
        r.iteration_residual > WITNESS_TOL * (1.0 + r.x_norm)
            || r.direct_residual.is_some_and(|d| d > WITNESS_TOL * (1.0 + r.x_norm))
    });
    push("witness identity", status(bad.is_none(), || {
        let r = bad.unwrap();
        format!("i = {}: iteration residual {:e}, direct residual {:?}", r.i, r.iteration_residual, r.direct_residual)
    }));

    let bad = recs.iter().find(|r| {
        let e1 = c.r0 + c.lambda1 * r.i as f64 - r.s as f64;
        let e2 = c.r0_2 + c.lambda2 * r.i as f64 - r.t as f64;
        let tol = |x: f64| 1e-8 * x.abs().max(1.0);
        !(e1 >= -tol(r.offset1) && e1 < 1.0 + tol(r.offset1)) || !(e2 >= -tol(r.offset2) && e2 < 1.0 + tol(r.offset2))
    });
    push("index formula", status(bad.is_none(), || format!("i = {}: index outside r0 + lambda*i - [0, 1)", bad.unwrap().i)));

    if recs.len() > GROWTH_FROM {
        let bad = recs.windows(2).find(|w| w[1].i > GROWTH_FROM && !(w[1].s > w[0].s && w[1].t > w[0].t));
        push("index growth", status(bad.is_none(), || format!("s or t not increasing at i = {}", bad.unwrap()[1].i)));
    } else {
        push("index growth", short(GROWTH_FROM + 1));
    }

    match recs.first() {
        Some(first) if recs.len() >= DECAY_FROM => {
            let bad = recs.iter().find(|r| r.i >= DECAY_FROM && !(r.d1 < first.d1 && r.d2 < first.d2));
            push("eventual decay", status(bad.is_none(), || format!("i = {}: distance not below its first value", bad.unwrap().i)));
        }
        _ => push("eventual decay", short(DECAY_FROM)),
    }

    match c.decay_fit {
        Some(fit) => {
            push("decay rate", status(fit.b_hat > 0.0, || format!("b_hat = {}", fit.b_hat)));
            push("polynomial envelope", status(fit.poly_degree <= MAX_POLY_DEGREE, || format!("degree {}", fit.poly_degree)));
        }
        None => {
            push("decay rate", short(2 * MIN_TAIL));
            push("polynomial envelope", short(2 * MIN_TAIL));
        }
    }

    match recs.last() {
        Some(last) if recs.len() >= DECAY_FROM && last.s > 0 => {
            let ratio = last.i as f64 / last.s as f64;
            let rel = (ratio * c.lambda1 - 1.0).abs();
            push("ratio limit", status(rel <= RATIO_TOL, || format!("i/s = {ratio} vs 1/lambda1 = {}", 1.0 / c.lambda1)));
        }
        _ => push("ratio limit", short(DECAY_FROM)),
    }
    InvariantReport { checks }
}

/// Default translation part of the conjugating element in [`g54_case_study`].
pub const DEFAULT_H_TRANSLATION: [f64; 5] = [0.0, 1.0, 0.0, 0.0, 0.0];

/// The pair `g₁ = (exp C, extend(diag(λ, 1/λ)))`, `g₂ = h g₁ h⁻¹` with
/// `h = (exp(h_trans), extend(M_h))` on `g5_4`.
pub fn g54_case_study(
    grp: &NilpotentGroup,
    lambda: f64,
    m_h: &Matrix2<f64>,
    h_trans: &DVector<f64>,
) -> Result<(AffineMotion, AffineMotion)> {
    if lambda.is_nan() || lambda <= 1.0 {
        return Err(Error::InvalidStructure(alloc::format!("lambda must exceed 1, got {lambda}")));
    }
    let d = Matrix2::new(lambda, 0.0, 0.0, 1.0 / lambda);
    let comm = m_h * d - d * m_h;
    if comm.amax() <= 1e-12 * m_h.amax().max(1.0) * lambda {
        return Err(Error::CommutingChoice);
    }
    let l1 = g54::extend_gl2(&d)?;
    let beta = g54::extend_gl2(m_h)?;
    let g1 = AffineMotion::new(GroupPoint::from_slice(&[0.0, 0.0, 1.0, 0.0, 0.0]), l1)?;
    let h = AffineMotion::new(GroupPoint::from_log(h_trans.clone()), beta)?;
    let g2 = g1.conjugate_by(grp, &h);
    Ok((g1, g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::check_automorphism;
    use crate::catalog;
    use crate::lie::LieAlgebra;
    use crate::splitting::spectral_splitting;

    fn default_pair(grp: &NilpotentGroup) -> (AffineMotion, AffineMotion) {
        let ht = DVector::from_row_slice(&DEFAULT_H_TRANSLATION);
        g54_case_study(grp, 2.0, &Matrix2::new(2.0, 1.0, 1.0, 1.0), &ht).unwrap()
    }

    #[test]
    fn abelian_segment_and_indices() {
        let grp = NilpotentGroup::new(LieAlgebra::abelian(2)).unwrap();
        let alpha = check_automorphism(DMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, 2.0])), grp.algebra()).unwrap();
        let g = AffineMotion::new(GroupPoint::from_slice(&[1.0, 3.0]), alpha).unwrap();
        let ph = Pseudohyperbolic::new(&grp, &g).unwrap();
        let m = GroupPoint::from_slice(&[0.0, -3.0]);
        let seg = fundamental_segment(&ph, &grp, &m).unwrap();
        assert_eq!(seg.tau, GroupPoint::from_slice(&[1.0, 0.0]));
        assert!(grp.segment_contains(&seg, &GroupPoint::from_slice(&[0.999, -3.0])));
        assert!(!grp.segment_contains(&seg, &GroupPoint::from_slice(&[1.0, -3.0])));
        assert!(matches!(
            fundamental_segment(&ph, &grp, &GroupPoint::from_slice(&[0.0, -2.0])),
            Err(Error::BaseNotOnLine { .. })
        ));
        assert_eq!(k_index(&ph, &grp, &seg, &m).unwrap(), 0);
        let three = GroupPoint::from_slice(&[3.0, -3.0]);
        assert_eq!(k_index(&ph, &grp, &seg, &three).unwrap(), -3);
        let x = GroupPoint::from_slice(&[2.5, -1.0]);
        let k = k_index(&ph, &grp, &seg, &x).unwrap();
        assert_eq!(k_index(&ph, &grp, &seg, &g.act(&grp, &x)).unwrap(), k - 1);
    }

    #[test]
    fn case_study_segment() {
        let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
        let (g1, _) = default_pair(&grp);
        let ph = Pseudohyperbolic::new(&grp, &g1).unwrap();
        let seg = fundamental_segment(&ph, &grp, &ph.line.base).unwrap();
        assert!(seg.base.log().norm() < 1e-12);
        assert!((seg.tau.log() - DVector::from_row_slice(&[0., 0., 1., 0., 0.])).norm() < 1e-12);
    }

    #[test]
    fn case_study_construction() {
        let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
        let (g1, g2) = default_pair(&grp);
        let s2 = spectral_splitting(&g2.auto).unwrap();
        assert_eq!(s2.dims(), (2, 1, 2));
        let mut ev1: Vec<f64> = g1.auto.matrix().clone().complex_eigenvalues().iter().map(|z| z.re).collect();
        let mut ev2: Vec<f64> = g2.auto.matrix().clone().complex_eigenvalues().iter().map(|z| z.re).collect();
        ev1.sort_by(f64::total_cmp);
        ev2.sort_by(f64::total_cmp);
        for (a, b) in ev1.iter().zip(&ev2) {
            assert!((a - b).abs() < 1e-9);
        }
        let ht = DVector::from_row_slice(&DEFAULT_H_TRANSLATION);
        assert_eq!(
            g54_case_study(&grp, 2.0, &Matrix2::new(3.0, 0.0, 0.0, 1.0 / 3.0), &ht).unwrap_err(),
            Error::CommutingChoice
        );
    }

    #[test]
    fn demonstrator_runs_and_is_deterministic() {
        let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
        let (g1, g2) = default_pair(&grp);
        let a = run_demonstrator(&grp, &g1, &g2, 40, DemoOptions::default()).unwrap();
        let b = run_demonstrator(&grp, &g1, &g2, 40, DemoOptions::default()).unwrap();
        assert_eq!(a.records, b.records);
        assert!(!a.inverted_g2);
        assert!((a.lambda1 - 1.0).abs() < 1e-12);
        let report = a.check_invariants();
        assert!(report.passed() && report.warnings().count() == 0, "{report:?}");
        let last = a.records.last().unwrap();
        assert!(last.d1 < 1e-6 && last.d2 < 1e-6);
    }

    #[test]
    fn negative_determinant_inverts_g2() {
        let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
        let ht = DVector::from_row_slice(&DEFAULT_H_TRANSLATION);
        let (g1, g2) = g54_case_study(&grp, 2.0, &Matrix2::new(1.0, 2.0, 1.0, 1.0), &ht).unwrap();
        let c = run_demonstrator(&grp, &g1, &g2, 25, DemoOptions::default()).unwrap();
        assert!(c.inverted_g2);
        assert!(c.check_invariants().passed());
        // with M_h[1][1] = 0 the inverted pair is not transversal
        let (g1, g2) = g54_case_study(&grp, 2.0, &Matrix2::new(1.0, 1.0, 1.0, 0.0), &ht).unwrap();
        assert!(matches!(run_demonstrator(&grp, &g1, &g2, 5, DemoOptions::default()), Err(Error::NotPositivePair(_))));
    }

    #[test]
    fn degenerate_inputs() {
        let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
        let (g1, g2) = default_pair(&grp);
        assert!(matches!(run_demonstrator(&grp, &g1, &g1, 5, DemoOptions::default()), Err(Error::NotPositivePair(_))));
        assert!(matches!(
            run_demonstrator(&grp, &g1, &g2, 10, DemoOptions { max_index: 5 }),
            Err(Error::IndexOverflow(_))
        ));
        let single = run_demonstrator(&grp, &g1, &g2, 1, DemoOptions::default()).unwrap();
        assert_eq!(single.records.len(), 1);
        let report = single.check_invariants();
        assert!(report.passed());
        assert!(report.warnings().any(|w| matches!(&w.status, CheckStatus::Skipped(m) if m.contains("insufficient tail"))));
    }

    #[test]
    fn snapping() {
        assert_eq!(floor_snapped(2.9999999999999), 3.0);
        assert_eq!(floor_snapped(2.99), 2.0);
        assert_eq!(floor_snapped(-0.5), -1.0);
    }
}
