use nalgebra::{DMatrix, DVector, Matrix2};
use nilcrys_core::affine::AffineMotion;
use nilcrys_core::automorphism::{check_automorphism, derivations, exp_derivation, Automorphism};
use nilcrys_core::{g54, GroupPoint, LieAlgebra, NilpotentGroup};
use rand::Rng;

/// `exp(D)` for a random combination of a basis of `Der(alg)`.
pub fn random_exp_derivation(alg: &LieAlgebra, rng: &mut impl Rng, scale: f64) -> Automorphism {
    let der = derivations(alg);
    let coeffs: Vec<f64> = (0..der.dim()).map(|_| rng.gen_range(-scale..scale)).collect();
    exp_derivation(alg, &der.combination(&coeffs)).expect("combinations of derivations are derivations")
}

/// A random integer matrix with determinant ±1 (product of elementary moves).
pub fn random_gl2z(rng: &mut impl Rng) -> Matrix2<f64> {
    let mut m = Matrix2::identity();
    for _ in 0..rng.gen_range(1..4) {
        let k = rng.gen_range(-2..=2) as f64;
        let e = if rng.gen_bool(0.5) { Matrix2::new(1.0, k, 0.0, 1.0) } else { Matrix2::new(1.0, 0.0, k, 1.0) };
        m *= e;
    }
    if rng.gen_bool(0.25) {
        m *= Matrix2::new(0.0, 1.0, 1.0, 0.0);
    }
    m
}

/// Random automorphism: `exp` of a random derivation, composed with an
/// integral `extend_gl2` generator on `g5_4`.
pub fn random_automorphism(alg: &LieAlgebra, rng: &mut impl Rng) -> Automorphism {
    let a = random_exp_derivation(alg, rng, 0.8);
    if alg.name() == Some("g5_4") {
        a.compose(&g54::extend_gl2(&random_gl2z(rng)).unwrap())
    } else {
        a
    }
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.gen_range(-scale..scale))
}

/// A random hyperbolic matrix in `SL₂(ℝ)` (|trace| ≥ 2.5).
pub fn random_hyperbolic_sl2(rng: &mut impl Rng) -> Matrix2<f64> {
    loop {
        let a: f64 = rng.gen_range(-2.5..2.5);
        let b: f64 = rng.gen_range(-2.0..2.0);
        let c: f64 = rng.gen_range(-2.0..2.0);
        if a.abs() < 0.2 {
            continue;
        }
        let d = (1.0 + b * c) / a;
        let m = Matrix2::new(a, b, c, d);
        if m.trace().abs() >= 2.5 && m.amax() < 8.0 {
            return m;
        }
    }
}

/// Random element of `Ω` on `g5_4`, `h3` or `n4`: a linear part with a single
/// eigenvalue of modulus one (equal to 1, with a 1-dimensional fixed line),
/// conjugated by a random automorphism, and a random translation.
pub fn random_omega(grp: &NilpotentGroup, rng: &mut impl Rng) -> AffineMotion {
    let alg = grp.algebra();
    let n = alg.dim();
    let core = match alg.name() {
        Some("g5_4") => g54::extend_gl2(&random_hyperbolic_sl2(rng)).unwrap(),
        Some("h3") => {
            let m = random_hyperbolic_sl2(rng);
            let mut a = DMatrix::identity(3, 3);
            a.view_mut((0, 0), (2, 2)).copy_from(&m);
            check_automorphism(a, alg).unwrap()
        }
        Some("n4") => {
            let mut a: f64 = rng.gen_range(1.3..2.5);
            if rng.gen_bool(0.5) {
                a = 1.0 / a;
            }
            if rng.gen_bool(0.3) {
                a = -a;
            }
            let d = match rng.gen_range(0..3) {
                0 => [a, 1.0, a, a * a],
                1 => [a, 1.0 / a, 1.0, a],
                _ => [a, 1.0 / (a * a), 1.0 / a, 1.0],
            };
            check_automorphism(DMatrix::from_diagonal(&DVector::from_row_slice(&d)), alg).unwrap()
        }
        other => panic!("no Omega generator for {other:?}"),
    };
    let beta = random_exp_derivation(alg, rng, 0.3);
    let auto = beta.compose(&core).compose(&beta.inverse());
    let trans = GroupPoint::from_log(DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)));
    AffineMotion::new(trans, auto).unwrap()
}
