mod support;

use nalgebra::{DVector, Matrix2};
use nilcrys_core::dynamics::Pseudohyperbolic;
use nilcrys_core::obstruction::{
    fundamental_segment, g54_case_study, k_index, power_on_e_plus, run_demonstrator, CheckStatus, DemoOptions, DEFAULT_H_TRANSLATION,
};
use nilcrys_core::{catalog, Error, GroupPoint, NilpotentGroup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::gen;

#[test]
fn index_shifts_under_g() {
    for seed in 0..60 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let name = ["g5_4", "h3", "n4"][(seed % 3) as usize];
        let grp = NilpotentGroup::new(catalog::catalog(name).unwrap()).unwrap();
        let g = gen::random_omega(&grp, &mut rng);
        let ph = Pseudohyperbolic::new(&grp, &g).unwrap();
        if !ph.is_fixed_point_free() {
            continue;
        }
        let seg = fundamental_segment(&ph, &grp, &ph.line.base).unwrap();
        let on = ph.line.point(&grp, rng.gen_range(-5.0..5.0) * ph.line.t.norm());
        let plus = ph.splitting.plus().orthonormal();
        let np = plus * DVector::from_fn(plus.ncols(), |_, _| rng.gen_range(-0.5..0.5));
        let x = grp.mul(&on, &GroupPoint::from_log(np));
        let k = k_index(&ph, &grp, &seg, &x).unwrap();
        let gx = g.act(&grp, &x);
        assert_eq!(k_index(&ph, &grp, &seg, &gx).unwrap(), k - 1, "seed {seed}");
        let p = ph.project(&grp, &power_on_e_plus(&ph, &grp, &x, k).unwrap()).unwrap();
        let t = grp.segment_parameter(&seg, &p).unwrap();
        assert!((-1e-9..1.0).contains(&t), "seed {seed}: t = {t}");
    }
}

#[test]
fn random_case_studies() {
    let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
    let ht = DVector::from_row_slice(&DEFAULT_H_TRANSLATION);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ran = 0;
    for _ in 0..40 {
        let lambda = rng.gen_range(1.5..3.0);
        let m_h = gen::random_gl2z(&mut rng);
        let (g1, g2) = match g54_case_study(&grp, lambda, &m_h, &ht) {
            Ok(p) => p,
            Err(Error::CommutingChoice) => continue,
            Err(e) => panic!("{e}"),
        };
        let cert = match run_demonstrator(&grp, &g1, &g2, 12, DemoOptions::default()) {
            Ok(c) => c,
            Err(Error::NotPositivePair(_)) => continue,
            Err(e) => panic!("M_h = {m_h}: {e}"),
        };
        ran += 1;
        let report = cert.check_invariants();
        for check in &report.checks {
            if check.name.starts_with("witness") || check.name == "index formula" {
                assert_eq!(check.status, CheckStatus::Pass, "M_h = {m_h}: {check:?}");
            }
        }
    }
    assert!(ran >= 10, "only {ran} positive pairs");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn demo_indices_follow_lambda(lambda in 1.5f64..4.0, b in -2.0f64..2.0) {
        let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
        let ht = DVector::from_row_slice(&[0.0, 1.0, 0.0, b, 0.0]);
        let (g1, g2) = g54_case_study(&grp, lambda, &Matrix2::new(2.0, 1.0, 1.0, 1.0), &ht).unwrap();
        let c = run_demonstrator(&grp, &g1, &g2, 15, DemoOptions::default()).unwrap();
        for r in &c.records {
            let s = r.s as f64;
            prop_assert!(s >= c.lambda1 * r.i as f64 - 2.0);
            prop_assert!(r.d1 <= c.bound1 && r.d2 <= c.bound2);
        }
    }
}
