mod support;

use nalgebra::{DMatrix, Matrix2};
use nilcrys_core::automorphism::{check_automorphism, derivations, is_solvable};
use nilcrys_core::splitting::{restriction, spectral_splitting, verify_splitting_structure, ModulusClass};
use nilcrys_core::{catalog, g54, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::gen;

#[test]
fn splitting_structure_on_generated_automorphisms() {
    let algebras = catalog::all();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut checked, mut ambiguous) = (0, 0);
    for trial in 0..500 {
        let alg = &algebras[trial % algebras.len()];
        let a = gen::random_automorphism(alg, &mut rng);
        let s = match spectral_splitting(&a) {
            Ok(s) => s,
            Err(Error::ModulusAmbiguous { .. }) => {
                ambiguous += 1;
                continue;
            }
            Err(e) => panic!("{:?}: {e}", alg.name()),
        };
        let (k, l, m) = s.dims();
        assert_eq!(k + l + m, alg.dim());
        for part in [s.minus(), s.zero(), s.plus()] {
            assert!(part.invariance_residual(a.matrix()) < 1e-9 * a.matrix().amax().max(1.0));
        }
        let report = verify_splitting_structure(alg, &s).unwrap();
        assert!(report.passed(), "{:?}: {:?}", alg.name(), report.failures().collect::<Vec<_>>());
        for (part, class) in [(s.minus(), ModulusClass::Contracting), (s.zero(), ModulusClass::Unit), (s.plus(), ModulusClass::Expanding)] {
            if part.dim() == 0 {
                continue;
            }
            let ev = restriction(a.matrix(), part).complex_eigenvalues();
            let prod: f64 = ev.iter().map(|z| z.norm()).product();
            match class {
                ModulusClass::Contracting => assert!(ev.iter().all(|z| z.norm() < 1.0)),
                ModulusClass::Expanding => assert!(ev.iter().all(|z| z.norm() > 1.0)),
                ModulusClass::Unit => assert!((prod - 1.0).abs() < 1e-9),
            }
        }
        checked += 1;
    }
    assert!(ambiguous * 20 < checked, "too many ambiguous spectra: {ambiguous}");
}

#[test]
fn inverse_swaps_minus_and_plus() {
    let algebras = catalog::all();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..200 {
        let alg = &algebras[trial % algebras.len()];
        let a = gen::random_automorphism(alg, &mut rng);
        let (Ok(s), Ok(t)) = (spectral_splitting(&a), spectral_splitting(&a.inverse())) else { continue };
        assert!(s.minus().same_span(t.plus()));
        assert!(s.plus().same_span(t.minus()));
        assert!(s.zero().same_span(t.zero()));
    }
}

#[test]
fn g54_generated_automorphisms_have_block_shape() {
    let g = catalog::g5_4();
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let autos: Vec<_> = (0..100).map(|_| gen::random_automorphism(&g, &mut rng)).collect();
    for a in &autos {
        let r = g54::g54_shape_check(&g, a).unwrap();
        assert!(r.passed(), "{:?}", r.deviations);
        let m = a.matrix();
        assert!((m[(2, 2)] - (m[(0, 0)] * m[(1, 1)] - m[(1, 0)] * m[(0, 1)])).abs() < 1e-9 * m.amax().max(1.0).powi(2));
    }
    for pair in autos.chunks(2).cycle().take(200) {
        let (a, b) = (&pair[0], &pair[1]);
        let lhs = g54::rho_projection(&g, &a.compose(b)).unwrap();
        let rhs = g54::rho_projection(&g, a).unwrap() * g54::rho_projection(&g, b).unwrap();
        assert!((lhs - rhs).amax() < 1e-9 * rhs.amax().max(1.0));
    }
}

#[test]
fn derivation_bases_satisfy_the_law() {
    for alg in catalog::all() {
        let der = derivations(&alg);
        for d in &der.basis {
            assert!(nilcrys_core::automorphism::derivation_residual(&alg, d) < 1e-12);
        }
        assert!(is_solvable(&der.basis).is_ok(), "{:?}: Der not closed", alg.name());
    }
}

fn gl2() -> impl Strategy<Value = Matrix2<f64>> {
    prop::array::uniform4(-3.0f64..3.0).prop_filter_map("singular", |a| {
        let m = Matrix2::new(a[0], a[1], a[2], a[3]);
        (m.determinant().abs() > 0.1).then_some(m)
    })
}

proptest! {
    #[test]
    fn extend_is_a_homomorphism(m in gl2(), n in gl2()) {
        let g = catalog::g5_4();
        let lhs = g54::extend_gl2(&(m * n)).unwrap();
        let rhs = g54::extend_gl2(&m).unwrap().compose(&g54::extend_gl2(&n).unwrap());
        prop_assert!((lhs.matrix() - rhs.matrix()).amax() < 1e-9 * rhs.matrix().amax().max(1.0));
        prop_assert!(check_automorphism(lhs.matrix().clone(), &g).is_ok());
    }

    #[test]
    fn triangular_sets_are_solvable(seed in 0u64..1000, n in 2usize..5, lower in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mats = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if (lower && i >= j) || (!lower && i <= j) {
                    let mut e = DMatrix::zeros(n, n);
                    e[(i, j)] = 1.0;
                    mats.push(e);
                }
            }
        }
        prop_assert!(is_solvable(&mats).unwrap());
        // a generic full set contains sl_n
        let full: Vec<_> = (0..n * n).map(|_| gen::random_matrix(&mut rng, n, 1.0)).collect();
        prop_assert!(!is_solvable(&full).unwrap());
    }
}
