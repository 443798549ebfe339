use std::path::Path;

use nilcrys::algebra_file::{read_algebra_file, AlgebraFile};
use nilcrys::certificate::CertificateJson;
use nilcrys::numbers::{matrix_from_json, Scalar};
use nilcrys_core::catalog;
use nilcrys_core::obstruction::{check_invariants, g54_case_study, run_demonstrator, DemoOptions, DEFAULT_H_TRANSLATION};
use nilcrys_core::NilpotentGroup;
use nalgebra::{DVector, Matrix2};
use proptest::prelude::*;

#[test]
fn shipped_catalog_matches_builtin_table() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog");
    let mut seen = 0;
    for entry in catalog::ENTRIES {
        let file = read_algebra_file(&dir.join(format!("{}.json", entry.name))).unwrap();
        assert_eq!(file, AlgebraFile::from_entry(entry));
        let ours = file.build().unwrap();
        let theirs = catalog::build(entry).unwrap();
        assert_eq!(ours.exact_brackets(), theirs.exact_brackets(), "{}", entry.name);
        assert_eq!(ours.nilpotency_class().unwrap(), entry.class);
        seen += 1;
    }
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), seen);
}

#[test]
fn certificate_round_trip_is_exact() {
    let grp = NilpotentGroup::new(catalog::g5_4()).unwrap();
    let ht = DVector::from_row_slice(&DEFAULT_H_TRANSLATION);
    let (g1, g2) = g54_case_study(&grp, 2.0, &Matrix2::new(2.0, 1.0, 1.0, 1.0), &ht).unwrap();
    let cert = run_demonstrator(&grp, &g1, &g2, 30, DemoOptions::default()).unwrap();
    let cj = CertificateJson::new(&cert, 1, serde_json::Value::Null);
    let back = CertificateJson::parse(&cj.to_string_pretty()).unwrap();
    assert_eq!(back, cj);
    assert_eq!(back.data(), cert.data());
    assert_eq!(check_invariants(&back.data()), cert.check_invariants());
}

#[test]
fn certificate_format_is_checked() {
    let text = r#"{"format": "other", "pair_meta": null, "lambda1": 1, "lambda2": 1, "r0": 0, "r0_2": 0,
                   "M1": 0, "M2": 0, "records": [], "decay_fit": null, "inverted_g2": false}"#;
    assert!(CertificateJson::parse(text).is_err());
}

proptest! {
    #[test]
    fn rational_entries_parse(n in -1000i64..1000, d in 1i64..1000, x in -1e6f64..1e6) {
        let v = serde_json::json!([[[n, d], x]]);
        let m = matrix_from_json(&v).unwrap();
        prop_assert_eq!(m[(0, 0)], n as f64 / d as f64);
        prop_assert_eq!(m[(0, 1)], x);
        prop_assert_eq!(Scalar::Ratio(n, d).value().unwrap(), n as f64 / d as f64);
    }

    #[test]
    fn ragged_matrices_are_rejected(a in 1usize..4, b in 1usize..4) {
        prop_assume!(a != b);
        let v = serde_json::json!([vec![1.0; a], vec![1.0; b]]);
        prop_assert!(matrix_from_json(&v).is_err());
    }
}
