//! The subcommands, as functions from parsed arguments to a report.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use nilcrys_core::automorphism::{check_automorphism, derivations, exp_derivation, is_solvable};
use nilcrys_core::dynamics::{omega_test, positive_pair, transversality, OmegaClass, PairVerdict, Pseudohyperbolic};
use nilcrys_core::obstruction::{g54_case_study, run_demonstrator, CheckStatus, DemoOptions, InvariantReport};
use nilcrys_core::splitting::{spectral_splitting, verify_splitting_structure, ModulusClass};
use nilcrys_core::{catalog, Error, LieAlgebra, NilpotentGroup, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra_file::{load, load_unchecked};
use crate::certificate::CertificateJson;
use crate::error::{CliError, CliResult};
use crate::numbers::{matrix2_from_json, matrix_from_json, motion_from_json, read_json_arg, vector_from_json, vector_to_json};

/// What a subcommand produced; `passed` decides the exit code.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

fn fmt_vec(v: &DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.6}", if x.abs() < 5e-13 { 0.0 } else { *x })).collect();
    format!("({})", parts.join(", "))
}

fn basis_json(s: &Subspace) -> Value {
    Value::from(s.echelon().basis_vectors().iter().map(vector_to_json).collect::<Vec<_>>())
}

fn basis_text(label: &str, s: &Subspace) -> String {
    let vs: Vec<String> = s.echelon().basis_vectors().iter().map(fmt_vec).collect();
    format!("{label} (dim {}): {}\n", s.dim(), if vs.is_empty() { "0".into() } else { vs.join(" ") })
}

fn scale_of(alg: &LieAlgebra) -> f64 {
    alg.float_brackets().iter().map(|e| e.3.abs()).fold(1.0, f64::max)
}

pub fn algebra(arg: &str) -> CliResult<Report> {
    let (_, alg) = load_unchecked(arg)?;
    let name = alg.name().unwrap_or(arg).to_string();
    let jac = alg.verify_jacobi();
    if !jac.is_empty() {
        let triples: Vec<[usize; 3]> = jac.violations.iter().map(|v| [v.triple.0 + 1, v.triple.1 + 1, v.triple.2 + 1]).collect();
        let mut text = format!("{name}: Jacobi identity fails on {} basis triples\n", triples.len());
        for (t, v) in triples.iter().zip(&jac.violations) {
            writeln!(text, "  (x{}, x{}, x{})  residual {:e}", t[0], t[1], t[2], v.residual).unwrap();
        }
        let json = json!({"name": name, "dim": alg.dim(), "jacobi_violations": triples});
        return Ok(Report { text, json, passed: false });
    }
    let series = match alg.lower_central_series() {
        Ok(s) => s.iter().map(Subspace::dim).collect::<Vec<_>>(),
        Err(Error::NotNilpotent { stalled_at }) => {
            let text = format!("{name}: not nilpotent (lower central series stalls at dimension {stalled_at})\n");
            let json = json!({"name": name, "dim": alg.dim(), "nilpotent": false, "stalled_at": stalled_at});
            return Ok(Report { text, json, passed: false });
        }
        Err(e) => return Err(e.into()),
    };
    let class = alg.nilpotency_class()?;
    let center = alg.center().dim();
    let text = format!(
        "algebra      {name}\ndim          {}\nclass        {class}\ncenter dim   {center}\nseries dims  {series:?}\nexact        {}\n",
        alg.dim(),
        alg.is_exact()
    );
    let json = json!({
        "name": name, "dim": alg.dim(), "class": class, "center_dim": center,
        "series_dims": series, "exact": alg.is_exact(), "nilpotent": true,
    });
    Ok(Report { text, json, passed: true })
}

/// `exp` of a random derivation with coefficients in `[-0.3, 0.3]`.
pub fn random_automorphism(alg: &LieAlgebra, seed: u64) -> CliResult<DMatrix<f64>> {
    let der = derivations(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..der.dim()).map(|_| rng.gen_range(-0.3..0.3)).collect();
    Ok(exp_derivation(alg, &der.combination(&coeffs))?.matrix().clone())
}

pub fn split(alg_arg: &str, matrix: Option<&str>, seed: u64, tol: f64) -> CliResult<Report> {
    let alg = load(alg_arg)?;
    let m = match matrix {
        Some(arg) => matrix_from_json(&read_json_arg(arg)?)?,
        None => random_automorphism(&alg, seed)?,
    };
    if m.shape() != (alg.dim(), alg.dim()) {
        return Err(CliError::Input(format!("matrix is {}x{}, algebra has dimension {}", m.nrows(), m.ncols(), alg.dim())));
    }
    let auto = check_automorphism(m, &alg)?;
    let s = spectral_splitting(&auto)?;
    let report = verify_splitting_structure(&alg, &s)?;
    let limit = tol * scale_of(&alg);
    let passed = report.checks.iter().all(|c| c.residual <= limit);

    let mut text = String::new();
    text += "eigenvalues:\n";
    for e in s.eigenvalues() {
        let class = match e.class {
            ModulusClass::Contracting => "minus",
            ModulusClass::Unit => "zero",
            ModulusClass::Expanding => "plus",
        };
        writeln!(text, "  {:>12.6} {:+.6}i  |.| = {:.6}  {class}", e.value.re, e.value.im, e.value.norm()).unwrap();
    }
    text += &basis_text("minus", s.minus());
    text += &basis_text("zero ", s.zero());
    text += &basis_text("plus ", s.plus());
    text += "structure checks:\n";
    for c in &report.checks {
        let ok = if c.residual <= limit { "pass" } else { "FAIL" };
        writeln!(text, "  {ok}  {:<44} {:.2e}", c.label, c.residual).unwrap();
    }
    let json = json!({
        "eigenvalues": s.eigenvalues().iter().map(|e| json!({"re": e.value.re, "im": e.value.im, "modulus": e.value.norm()})).collect::<Vec<_>>(),
        "minus": basis_json(s.minus()),
        "zero": basis_json(s.zero()),
        "plus": basis_json(s.plus()),
        "checks": report.checks.iter().map(|c| json!({"label": c.label, "residual": c.residual, "passed": c.residual <= limit})).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok(Report { text, json, passed })
}

fn group_for(alg_arg: &str) -> CliResult<NilpotentGroup> {
    Ok(NilpotentGroup::new(load(alg_arg)?)?)
}

fn class_name(c: OmegaClass) -> &'static str {
    match c {
        OmegaClass::NotOmega => "not in Omega",
        OmegaClass::Omega => "Omega (has a fixed point)",
        OmegaClass::Omega0 => "Omega0",
    }
}

pub fn line(alg_arg: &str, motion: &str, tol: f64) -> CliResult<Report> {
    let grp = group_for(alg_arg)?;
    let g = motion_from_json(&read_json_arg(motion)?, grp.algebra())?;
    let class = omega_test(&grp, &g)?;
    if class == OmegaClass::NotOmega {
        let text = "motion is not pseudohyperbolic (not in Omega)\n".to_string();
        return Ok(Report { text, json: json!({"class": "NotOmega", "passed": false}), passed: false });
    }
    let ph = Pseudohyperbolic::new(&grp, &g)?;
    let ts: Vec<f64> = (0..20).map(|i| -2.0 + 4.0 * i as f64 / 19.0).collect();
    let residual = ph.line.translation_residual(&grp, &g, &ts);
    let passed = residual <= tol;
    let l = &ph.line;
    let text = format!(
        "class        {}\nbase         {}\ndirection    {}\nT            {}\nresidual     {residual:.2e} ({})\n",
        class_name(class),
        fmt_vec(l.base.log()),
        fmt_vec(&l.direction),
        fmt_vec(&l.t),
        if passed { "pass" } else { "FAIL" }
    );
    let json = json!({
        "class": format!("{class:?}"),
        "base": vector_to_json(l.base.log()),
        "direction": vector_to_json(&l.direction),
        "T": vector_to_json(&l.t),
        "translation_residual": residual,
        "passed": passed,
    });
    Ok(Report { text, json, passed })
}

pub fn pair(alg_arg: &str, first: &str, second: &str) -> CliResult<Report> {
    let grp = group_for(alg_arg)?;
    let g1 = motion_from_json(&read_json_arg(first)?, grp.algebra())?;
    let g2 = motion_from_json(&read_json_arg(second)?, grp.algebra())?;
    let pg = transversality(&grp, &g1, &g2)?;
    let verdict = positive_pair(&pg);
    let passed = verdict != PairVerdict::Failure;
    let text = format!(
        "transversal  yes\nV            {}\nlambda1(V)   {:.6}\nlambda2(V)   {:.6}\nverdict      {verdict:?}\n",
        fmt_vec(&pg.v),
        pg.lambdas.0,
        pg.lambdas.1
    );
    let json = json!({
        "transversal": true,
        "v": vector_to_json(&pg.v),
        "lambdas": [pg.lambdas.0, pg.lambdas.1],
        "verdict": format!("{verdict:?}"),
    });
    Ok(Report { text, json, passed })
}

#[derive(Debug, Clone)]
pub struct DemoArgs {
    pub lambda: f64,
    pub m_h: String,
    pub i_max: usize,
    pub h_translation: String,
    pub max_index: i64,
}

/// Column header of the demo table.
pub const TABLE_HEADER: &str = "    i        s        t            d1            d2";

pub fn table(c: &CertificateJson) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in &c.records {
        writeln!(out, "{:>5} {:>8} {:>8} {:>13.6e} {:>13.6e}", r.i, r.s, r.t, r.d1, r.d2).unwrap();
    }
    out
}

pub fn invariant_text(report: &InvariantReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        match &c.status {
            CheckStatus::Pass => writeln!(out, "  pass  {}", c.name),
            CheckStatus::Fail(why) => writeln!(out, "  FAIL  {}: {why}", c.name),
            CheckStatus::Skipped(why) => writeln!(out, "  warn  {}: {why}", c.name),
        }
        .unwrap();
    }
    out
}

fn invariant_json(report: &InvariantReport) -> Value {
    Value::from(
        report
            .checks
            .iter()
            .map(|c| {
                let (status, detail) = match &c.status {
                    CheckStatus::Pass => ("pass", String::new()),
                    CheckStatus::Fail(w) => ("fail", w.clone()),
                    CheckStatus::Skipped(w) => ("warning", w.clone()),
                };
                json!({"name": c.name, "status": status, "detail": detail})
            })
            .collect::<Vec<_>>(),
    )
}

fn certificate_summary(c: &CertificateJson, report: &InvariantReport) -> String {
    let mut text = table(c);
    writeln!(text).unwrap();
    writeln!(text, "inverted g2  {}", c.inverted_g2).unwrap();
    writeln!(text, "lambda1      {:.6}", c.lambda1).unwrap();
    writeln!(text, "r0           {:.6}", c.r0).unwrap();
    writeln!(text, "M1, M2       {:.6e}, {:.6e}", c.m1, c.m2).unwrap();
    match &c.decay_fit {
        Some(f) => writeln!(text, "decay fit    b_hat = {:.6}, c_hat = {:.6e}", f.b_hat, f.c_hat).unwrap(),
        None => writeln!(text, "decay fit    none").unwrap(),
    }
    text += "invariants:\n";
    text += &invariant_text(report);
    text
}

/// Runs the packaged case study and writes the certificate to `out`.
pub fn demo(args: &DemoArgs, out: &Path) -> CliResult<Report> {
    if args.i_max == 0 {
        return Err(CliError::Input("i_max must be at least 1".into()));
    }
    let grp = NilpotentGroup::new(catalog::g5_4())?;
    let m_h = matrix2_from_json(&read_json_arg(&args.m_h)?)?;
    let h_trans = vector_from_json(&read_json_arg(&args.h_translation)?)?;
    if h_trans.len() != 5 {
        return Err(CliError::Input("h translation must have 5 entries".into()));
    }
    let (g1, g2) = g54_case_study(&grp, args.lambda, &m_h, &h_trans)?;
    let cert = run_demonstrator(&grp, &g1, &g2, args.i_max, DemoOptions { max_index: args.max_index })?;
    let p1 = Pseudohyperbolic::new(&grp, &cert.g1)?;
    let p2 = Pseudohyperbolic::new(&grp, &cert.g2)?;
    let intersection_dim = p1.splitting.dplus().intersection(&p2.splitting.dplus()).dim();
    let inputs = json!({
        "lambda": args.lambda,
        "m_h": read_json_arg(&args.m_h)?,
        "h_translation": vector_to_json(&h_trans),
        "i_max": args.i_max,
    });
    let cj = CertificateJson::new(&cert, intersection_dim, inputs);
    cj.write(out)?;
    let report = cert.check_invariants();
    let passed = report.passed();
    let mut text = format!("certificate  {}\n", out.display());
    text += &certificate_summary(&cj, &report);
    let json = json!({"certificate": out.display().to_string(), "invariants": invariant_json(&report), "passed": passed});
    Ok(Report { text, json, passed })
}

/// Re-checks a certificate file from its numbers.
pub fn verify(path: &Path) -> CliResult<Report> {
    let c = CertificateJson::read(path)?;
    let report = nilcrys_core::obstruction::check_invariants(&c.data());
    let passed = report.passed();
    let text = certificate_summary(&c, &report);
    Ok(Report { text, json: json!({"invariants": invariant_json(&report), "passed": passed}), passed })
}

/// One row of the dimension-five report.
#[derive(Debug, Clone, PartialEq)]
pub struct Dim5Row {
    pub name: &'static str,
    pub dim: usize,
    pub class: usize,
    pub der_dim: usize,
    pub der_solvable: bool,
    pub route: &'static str,
}

pub fn dim5_rows() -> CliResult<Vec<Dim5Row>> {
    let mut rows = Vec::new();
    for e in catalog::ENTRIES.iter().filter(|e| e.dim <= 5) {
        let alg = catalog::build(e)?;
        let class = alg.nilpotency_class()?;
        let der = derivations(&alg);
        let der_solvable = is_solvable(&der.basis)?;
        let route = if class <= 2 {
            "class <= 2"
        } else if der_solvable {
            "Der solvable"
        } else {
            "case study"
        };
        rows.push(Dim5Row { name: e.name, dim: e.dim, class, der_dim: der.dim(), der_solvable, route });
    }
    Ok(rows)
}

pub fn dim5() -> CliResult<Report> {
    let rows = dim5_rows()?;
    let mut text = format!("{:<10} {:>3} {:>5} {:>7} {:>11} {:>14}  {}\n", "algebra", "dim", "class", "dim Der", "class <= 2", "Der solvable", "route");
    for r in &rows {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            text,
            "{:<10} {:>3} {:>5} {:>7} {:>11} {:>14}  {}",
            r.name,
            r.dim,
            r.class,
            r.der_dim,
            yn(r.class <= 2),
            yn(r.der_solvable),
            r.route
        )
        .unwrap();
    }
    let json = Value::from(
        rows.iter()
            .map(|r| {
                json!({"name": r.name, "dim": r.dim, "class": r.class, "der_dim": r.der_dim,
                       "class_le_2": r.class <= 2, "der_solvable": r.der_solvable, "route": r.route})
            })
            .collect::<Vec<_>>(),
    );
    Ok(Report { text, json, passed: true })
}
