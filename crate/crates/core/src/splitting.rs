//! Splitting of the algebra into the generalized eigenspaces of an automorphism
//! with eigenvalue modulus below, at, and above 1.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};

use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg;
use crate::subspace::{self, Subspace};

/// `| |λ| − 1 |` at or below this counts as modulus 1.
pub const MODULUS_TOL: f64 = 1e-9;
/// Moduli this close to 1 (but outside [`MODULUS_TOL`]) are reported as ambiguous.
pub const AMBIGUITY_BAND: f64 = 1e-7;
/// Computed eigenvalues closer than this (relative) are treated as one perturbed cluster.
pub const CLUSTER_RADIUS: f64 = 3e-3;
/// Invariance and structure residuals are accepted below this (scaled).
pub const SPLITTING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusClass {
    Contracting,
    Unit,
    Expanding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex<f64>,
    /// Modulus of the cluster mean the eigenvalue was classified by.
    pub cluster_modulus: f64,
    pub class: ModulusClass,
}

/// `n = n⁻ ⊕ n⁰ ⊕ n⁺` for one automorphism.
#[derive(Debug, Clone)]
pub struct SpectralSplitting {
    minus: Subspace,
    zero: Subspace,
    plus: Subspace,
    eigenvalues: Vec<Eigenvalue>,
    coords: DMatrix<f64>,
}

fn classify(d: f64) -> ModulusClass {
    if d.abs() <= MODULUS_TOL {
        ModulusClass::Unit
    } else if d < 0.0 {
        ModulusClass::Contracting
    } else {
        ModulusClass::Expanding
    }
}

fn clusters(ev: &[Complex<f64>]) -> Vec<Vec<usize>> {
    let n = ev.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = ev[i].norm().max(ev[j].norm()).max(1.0);
            if (ev[i] - ev[j]).norm() <= CLUSTER_RADIUS * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = alloc::vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(alloc::vec![i]);
            }
        }
    }
    groups
}

/// Classifies every eigenvalue by the modulus of its cluster mean.
pub fn classify_spectrum(matrix: &DMatrix<f64>) -> Result<Vec<Eigenvalue>> {
    let ev: Vec<Complex<f64>> = matrix.clone().complex_eigenvalues().iter().cloned().collect();
    let mut out = alloc::vec![
        Eigenvalue { value: Complex::new(0.0, 0.0), cluster_modulus: 0.0, class: ModulusClass::Unit };
        ev.len()
    ];
    for group in clusters(&ev) {
        let mean = group.iter().map(|&i| ev[i]).sum::<Complex<f64>>() / group.len() as f64;
        let modulus = mean.norm();
        let d = modulus - 1.0;
        let class = classify(d);
        if class != ModulusClass::Unit {
            let straddles = group.iter().any(|&i| {
                let di = ev[i].norm() - 1.0;
                di.abs() <= AMBIGUITY_BAND || classify(di) != class
            });
            if d.abs() <= AMBIGUITY_BAND || straddles {
                return Err(Error::ModulusAmbiguous { re: mean.re, im: mean.im });
            }
        }
        for &i in &group {
            out[i] = Eigenvalue { value: ev[i], cluster_modulus: modulus, class };
        }
    }
    Ok(out)
}

fn generalized_eigenspace(a: &DMatrix<f64>, ev: &[Complex<f64>]) -> Subspace {
    let n = a.nrows();
    if ev.is_empty() {
        return Subspace::zero(n);
    }
    let ac = a.map(|x| Complex::new(x, 0.0));
    let mut q = DMatrix::<Complex<f64>>::identity(n, n);
    for &l in ev {
        let mut f = ac.clone();
        for i in 0..n {
            f[(i, i)] -= l;
        }
        let norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        q = (q * f).unscale(norm);
    }
    let real = q.map(|z| z.re);
    let (basis, _) = linalg::smallest_right_singular(&real, ev.len());
    Subspace::span(n, &basis.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
}

/// Computes the splitting of `alpha`; each part gets an echelon basis.
pub fn spectral_splitting(alpha: &Automorphism) -> Result<SpectralSplitting> {
    let a = alpha.matrix();
    let n = a.nrows();
    let eigenvalues = classify_spectrum(a)?;
    let pick = |c: ModulusClass| -> Vec<Complex<f64>> {
        eigenvalues.iter().filter(|e| e.class == c).map(|e| e.value).collect()
    };
    let parts: Vec<Subspace> = [ModulusClass::Contracting, ModulusClass::Unit, ModulusClass::Expanding]
        .iter()
        .map(|&c| generalized_eigenspace(a, &pick(c)).echelon())
        .collect();
    let scale = a.amax().max(1.0);
    let mut worst: f64 = 0.0;
    for (p, c) in parts.iter().zip([ModulusClass::Contracting, ModulusClass::Unit, ModulusClass::Expanding]) {
        if p.dim() != pick(c).len() {
            return Err(Error::NoConvergence { residual: f64::INFINITY });
        }
        worst = worst.max(p.invariance_residual(a));
    }
    if worst > SPLITTING_TOL * scale {
        return Err(Error::NoConvergence { residual: worst });
    }
    let refs: Vec<&Subspace> = parts.iter().collect();
    if !subspace::is_direct_sum(&refs, n) {
        return Err(Error::NoConvergence { residual: f64::INFINITY });
    }
    let all: Vec<DVector<f64>> = parts.iter().flat_map(|p| p.basis_vectors()).collect();
    let coords = linalg::columns(&all, n).try_inverse().ok_or(Error::Singular)?;
    let mut it = parts.into_iter();
    let (minus, zero, plus) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    Ok(SpectralSplitting { minus, zero, plus, eigenvalues, coords })
}

impl SpectralSplitting {
    pub fn minus(&self) -> &Subspace {
        &self.minus
    }

    pub fn zero(&self) -> &Subspace {
        &self.zero
    }

    pub fn plus(&self) -> &Subspace {
        &self.plus
    }

    /// `n⁻ ⊕ n⁰`.
    pub fn dminus(&self) -> Subspace {
        self.minus.sum(&self.zero)
    }

    /// `n⁺ ⊕ n⁰`.
    pub fn dplus(&self) -> Subspace {
        self.plus.sum(&self.zero)
    }

    /// `(dim n⁻, dim n⁰, dim n⁺)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.minus.dim(), self.zero.dim(), self.plus.dim())
    }

    pub fn eigenvalues(&self) -> &[Eigenvalue] {
        &self.eigenvalues
    }

    /// Components of `v` in `n⁻`, `n⁰`, `n⁺`.
    pub fn decompose(&self, v: &DVector<f64>) -> [DVector<f64>; 3] {
        let c = &self.coords * v;
        let (k, l, _) = self.dims();
        let part = |s: &Subspace, off: usize| s.basis() * c.rows(off, s.dim());
        [part(&self.minus, 0), part(&self.zero, k), part(&self.plus, k + l)]
    }
}

/// Matrix of `m` restricted to an `m`-invariant subspace, in the subspace's basis.
pub fn restriction(m: &DMatrix<f64>, s: &Subspace) -> DMatrix<f64> {
    let b = s.basis();
    let mut r = DMatrix::zeros(s.dim(), s.dim());
    for (j, col) in b.column_iter().enumerate() {
        let (x, _) = s.coordinates(&(m * col));
        r.set_column(j, &x);
    }
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureCheck {
    pub label: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StructureCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Subalgebra and ideal checks for the parts of a splitting.
pub fn verify_splitting_structure(alg: &LieAlgebra, s: &SpectralSplitting) -> Result<StructureReport> {
    if s.minus.ambient_dim() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), got: s.minus.ambient_dim() });
    }
    let c = alg.float_brackets().iter().map(|e| e.3.abs()).fold(1.0, f64::max);
    let tol = SPLITTING_TOL * c;
    let (dm, dp) = (s.dminus(), s.dplus());
    let rows: [(&str, f64); 7] = [
        ("n- subalgebra", alg.subalgebra_residual(&s.minus)),
        ("n0 subalgebra", alg.subalgebra_residual(&s.zero)),
        ("n+ subalgebra", alg.subalgebra_residual(&s.plus)),
        ("d- subalgebra", alg.subalgebra_residual(&dm)),
        ("d+ subalgebra", alg.subalgebra_residual(&dp)),
        ("n+ ideal in d+", alg.ideal_residual(&s.plus, &dp)),
        ("n- ideal in d-", alg.ideal_residual(&s.minus, &dm)),
    ];
    let checks = rows
        .iter()
        .map(|&(label, residual)| StructureCheck { label: String::from(label), residual, passed: residual < tol })
        .collect();
    Ok(StructureReport { checks })
}
