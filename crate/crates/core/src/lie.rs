//! Lie algebras given by structure constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Rational, Scalar};
use crate::subspace::{Subspace, MEMBERSHIP_TOL};

/// Tolerance for the Jacobi identity on float structure constants.
pub const JACOBI_FLOAT_TOL: f64 = 1e-12;

type Entry<T> = (usize, usize, usize, T);

/// A finite-dimensional real Lie algebra in a fixed basis `e_0 … e_{n-1}`.
///
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`. Only entries with `i < j` are stored;
/// antisymmetry is implicit. Algebras built from rationals keep an exact copy
/// of their constants and support the exact code paths.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    name: Option<String>,
    float: Vec<Entry<f64>>,
    exact: Option<Vec<Entry<Rational>>>,
    series: core::result::Result<Vec<Subspace>, usize>,
}

/// Scalars that can evaluate brackets of a [`LieAlgebra`].
pub trait AlgebraScalar: Scalar {
    #[doc(hidden)]
    fn constants(alg: &LieAlgebra) -> Option<&[Entry<Self>]>;
}

impl AlgebraScalar for f64 {
    fn constants(alg: &LieAlgebra) -> Option<&[Entry<f64>]> {
        Some(&alg.float)
    }
}

impl AlgebraScalar for Rational {
    fn constants(alg: &LieAlgebra) -> Option<&[Entry<Rational>]> {
        alg.exact.as_deref()
    }
}

/// One basis triple on which the Jacobi identity fails.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct JacobiReport {
    pub violations: Vec<JacobiViolation>,
}

impl JacobiReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The quotient `alg / center` with its projection and a linear section.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: LieAlgebra,
    /// `(n - z) × n` matrix of the natural projection.
    pub projection: DMatrix<f64>,
    /// `n × (n - z)` matrix of a linear section; `projection · section = I`.
    pub section: DMatrix<f64>,
}

fn normalize<T: Scalar>(dim: usize, entries: Vec<Entry<T>>) -> Result<Vec<Entry<T>>> {
    let mut map: BTreeMap<(usize, usize, usize), T> = BTreeMap::new();
    for (i, j, k, c) in entries {
        if i >= dim || j >= dim || k >= dim {
            return Err(Error::InvalidStructure(format!("index ({i}, {j}, {k}) out of range for dimension {dim}")));
        }
        if i == j {
            if c.is_zero() {
                continue;
            }
            return Err(Error::InvalidStructure(format!("[e{i}, e{i}] must vanish")));
        }
        let (key, val) = if i < j { ((i, j, k), c) } else { ((j, i, k), -c) };
        if let Some(prev) = map.get(&key) {
            if *prev != val {
                return Err(Error::InvalidStructure(format!(
                    "conflicting values for [e{}, e{}] along e{}",
                    key.0, key.1, key.2
                )));
            }
        }
        map.insert(key, val);
    }
    Ok(map
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((i, j, k), v)| (i, j, k, v))
        .collect())
}

fn bracket_with<T: Scalar>(entries: &[Entry<T>], x: &[T], y: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); x.len()];
    for (i, j, k, c) in entries {
        let w = x[*i].clone() * y[*j].clone() - x[*j].clone() * y[*i].clone();
        if !w.is_zero() {
            out[*k] = out[*k].clone() + w * c.clone();
        }
    }
    out
}

fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

impl LieAlgebra {
    /// Algebra with exact rational structure constants, `(i, j, k, c)` meaning
    /// `[e_i, e_j] ∋ c·e_k` (0-based).
    pub fn from_exact(dim: usize, name: Option<&str>, brackets: Vec<Entry<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidStructure("dimension must be positive".into()));
        }
        let exact = normalize(dim, brackets)?;
        let float = exact.iter().map(|(i, j, k, c)| (*i, *j, *k, Scalar::to_f64(c))).collect();
        Ok(Self::assemble(dim, name.map(String::from), float, Some(exact)))
    }

    /// Algebra with float structure constants in the same `(i, j, k, c)` form.
    pub fn from_float(dim: usize, name: Option<&str>, brackets: Vec<Entry<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidStructure("dimension must be positive".into()));
        }
        let float = normalize(dim, brackets)?;
        Ok(Self::assemble(dim, name.map(String::from), float, None))
    }

    /// Algebra from a dense tensor `c[(i·n + j)·n + k]`, checked for antisymmetry.
    pub fn from_tensor(dim: usize, name: Option<&str>, tensor: &[f64]) -> Result<Self> {
        if tensor.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, got: tensor.len() });
        }
        let at = |i: usize, j: usize, k: usize| tensor[(i * dim + j) * dim + k];
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if (at(i, j, k) + at(j, i, k)).abs() > JACOBI_FLOAT_TOL {
                        return Err(Error::InvalidStructure(format!("c[{i}][{j}][{k}] is not antisymmetric")));
                    }
                    if i < j && at(i, j, k) != 0.0 {
                        entries.push((i, j, k, at(i, j, k)));
                    }
                }
            }
        }
        Self::from_float(dim, name, entries)
    }

    /// Abelian algebra of dimension `dim`.
    pub fn abelian(dim: usize) -> Self {
        Self::assemble(dim, Some(format!("abelian_{dim}")), Vec::new(), Some(Vec::new()))
    }

    fn assemble(dim: usize, name: Option<String>, float: Vec<Entry<f64>>, exact: Option<Vec<Entry<Rational>>>) -> Self {
        let mut alg = LieAlgebra { dim, name, float, exact, series: Err(dim) };
        alg.series = match alg.exact {
            Some(ref e) => lcs_generic(dim, e),
            None => lcs_generic(dim, &alg.float),
        };
        alg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Nonzero constants with `i < j`, as floats.
    pub fn float_brackets(&self) -> &[Entry<f64>] {
        &self.float
    }

    /// Nonzero constants with `i < j`, exactly, when available.
    pub fn exact_brackets(&self) -> Option<&[Entry<Rational>]> {
        self.exact.as_deref()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let (a, b, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        self.float
            .iter()
            .find(|(p, q, r, _)| *p == a && *q == b && *r == k)
            .map_or(0.0, |e| s * e.3)
    }

    /// Bracket in any supported scalar type.
    pub fn bracket_in<T: AlgebraScalar>(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        let entries = T::constants(self).ok_or(Error::NotExact)?;
        Ok(bracket_with(entries, x, y))
    }

    pub fn try_bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        self.bracket_in(x.as_slice(), y.as_slice()).map(DVector::from_vec)
    }

    /// `[x, y]`. Panics on a dimension mismatch; see [`Self::try_bracket`].
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.dim, "bracket: dimension mismatch");
        assert_eq!(y.len(), self.dim, "bracket: dimension mismatch");
        DVector::from_vec(bracket_with(&self.float, x.as_slice(), y.as_slice()))
    }

    /// Matrix of `ad(x) = [x, ·]`.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let ej = DVector::from_vec(unit::<f64>(self.dim, j));
            m.set_column(j, &self.bracket(x, &ej));
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        DVector::from_vec(unit::<f64>(self.dim, i))
    }

    /// Basis triples violating the Jacobi identity.
    ///
    /// Exact algebras are checked exactly; float ones against [`JACOBI_FLOAT_TOL`].
    pub fn verify_jacobi(&self) -> JacobiReport {
        match self.exact {
            Some(ref e) => jacobi_generic(self.dim, e, |r: &Rational| !r.is_zero()),
            None => jacobi_generic(self.dim, &self.float, |r: &f64| r.abs() > JACOBI_FLOAT_TOL),
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.series.is_ok()
    }

    /// Lower central series `γ_1 = 𝔫 ⊋ γ_2 ⊋ … ⊋ γ_{c+1} = 0`, including the final zero term.
    pub fn lower_central_series(&self) -> Result<&[Subspace]> {
        match self.series {
            Ok(ref s) => Ok(s),
            Err(stalled_at) => Err(Error::NotNilpotent { stalled_at }),
        }
    }

    pub fn nilpotency_class(&self) -> Result<usize> {
        self.lower_central_series().map(|s| s.len() - 1)
    }

    /// Common kernel of all `ad(e_i)`.
    pub fn center(&self) -> Subspace {
        match self.exact {
            Some(ref e) => to_subspace(self.dim, &center_generic(self.dim, e)),
            None => to_subspace(self.dim, &center_generic(self.dim, &self.float)),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.float.is_empty()
    }

    /// Quotient by the center, with induced brackets on the complement of the
    /// pivot coordinates of the center's echelon basis.
    pub fn quotient_by_center(&self) -> Result<Quotient> {
        match self.exact {
            Some(ref e) => {
                let (alg, p, s) = quotient_generic(self.dim, e)?;
                let alg = LieAlgebra::from_exact(alg.0, None, alg.1)?;
                Ok(Quotient { algebra: alg, projection: p, section: s })
            }
            None => {
                let (alg, p, s) = quotient_generic(self.dim, &self.float)?;
                let alg = LieAlgebra::from_float(alg.0, None, alg.1)?;
                Ok(Quotient { algebra: alg, projection: p, section: s })
            }
        }
    }

    /// Largest residual of `[u, v]` against `s` over orthonormal basis pairs of `s`.
    pub fn subalgebra_residual(&self, s: &Subspace) -> f64 {
        self.ideal_residual(s, s)
    }

    /// Largest residual of `[w, u]` against `s`, `w ∈ within`, `u ∈ s`.
    pub fn ideal_residual(&self, s: &Subspace, within: &Subspace) -> f64 {
        let mut worst: f64 = 0.0;
        for w in within.orthonormal().column_iter() {
            for u in s.orthonormal().column_iter() {
                let b = self.bracket(&w.into_owned(), &u.into_owned());
                worst = worst.max(s.residual(&b));
            }
        }
        worst
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.subalgebra_residual(s) < MEMBERSHIP_TOL
    }

    pub fn is_ideal(&self, s: &Subspace, within: &Subspace) -> bool {
        self.ideal_residual(s, within) < MEMBERSHIP_TOL
    }
}

fn jacobi_generic<T: Scalar>(n: usize, e: &[Entry<T>], bad: impl Fn(&T) -> bool) -> JacobiReport {
    let mut violations = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (x, y, z) = (unit::<T>(n, i), unit::<T>(n, j), unit::<T>(n, k));
                let a = bracket_with(e, &x, &bracket_with(e, &y, &z));
                let b = bracket_with(e, &y, &bracket_with(e, &z, &x));
                let c = bracket_with(e, &z, &bracket_with(e, &x, &y));
                let sum: Vec<T> = a
                    .into_iter()
                    .zip(b)
                    .zip(c)
                    .map(|((a, b), c)| a + b + c)
                    .collect();
                if sum.iter().any(&bad) {
                    let residual = sum.iter().map(|v| v.to_f64() * v.to_f64()).sum::<f64>();
                    violations.push(JacobiViolation { triple: (i, j, k), residual: num_traits::Float::sqrt(residual) });
                }
            }
        }
    }
    JacobiReport { violations }
}

fn to_subspace<T: Scalar>(n: usize, basis: &[Vec<T>]) -> Subspace {
    let vs: Vec<DVector<f64>> = basis.iter().map(|v| linalg::to_dvector(v)).collect();
    Subspace::from_vectors(n, &vs).unwrap_or_else(|_| Subspace::span(n, &vs))
}

fn lcs_generic<T: Scalar>(n: usize, e: &[Entry<T>]) -> core::result::Result<Vec<Subspace>, usize> {
    let mut current: Vec<Vec<T>> = (0..n).map(|i| unit(n, i)).collect();
    let mut out = vec![to_subspace(n, &current)];
    while !current.is_empty() {
        let mut products = Vec::new();
        for i in 0..n {
            let ei = unit::<T>(n, i);
            for v in &current {
                products.push(bracket_with(e, &ei, v));
            }
        }
        let next = linalg::span_basis(&products, n);
        if next.len() == current.len() {
            return Err(next.len());
        }
        out.push(to_subspace(n, &next));
        current = next;
    }
    Ok(out)
}

fn center_generic<T: Scalar>(n: usize, e: &[Entry<T>]) -> Vec<Vec<T>> {
    // z is central iff Σ_j c[i][j][k] z_j = 0 for all i, k.
    let mut rows = Vec::new();
    for i in 0..n {
        let ei = unit::<T>(n, i);
        let cols: Vec<Vec<T>> = (0..n).map(|j| bracket_with(e, &ei, &unit::<T>(n, j))).collect();
        for k in 0..n {
            rows.push(cols.iter().map(|c| c[k].clone()).collect());
        }
    }
    linalg::null_space(&rows, n)
}

#[allow(clippy::type_complexity)]
fn quotient_generic<T: Scalar>(n: usize, e: &[Entry<T>]) -> Result<((usize, Vec<Entry<T>>), DMatrix<f64>, DMatrix<f64>)> {
    let (z, pivots) = linalg::rref(&center_generic(n, e), n);
    if z.len() == n {
        return Err(Error::AbelianInput);
    }
    let keep: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let m = keep.len();
    let project = |x: &[T]| -> Vec<T> {
        let mut y = x.to_vec();
        for (row, &p) in z.iter().zip(&pivots) {
            let f = x[p].clone();
            if !f.is_zero() {
                for (yk, rk) in y.iter_mut().zip(row) {
                    *yk = yk.clone() - f.clone() * rk.clone();
                }
            }
        }
        keep.iter().map(|&k| y[k].clone()).collect()
    };
    let mut entries = Vec::new();
    for a in 0..m {
        for b in (a + 1)..m {
            let br = bracket_with(e, &unit::<T>(n, keep[a]), &unit::<T>(n, keep[b]));
            for (k, v) in project(&br).into_iter().enumerate() {
                if !v.is_zero() {
                    entries.push((a, b, k, v));
                }
            }
        }
    }
    let mut p = DMatrix::zeros(m, n);
    for j in 0..n {
        let col = project(&unit::<T>(n, j));
        for (i, v) in col.iter().enumerate() {
            p[(i, j)] = v.to_f64();
        }
    }
    let mut s = DMatrix::zeros(n, m);
    for (a, &k) in keep.iter().enumerate() {
        s[(k, a)] = 1.0;
    }
    Ok(((m, entries), p, s))
}
