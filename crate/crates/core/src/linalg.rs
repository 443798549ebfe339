//! Small dense linear algebra: generic row reduction plus SVD-backed float helpers.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::scalar::Scalar;

/// Row-reduced echelon form of `rows` (each of length `ncols`).
///
/// Returns the nonzero reduced rows together with their pivot columns.
pub fn rref<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let mut best = None;
        let mut best_mag = 0.0;
        for (i, row) in m.iter().enumerate().skip(r) {
            if !row[c].is_negligible() && row[c].magnitude() > best_mag {
                best_mag = row[c].magnitude();
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..ncols {
                    let d = f.clone() * m[r][k].clone();
                    m[i][k] = m[i][k].clone() - d;
                }
                m[i][c] = T::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of the span of `vectors`, in reduced echelon form.
pub fn span_basis<T: Scalar>(vectors: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    rref(vectors, n).0
}

/// Basis of `{x : rows · x = 0}`.
pub fn null_space<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn to_dvector<T: Scalar>(v: &[T]) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().map(Scalar::to_f64))
}

/// Columns `vectors` stacked into an `n × k` matrix.
pub fn columns(vectors: &[DVector<f64>], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

fn padded_svd(a: &DMatrix<f64>) -> nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
    let (r, c) = a.shape();
    let m = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(a);
        p
    } else {
        a.clone()
    };
    m.svd(true, true)
}

fn rank_cutoff(sv: &DVector<f64>, tol: f64) -> f64 {
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    tol * smax.max(1.0)
}

/// Numerical rank with relative tolerance `tol`.
pub fn rank(a: &DMatrix<f64>, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let svd = padded_svd(a);
    let cut = rank_cutoff(&svd.singular_values, tol);
    svd.singular_values.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn column_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.nrows();
    if a.ncols() == 0 || n == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let cut = rank_cutoff(&svd.singular_values, tol);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cut)
        .collect();
    let cols: Vec<DVector<f64>> = keep.iter().map(|&i| u.column(i).into_owned()).collect();
    columns(&cols, n)
}

/// Right singular vectors belonging to the `k` smallest singular values of `a`.
pub fn smallest_right_singular(a: &DMatrix<f64>, k: usize) -> (DMatrix<f64>, Vec<f64>) {
    let n = a.ncols();
    let svd = padded_svd(a);
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let picked: Vec<usize> = order.into_iter().take(k).collect();
    let cols: Vec<DVector<f64>> = picked
        .iter()
        .map(|&i| vt.row(i).transpose().into_owned())
        .collect();
    let sv = picked.iter().map(|&i| svd.singular_values[i]).collect();
    (columns(&cols, n), sv)
}

/// Orthonormal basis of the numerical null space of `a`.
pub fn null_space_f64(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let r = rank(a, tol);
    smallest_right_singular(a, n - r).0
}

/// Least-squares solution of `a x = b` and the residual norm.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    if a.ncols() == 0 {
        return (DVector::zeros(0), b.norm());
    }
    let svd = a.clone().svd(true, true);
    let cut = rank_cutoff(&svd.singular_values, 1e-13);
    let x = svd.solve(b, cut).expect("u and v_t computed");
    let res = (a * &x - b).norm();
    (x, res)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// Nilpotent input gets an exact finite sum.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut p = a.clone();
    for _ in 0..n {
        p = &p * a;
    }
    let scale = a.amax().max(1e-300);
    if p.amax() <= 1e-15 * scale.powi(n as i32 + 1) {
        let mut sum = DMatrix::identity(n, n);
        let mut term = DMatrix::identity(n, n);
        for k in 1..=n {
            term = &term * a / k as f64;
            sum += &term;
        }
        return sum;
    }
    let norm = a.iter().map(|x| x.abs()).sum::<f64>();
    let mut squarings = 0;
    let mut s = 1.0;
    while norm / s > 0.5 {
        s *= 2.0;
        squarings += 1;
    }
    let b = a / s;
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &b / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn rational_null_space_is_exact() {
        let rows: Vec<Vec<Rational>> = vec![
            vec![ratio(1, 1), ratio(2, 1), ratio(3, 1)],
            vec![ratio(2, 1), ratio(4, 1), ratio(6, 1)],
        ];
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = v
                .iter()
                .zip(&rows[0])
                .fold(ratio(0, 1), |acc, (a, b)| acc + a.clone() * b.clone());
            assert_eq!(dot, ratio(0, 1));
        }
    }

    #[test]
    fn float_null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space_f64(&a, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-14);
    }

    #[test]
    fn expm_diagonal_and_nilpotent() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0, -2.0]));
        let e = expm(&d);
        assert!((e[(0, 0)] - core::f64::consts::E).abs() < 1e-13);
        assert!((e[(2, 2)] - (-2.0f64).exp()).abs() < 1e-14);
        let n = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 0.0, 0.0]);
        let e = expm(&n);
        assert_eq!(e, DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 0.0, 1.0]));
    }
}
