//! Matrix-exponential oracle for the group law.
//!
//! Each algebra is realized by nilpotent matrices; the product of
//! `exp(X) exp(Y)` is computed by finite power series and read back through a
//! least-squares fit onto the images of the basis. Nothing here touches the
//! BCH implementation.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

pub struct Representation {
    pub images: Vec<DMatrix<f64>>,
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

fn comm(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// n4 on ℝ⁴: x1 = shift, x2 = E_34, x3 = E_24, x4 = E_14.
pub fn n4() -> Representation {
    let mut shift = DMatrix::zeros(4, 4);
    for i in 0..3 {
        shift[(i, i + 1)] = 1.0;
    }
    let y = unit(4, 2, 3);
    let x3 = comm(&shift, &y);
    let x4 = comm(&shift, &x3);
    Representation { images: vec![shift, y, x3, x4] }
}

/// g5_5 on ℝ⁵: x1 = shift, x2 = E_45, then iterated brackets with x1.
pub fn g5_5() -> Representation {
    let mut shift = DMatrix::zeros(5, 5);
    for i in 0..4 {
        shift[(i, i + 1)] = 1.0;
    }
    let y = unit(5, 3, 4);
    let x3 = comm(&shift, &y);
    let x4 = comm(&shift, &x3);
    let x5 = comm(&shift, &x4);
    Representation { images: vec![shift, y, x3, x4, x5] }
}

/// g5_4 acting by left multiplication on the free associative algebra in
/// two letters truncated above degree 3 (15 words).
pub fn g5_4() -> Representation {
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    for len in 1..=3 {
        let prev: Vec<Vec<u8>> = words.iter().filter(|w| w.len() == len - 1).cloned().collect();
        for w in prev {
            for letter in 0..2u8 {
                let mut v = vec![letter];
                v.extend(&w);
                words.push(v);
            }
        }
    }
    let idx = |w: &[u8]| words.iter().position(|u| u.as_slice() == w);
    let n = words.len();
    let left = |letter: u8| {
        let mut m = DMatrix::zeros(n, n);
        for (j, w) in words.iter().enumerate() {
            if w.len() < 3 {
                let mut v = vec![letter];
                v.extend(w);
                m[(idx(&v).unwrap(), j)] = 1.0;
            }
        }
        m
    };
    let (x1, x2) = (left(0), left(1));
    let x3 = comm(&x1, &x2);
    let x4 = comm(&x1, &x3);
    let x5 = comm(&x2, &x3);
    Representation { images: vec![x1, x2, x3, x4, x5] }
}

fn series_exp(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=n {
        term = &term * a / k as f64;
        sum += &term;
    }
    sum
}

fn series_log(u: &DMatrix<f64>) -> DMatrix<f64> {
    let n = u.nrows();
    let a = u - DMatrix::identity(n, n);
    let mut sum = DMatrix::zeros(n, n);
    let mut pow = DMatrix::identity(n, n);
    for k in 1..=n {
        pow = &pow * &a;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += &pow * (sign / k as f64);
    }
    sum
}

impl Representation {
    pub fn embed(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.images[0].nrows();
        self.images
            .iter()
            .zip(x.iter())
            .fold(DMatrix::zeros(n, n), |acc, (m, c)| acc + m * *c)
    }

    /// Coordinates of a matrix in the span of the images, with the fit residual.
    pub fn read_back(&self, m: &DMatrix<f64>) -> (DVector<f64>, f64) {
        let rows = m.len();
        let mut a = DMatrix::zeros(rows, self.images.len());
        for (j, im) in self.images.iter().enumerate() {
            a.set_column(j, &DVector::from_column_slice(im.as_slice()));
        }
        let b = DVector::from_column_slice(m.as_slice());
        let svd = a.clone().svd(true, true);
        let x = svd.solve(&b, 1e-12).unwrap();
        let res = (&a * &x - b).norm();
        (x, res)
    }

    /// `log(exp(X) exp(Y))` in coordinates.
    pub fn product(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let z = series_log(&(series_exp(&self.embed(x)) * series_exp(&self.embed(y))));
        let (c, res) = self.read_back(&z);
        assert!(res < 1e-9, "oracle product left the span of the representation: {res:e}");
        c
    }
}
