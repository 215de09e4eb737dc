//! Dense linear algebra for the small matrices that appear in a local
//! bifurcation analysis (n up to roughly 8).
//!
//! Everything here works on row-major `f64` storage. The central routine is
//! [`faddeev_leverrier`], which produces the characteristic polynomial, the
//! adjugate and the determinant in a single recurrence; inverses and linear
//! solves elsewhere in the crate are built on the adjugate.

mod roots;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use roots::poly_roots;

/// Square real matrix, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Builds a matrix from nested rows, rejecting ragged or non-square input
    /// and non-finite entries.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Schema(format!("non-finite matrix entry {v}")));
        }
        Ok(Matrix { n, data })
    }

    /// Companion matrix with `-a_i` down the first column and ones on the
    /// superdiagonal, so that `det(lambda I - C) = lambda^n + a_1 lambda^(n-1) + ... + a_n`.
    pub fn companion(a: &[f64]) -> Self {
        let n = a.len();
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, 0)] = -a[i];
            if i + 1 < n {
                m[(i, i + 1)] = 1.0;
            }
        }
        m
    }

    /// The nilpotent shift with ones on the superdiagonal (companion of the zero polynomial).
    pub fn shift(n: usize) -> Self {
        Matrix::companion(&vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len(), "mul_vec dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix, `x^T M`.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len(), "vec_mul dimension mismatch");
        (0..self.n)
            .map(|j| (0..self.n).map(|i| x[i] * self[(i, j)]).sum())
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    /// Lower-right `(n-1) x (n-1)` block.
    pub fn lower_right_block(&self) -> Matrix {
        let m = self.n.saturating_sub(1);
        let mut out = Matrix::zeros(m);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = self[(i + 1, j + 1)];
            }
        }
        out
    }

    pub fn det(&self) -> f64 {
        faddeev_leverrier(self).det
    }

    /// `adj(A) / det(A)`, or `None` when `|det| <= tol`.
    pub fn inverse(&self, tol: f64) -> Option<Matrix> {
        let fl = faddeev_leverrier(self);
        if fl.det.abs() <= tol {
            return None;
        }
        Some(fl.adjugate.scale(1.0 / fl.det))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

/// Monic characteristic polynomial `lambda^n + a_1 lambda^(n-1) + ... + a_n`,
/// stored as `[a_1, ..., a_n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub coeffs: Vec<f64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, a| acc * lambda + a)
    }

    pub fn eval_real(&self, lambda: f64) -> f64 {
        self.coeffs.iter().fold(1.0, |acc, a| acc * lambda + a)
    }
}

/// Output of the Faddeev–LeVerrier recurrence.
#[derive(Debug, Clone)]
pub struct FaddeevLeverrier {
    pub char_poly: CharPoly,
    pub adjugate: Matrix,
    pub det: f64,
}

/// Characteristic polynomial, adjugate and determinant of `a` in one pass.
///
/// With `M_1 = I`, `c_1 = -tr(A)` and `M_k = A M_(k-1) + c_(k-1) I`,
/// `c_k = -tr(A M_k) / k`, the coefficients `c_k` are those of
/// `det(lambda I - A)`, `det(A) = (-1)^n c_n` and `adj(A) = (-1)^(n-1) M_n`.
/// Defined for singular matrices as well.
pub fn faddeev_leverrier(a: &Matrix) -> FaddeevLeverrier {
    let n = a.dim();
    if n == 0 {
        return FaddeevLeverrier {
            char_poly: CharPoly { coeffs: vec![] },
            adjugate: Matrix::zeros(0),
            det: 1.0,
        };
    }
    let mut coeffs = Vec::with_capacity(n);
    let mut m = Matrix::identity(n);
    let mut c = -a.trace();
    coeffs.push(c);
    for k in 2..=n {
        m = a.matmul(&m);
        for i in 0..n {
            m[(i, i)] += c;
        }
        c = -a.matmul(&m).trace() / k as f64;
        coeffs.push(c);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let det = sign * coeffs[n - 1];
    let adjugate = m.scale(-sign);
    FaddeevLeverrier {
        char_poly: CharPoly { coeffs },
        adjugate,
        det,
    }
}

/// Eigenvalues of a real matrix together with the thresholds used to decide
/// whether an eigenvalue is real and whether its real part is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub tol_real: f64,
    pub tol_zero: f64,
}

impl Spectrum {
    pub fn with_tolerances(mut self, tol_real: f64, tol_zero: f64) -> Self {
        self.tol_real = tol_real;
        self.tol_zero = tol_zero;
        self
    }

    fn check_axis(&self, require_real: bool) -> Result<()> {
        for l in &self.eigenvalues {
            let on_axis = l.re.abs() <= self.tol_zero;
            if on_axis && (!require_real || l.im.abs() <= self.tol_real) {
                return Err(Error::AmbiguousEigenvalue { re: l.re, im: l.im });
            }
        }
        Ok(())
    }

    /// Number of real, positive eigenvalues.
    pub fn count_real_positive(&self) -> Result<usize> {
        self.check_axis(true)?;
        Ok(self
            .eigenvalues
            .iter()
            .filter(|l| l.im.abs() <= self.tol_real && l.re > self.tol_zero)
            .count())
    }

    /// Number of eigenvalues with positive real part, with multiplicity.
    pub fn count_positive_real_part(&self) -> Result<usize> {
        self.check_axis(false)?;
        Ok(self.eigenvalues.iter().filter(|l| l.re > self.tol_zero).count())
    }

    /// Largest real part (negative infinity for the empty spectrum).
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn product(&self) -> Complex64 {
        self.eigenvalues
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, l| acc * l)
    }
}

/// Default axis tolerance `1e-9 (1 + ||A||_inf)`.
pub fn default_axis_tol(a: &Matrix) -> f64 {
    1e-9 * (1.0 + a.norm_inf())
}

/// Eigenvalues as roots of the characteristic polynomial. `tol` bounds the
/// accepted residual `|det(lambda I - A)| <= tol * max(1, ||A||)^n`.
pub fn eigenvalues(a: &Matrix, tol: f64) -> Result<Spectrum> {
    let fl = faddeev_leverrier(a);
    let eigenvalues = poly_roots(&fl.char_poly.coeffs)?;
    let scale = a.norm_inf().max(1.0).powi(a.dim() as i32);
    for l in &eigenvalues {
        let residual = fl.char_poly.eval(*l).norm();
        if residual > tol * scale {
            return Err(Error::ConvergenceFailure { residual });
        }
    }
    let axis = default_axis_tol(a);
    Ok(Spectrum {
        eigenvalues,
        tol_real: axis,
        tol_zero: axis,
    })
}

/// [`eigenvalues`] with the default residual tolerance.
pub fn spectrum(a: &Matrix) -> Result<Spectrum> {
    eigenvalues(a, 1e-9)
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
