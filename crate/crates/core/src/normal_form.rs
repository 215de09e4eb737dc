//! Observability test and the coordinate change that brings an observable
//! system into companion-matrix normal form.
//!
//! With `a` the characteristic coefficients of `A`, `Psi` the unit lower
//! triangular Toeplitz matrix built from `a`, and `Phi` the observability
//! matrix with rows `e_1^T A^i`, the map `x -> Q x + r mu`, `mu -> s mu` with
//! `Q = Psi Phi`, `r = J^T Q b`, `s = e_n^T Q b` conjugates `A` to its
//! companion matrix and `b` to `e_n`. A final scaling by `1 / |d_1|` makes the
//! right-hand field's normal component exactly `+-1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{NormalFormParams, PwlSystem, Sign};
use crate::smallmat::{faddeev_leverrier, spectrum, Matrix};

#[derive(Debug, Clone, Serialize)]
pub struct Observability {
    pub phi: Matrix,
    pub det_phi: f64,
    pub observable: bool,
    /// Popov–Belevitch–Hautus verdict: no eigenvector of `A` is orthogonal to `e_1`.
    pub pbh_observable: bool,
}

/// Rows `e_1^T, e_1^T A, ..., e_1^T A^(n-1)`.
pub fn observability_matrix(a: &Matrix) -> Matrix {
    let n = a.dim();
    let mut phi = Matrix::zeros(n);
    let mut row = vec![0.0; n];
    if n > 0 {
        row[0] = 1.0;
    }
    for i in 0..n {
        for (j, v) in row.iter().enumerate() {
            phi[(i, j)] = *v;
        }
        row = a.vec_mul(&row);
    }
    phi
}

/// `|det Phi|` relative to Hadamard's bound, the product of the row norms.
fn observability_tol(phi: &Matrix) -> f64 {
    let hadamard: f64 = (0..phi.dim())
        .map(|i| crate::smallmat::norm2(phi.row(i)))
        .product();
    1e-10 * hadamard
}

pub fn observability(a: &Matrix) -> Observability {
    let phi = observability_matrix(a);
    let det_phi = phi.det();
    Observability {
        observable: det_phi.abs() > observability_tol(&phi),
        pbh_observable: pbh_observable(a),
        phi,
        det_phi,
    }
}

/// For every eigenvalue `l`, `[l I - A; e_1^T]` must have full column rank,
/// i.e. the Hermitian matrix `(l I - A)^H (l I - A) + e_1 e_1^T` must be
/// nonsingular.
fn pbh_observable(a: &Matrix) -> bool {
    let n = a.dim();
    let Ok(spec) = spectrum(a) else {
        return false;
    };
    let scale = (1.0 + a.norm_inf()).powi(2);
    spec.eigenvalues.iter().all(|&l| {
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let mki = shifted(a, l, k, i);
                    let mkj = shifted(a, l, k, j);
                    acc += mki.conj() * mkj;
                }
                if i == 0 && j == 0 {
                    acc += 1.0;
                }
                g[i * n + j] = acc;
            }
        }
        // smallest pivot of a Hermitian positive semidefinite matrix
        min_pivot(&mut g, n) > 1e-12 * scale
    })
}

fn shifted(a: &Matrix, l: Complex64, i: usize, j: usize) -> Complex64 {
    let v = Complex64::new(-a[(i, j)], 0.0);
    if i == j {
        v + l
    } else {
        v
    }
}

/// Smallest absolute pivot of Gaussian elimination with partial pivoting.
fn min_pivot(g: &mut [Complex64], n: usize) -> f64 {
    let mut smallest = f64::INFINITY;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| g[x * n + k].norm().partial_cmp(&g[y * n + k].norm()).unwrap())
            .unwrap();
        if p != k {
            for j in 0..n {
                g.swap(k * n + j, p * n + j);
            }
        }
        let piv = g[k * n + k];
        smallest = smallest.min(piv.norm());
        if piv.norm() == 0.0 {
            return 0.0;
        }
        for i in k + 1..n {
            let f = g[i * n + k] / piv;
            for j in k..n {
                let v = g[k * n + j];
                g[i * n + j] -= f * v;
            }
        }
    }
    smallest
}

/// Everything needed to audit or replay the transformation.
#[derive(Debug, Clone, Serialize)]
pub struct TransformRecord {
    pub psi: Matrix,
    pub phi: Matrix,
    pub q: Matrix,
    pub r: Vec<f64>,
    pub s: f64,
    /// `1 / |d_1|` before the final scaling.
    pub scale: f64,
    /// `||Q A Q^(-1) - C||_inf`.
    pub conjugation_residual: f64,
}

impl TransformRecord {
    /// Image of a state `x` of the original system at parameter `mu`.
    pub fn map_state(&self, x: &[f64], mu: f64) -> Vec<f64> {
        self.q
            .mul_vec(x)
            .iter()
            .zip(&self.r)
            .map(|(qx, r)| self.scale * (qx + r * mu))
            .collect()
    }

    pub fn map_mu(&self, mu: f64) -> f64 {
        self.scale * self.s * mu
    }
}

/// Lower-triangular Toeplitz matrix with ones on the diagonal and `a_k` on the k-th subdiagonal.
pub fn psi_matrix(a: &[f64]) -> Matrix {
    let n = a.len();
    let mut psi = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            psi[(i, j)] = a[i - j - 1];
        }
    }
    psi
}

/// Transforms `sys` (at parameter `mu`) into normal form.
pub fn to_normal_form(sys: &PwlSystem, mu: f64) -> Result<(NormalFormParams, TransformRecord)> {
    let c1 = sys.require_c1()?;
    let n = sys.dim();
    let a = faddeev_leverrier(&sys.a).char_poly.coeffs;
    let obs = observability(&sys.a);
    if !obs.observable {
        return Err(Error::NotObservable { det: obs.det_phi });
    }
    let psi = psi_matrix(&a);
    let q = psi.matmul(&obs.phi);
    let qb = q.mul_vec(&sys.b);
    let r = Matrix::shift(n).transpose().mul_vec(&qb);
    let s = qb[n - 1];
    let s_scale = crate::smallmat::norm_inf(&sys.b) * q.norm_inf();
    if s.abs() <= 1e-12 * s_scale {
        return Err(Error::ZeroS(s));
    }
    let d = q.mul_vec(&sys.c);
    let scale = 1.0 / d[0].abs();

    let q_inv = q
        .inverse(0.0)
        .ok_or_else(|| Error::InternalInconsistency("Q is singular".into()))?;
    let c = Matrix::companion(&a);
    let conjugation_residual = q.matmul(&sys.a).matmul(&q_inv).sub(&c).norm_inf();
    if conjugation_residual > 1e-8 * (1.0 + sys.a.norm_inf()) {
        return Err(Error::InternalInconsistency(format!(
            "Q A Q^-1 differs from the companion matrix by {conjugation_residual:.3e}"
        )));
    }

    let nf = NormalFormParams {
        a,
        d1: Sign::of(c1).expect("c1 checked nonzero"),
        d_tail: d[1..].iter().map(|v| v * scale).collect(),
        mu: scale * s * mu,
    };
    let record = TransformRecord {
        psi,
        phi: obs.phi,
        q,
        r,
        s,
        scale,
        conjugation_residual,
    };
    Ok((nf, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::embed;

    #[test]
    fn companion_is_observable_with_unit_det() {
        let c = Matrix::companion(&[0.3, -1.1, 2.0, 0.7]);
        let obs = observability(&c);
        for i in 0..4 {
            assert_eq!(obs.phi[(i, i)], 1.0);
            for j in i + 1..4 {
                assert_eq!(obs.phi[(i, j)], 0.0);
            }
        }
        assert!((obs.det_phi - 1.0).abs() < 1e-14);
        assert!(obs.observable && obs.pbh_observable);
    }

    #[test]
    fn diagonal_is_not_observable() {
        let obs = observability(&Matrix::diag(&[1.0, 2.0]));
        assert_eq!(obs.phi.to_rows(), vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(obs.det_phi, 0.0);
        assert!(!obs.observable && !obs.pbh_observable);
    }

    #[test]
    fn swap_is_observable() {
        let obs = observability(&Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap());
        assert_eq!(obs.phi, Matrix::identity(2));
        assert!(obs.observable && obs.pbh_observable);
    }

    #[test]
    fn normal_form_is_a_fixed_point() {
        let nf = NormalFormParams::new(vec![0.5, 4.0, -2.0], &[-1.0, 0.275, -1.0], 1.0).unwrap();
        let (out, rec) = to_normal_form(&embed(&nf), nf.mu).unwrap();
        assert!(rec.q.sub(&Matrix::identity(3)).norm_inf() < 1e-14);
        assert!(rec.r.iter().all(|v| *v == 0.0));
        assert_eq!(rec.s, 1.0);
        assert_eq!(out, nf);
    }

    #[test]
    fn rejects_unobservable_and_zero_c1() {
        let sys = PwlSystem::new(Matrix::diag(&[1.0, 2.0]), vec![1.0, 1.0], vec![-1.0, 0.0]).unwrap();
        assert!(matches!(
            to_normal_form(&sys, 0.0),
            Err(Error::NotObservable { .. })
        ));
        let sys = PwlSystem::new(Matrix::identity(1), vec![1.0], vec![0.0]).unwrap();
        assert!(matches!(to_normal_form(&sys, 0.0), Err(Error::ZeroC1)));
    }

    #[test]
    fn rejects_non_transversal() {
        // for a companion matrix Q = I, so s = b_n
        let sys = PwlSystem::new(Matrix::companion(&[1.0, 2.0]), vec![1.0, 0.0], vec![-1.0, 0.3]).unwrap();
        assert!(matches!(to_normal_form(&sys, 0.0), Err(Error::ZeroS(_))));
        let sys = PwlSystem::new(Matrix::companion(&[1.0, 2.0]), vec![1.0, -1.0], vec![-1.0, 0.3]).unwrap();
        let (nf, rec) = to_normal_form(&sys, 1.0).unwrap();
        assert_eq!(rec.s, -1.0);
        assert_eq!(nf.mu, -1.0);
    }

    #[test]
    fn psi_layout() {
        let psi = psi_matrix(&[1.0, 2.0, 3.0]);
        assert_eq!(
            psi.to_rows(),
            vec![vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0], vec![2.0, 1.0, 1.0]]
        );
    }
}
