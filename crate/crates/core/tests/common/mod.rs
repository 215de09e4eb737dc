//! Shared helpers: random system populations and independent oracles built on
//! nalgebra rather than the crate's own linear algebra.
#![allow(dead_code)]

use filippov_beb::smallmat::Matrix;
use filippov_beb::PwlSystem;
use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_system(rng: &mut ChaCha8Rng, n: usize) -> PwlSystem {
    let mut draw = |len: usize| (0..len).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<f64>>();
    let rows: Vec<Vec<f64>> = (0..n).map(|_| draw(n)).collect();
    let b = draw(n);
    let c = draw(n);
    PwlSystem::new(Matrix::from_rows(&rows).unwrap(), b, c).unwrap()
}

pub fn to_na(a: &Matrix) -> DMatrix<f64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a.row(i)[j])
}

/// `(I - c e_1^T / c_1) A`, computed from scratch.
pub fn sliding_jacobian(sys: &PwlSystem) -> DMatrix<f64> {
    let n = sys.dim();
    let a = to_na(&sys.a);
    let c = DVector::from_column_slice(&sys.c);
    let mut p = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        p[(i, 0)] -= c[i] / c[0];
    }
    p * a
}

pub fn m_tilde(sys: &PwlSystem) -> DMatrix<f64> {
    let n = sys.dim();
    sliding_jacobian(sys).view((1, 1), (n - 1, n - 1)).into_owned()
}

pub fn eigs(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Counts `(real positive, positive real part)` with eigenvalues treated as
/// real when `|im| < tol`; `None` if any real part is within `tol` of zero.
pub fn unstable_counts(eigs: &[Complex<f64>], tol: f64) -> Option<(usize, usize)> {
    if eigs.iter().any(|l| l.re.abs() < tol) {
        return None;
    }
    let real_pos = eigs.iter().filter(|l| l.im.abs() < tol && l.re > 0.0).count();
    let pos = eigs.iter().filter(|l| l.re > 0.0).count();
    Some((real_pos, pos))
}

/// The population of the classification criteria: entries uniform in
/// `[-2, 2]`, `|det A| >= 1e-6`, `|c_1| >= 0.1`.
pub fn population(seed: u64, count: usize, dims: std::ops::RangeInclusive<usize>) -> Vec<PwlSystem> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(dims.clone());
        let sys = uniform_system(&mut rng, n);
        if to_na(&sys.a).determinant().abs() < 1e-6 || sys.c[0].abs() < 0.1 {
            continue;
        }
        out.push(sys);
    }
    out
}

pub fn approx(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}
