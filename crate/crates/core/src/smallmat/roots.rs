//! Roots of real monic polynomials by damped Newton iteration with deflation.
//!
//! Complex roots are deflated together with their conjugate through a real
//! quadratic factor, so the working polynomial stays real and complex roots
//! come out in exact conjugate pairs. Every root is polished against the
//! original polynomial before it is returned.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 100;
const RESTARTS: usize = 12;

/// Roots of `x^n + a_1 x^(n-1) + ... + a_n` given `a = [a_1, ..., a_n]`.
pub fn poly_roots(a: &[f64]) -> Result<Vec<Complex64>> {
    let mut work: Vec<f64> = std::iter::once(1.0).chain(a.iter().copied()).collect();
    let original = work.clone();
    let mut roots = Vec::with_capacity(a.len());

    while work.len() > 1 {
        let deg = work.len() - 1;
        if deg == 1 {
            roots.push(Complex64::new(-work[1], 0.0));
            break;
        }
        if deg == 2 {
            let (r1, r2) = quadratic(work[1], work[2]);
            roots.push(r1);
            roots.push(r2);
            break;
        }
        let z = newton_root(&work)?;
        let z = polish(&original, z);
        let split = 1e-9 * (1.0 + z.norm());
        if z.im.abs() <= split {
            let x = polish(&original, Complex64::new(z.re, 0.0)).re;
            roots.push(Complex64::new(x, 0.0));
            work = deflate_linear(&work, x);
        } else {
            roots.push(z);
            roots.push(z.conj());
            work = deflate_quadratic(&work, -2.0 * z.re, z.norm_sqr());
        }
    }
    Ok(pair_conjugates(
        roots
            .into_iter()
            .map(|r| {
                let p = polish(&original, r);
                if r.im == 0.0 {
                    Complex64::new(p.re, 0.0)
                } else {
                    p
                }
            })
            .collect(),
    ))
}

/// Restore exact conjugate symmetry after independent polishing.
fn pair_conjugates(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    let mut i = 0;
    while i < roots.len() {
        if roots[i].im != 0.0 && i + 1 < roots.len() {
            let z = roots[i];
            let w = roots[i + 1];
            if (z.conj() - w).norm() <= 1e-6 * (1.0 + z.norm()) {
                let re = 0.5 * (z.re + w.re);
                let im = 0.5 * (z.im.abs() + w.im.abs());
                roots[i] = Complex64::new(re, im);
                roots[i + 1] = Complex64::new(re, -im);
                i += 2;
                continue;
            }
        }
        i += 1;
    }
    roots
}

/// Roots of `x^2 + p x + q`, computed without cancellation.
fn quadratic(p: f64, q: f64) -> (Complex64, Complex64) {
    let disc = p * p - 4.0 * q;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let big = -0.5 * (p + p.signum() * s);
        if big == 0.0 {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        (Complex64::new(big, 0.0), Complex64::new(q / big, 0.0))
    } else {
        let re = -0.5 * p;
        let im = 0.5 * (-disc).sqrt();
        (Complex64::new(re, im), Complex64::new(re, -im))
    }
}

fn eval_with_derivative(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::new(p[0], 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    for c in &p[1..] {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

fn newton_root(p: &[f64]) -> Result<Complex64> {
    // Cauchy bound on the root moduli.
    let bound = 1.0 + p[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut best = Complex64::new(0.0, 0.0);
    let mut best_res = f64::INFINITY;
    for attempt in 0..RESTARTS {
        let angle = 0.4 + 2.39996 * attempt as f64;
        let radius = 0.5 * bound * (1.0 + 0.1 * attempt as f64) / (1.0 + 0.5 * attempt as f64);
        let mut z = Complex64::from_polar(radius, angle);
        let (mut val, _) = eval_with_derivative(p, z);
        for _ in 0..MAX_ITER {
            let (v, d) = eval_with_derivative(p, z);
            val = v;
            if v.norm() == 0.0 {
                return Ok(z);
            }
            if d.norm() == 0.0 {
                break;
            }
            let mut step = v / d;
            // damping: halve until the residual decreases
            let mut accepted = false;
            for _ in 0..30 {
                let trial = z - step;
                if eval_with_derivative(p, trial).0.norm() < v.norm() {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
            z -= step;
            if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                return Ok(z);
            }
        }
        if val.norm() < best_res {
            best_res = val.norm();
            best = z;
        }
        let scale = p.iter().fold(0.0f64, |m, c| m.max(c.abs())) * (1.0 + z.norm()).powi(p.len() as i32 - 1);
        if best_res <= 1e-12 * scale {
            return Ok(best);
        }
    }
    Err(Error::ConvergenceFailure { residual: best_res })
}

/// A few undamped Newton steps on the full polynomial; keeps whichever iterate
/// has the smallest residual.
fn polish(p: &[f64], z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut best = z0;
    let mut best_res = eval_with_derivative(p, z0).0.norm();
    for _ in 0..8 {
        let (v, d) = eval_with_derivative(p, z);
        if d.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        z -= v / d;
        let res = eval_with_derivative(p, z).0.norm();
        if res < best_res {
            best_res = res;
            best = z;
        } else {
            break;
        }
    }
    best
}

fn deflate_linear(p: &[f64], x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.len() - 1);
    let mut acc = 0.0;
    for c in &p[..p.len() - 1] {
        acc = acc * x + c;
        out.push(acc);
    }
    out
}

/// Divide by `x^2 + s x + t`, dropping the remainder.
fn deflate_quadratic(p: &[f64], s: f64, t: f64) -> Vec<f64> {
    let n = p.len() - 1;
    let mut q = vec![0.0; n - 1];
    for k in 0..n - 1 {
        let mut v = p[k];
        if k >= 1 {
            v -= s * q[k - 1];
        }
        if k >= 2 {
            v -= t * q[k - 2];
        }
        q[k] = v;
    }
    q
}
