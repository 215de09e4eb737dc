//! Region typing on the switching surface and the Filippov sliding field.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::PwlSystem;
use crate::smallmat::{norm2, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionType {
    Crossing,
    AttractingSliding,
    RepellingSliding,
    Tangency,
}

/// Tolerance below which a normal component counts as zero.
pub fn tangency_tol(x: &[f64]) -> f64 {
    1e-9 * (1.0 + norm2(x))
}

fn on_surface(x: &[f64]) -> Result<()> {
    if x[0].abs() > tangency_tol(x) {
        return Err(Error::OffSurface(x[0]));
    }
    Ok(())
}

/// Product of the normal components of the two fields at a point of the surface.
pub fn chi(sys: &PwlSystem, x: &[f64], mu: f64) -> Result<f64> {
    on_surface(x)?;
    Ok(sys.left_normal(x, mu) * sys.c1())
}

pub fn region_type(sys: &PwlSystem, x: &[f64], mu: f64) -> Result<RegionType> {
    on_surface(x)?;
    let fl = sys.left_normal(x, mu);
    let fr = sys.c1();
    Ok(classify_normals(fl, fr, tangency_tol(x)))
}

pub(crate) fn classify_normals(fl: f64, fr: f64, tol: f64) -> RegionType {
    if fl.abs() <= tol || fr.abs() <= tol {
        RegionType::Tangency
    } else if fl * fr > 0.0 {
        RegionType::Crossing
    } else if fl > 0.0 {
        RegionType::AttractingSliding
    } else {
        RegionType::RepellingSliding
    }
}

/// The Filippov convex combination `(F^L_1 F^R - F^R_1 F^L) / (F^L_1 - F^R_1)`,
/// with the first component set to exactly zero.
pub fn sliding_field_true_time(sys: &PwlSystem, x: &[f64], mu: f64) -> Result<Vec<f64>> {
    let chi = chi(sys, x, mu)?;
    if chi >= 0.0 {
        return Err(Error::NotSlidingRegion(chi));
    }
    let fl = sys.left_field(x, mu);
    let fr = sys.right_field();
    let denom = fl[0] - fr[0];
    if denom.abs() < tangency_tol(x) {
        return Err(Error::DegenerateDenominator(denom));
    }
    let mut fs: Vec<f64> = fl
        .iter()
        .zip(fr)
        .map(|(l, r)| (fl[0] * r - fr[0] * l) / denom)
        .collect();
    fs[0] = 0.0;
    Ok(fs)
}

/// Sliding field with time rescaled so the denominator is `-F^R_1`:
/// `F^L - (F^L_1 / c_1) c`. Linear in `x` and `mu`.
pub fn scaled_sliding_field(sys: &PwlSystem, x: &[f64], mu: f64) -> Vec<f64> {
    let fl = sys.left_field(x, mu);
    let ratio = fl[0] / sys.c1();
    let mut g: Vec<f64> = fl.iter().zip(&sys.c).map(|(l, c)| l - ratio * c).collect();
    g[0] = 0.0;
    g
}

/// The linear sliding system `x~' = Mtilde x~ + forcing * mu` on `x1 = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct SlidingSystem {
    /// `(I - c e_1^T / c_1) A`.
    pub m: Matrix,
    /// Lower-right `(n-1) x (n-1)` block of `m`.
    pub m_tilde: Matrix,
    /// Coefficient of `mu` in the reduced field: lower `n-1` entries of
    /// `(I - c e_1^T / c_1) b`. Equals `e_(n-1)` for the normal form.
    pub forcing: Vec<f64>,
}

impl SlidingSystem {
    pub fn field(&self, x_tilde: &[f64], mu: f64) -> Vec<f64> {
        let mut f = self.m_tilde.mul_vec(x_tilde);
        for (fi, g) in f.iter_mut().zip(&self.forcing) {
            *fi += g * mu;
        }
        f
    }

    /// Largest entry of the first row of `m`, which vanishes identically.
    pub fn first_row_residual(&self) -> f64 {
        self.m.row(0).iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

pub fn scaled_sliding_system(sys: &PwlSystem) -> Result<SlidingSystem> {
    let c1 = sys.require_c1()?;
    let n = sys.dim();
    let mut proj = Matrix::identity(n);
    for i in 0..n {
        proj[(i, 0)] -= sys.c[i] / c1;
    }
    let m = proj.matmul(&sys.a);
    let pb = proj.mul_vec(&sys.b);
    Ok(SlidingSystem {
        m_tilde: m.lower_right_block(),
        m,
        forcing: pb[1..].to_vec(),
    })
}
