//! Return maps of the normal form with `d_1 = -1`.
//!
//! In 3D the section is the half-line `x1 = x2 = 0, x3 < 0`, where the left
//! flow is tangent to the surface and orbits leave the sliding region. An
//! orbit launched at `(0, 0, z)` is followed until it next leaves the sliding
//! region, and the map returns `x3` there.
//!
//! In 2D every orbit re-enters the surface from the left; the map sends the
//! launch point `(0, z)` to `x2` at the next landing. Points with `z > 0` lie
//! on the sliding region and all slide to the origin first, so the map is
//! constant there.

use serde::Serialize;

use super::flow::{EventKind, FlowSetup, SimOptions, StopRule};
use crate::error::{Error, Result};
use crate::model::{embed, NormalFormParams, Sign};
use crate::smallmat::{faddeev_leverrier, spectrum, Matrix};

/// How a single evaluation of the map ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Returned,
    Escaped,
    ConvergedToXL,
    ConvergedToXS,
    TangencyStop,
    TimeCap,
}

impl Outcome {
    fn from_event(kind: EventKind) -> Outcome {
        match kind {
            EventKind::HitEscapeRadius => Outcome::Escaped,
            EventKind::ConvergedToXL => Outcome::ConvergedToXL,
            EventKind::ConvergedToXS => Outcome::ConvergedToXS,
            EventKind::TimeCap => Outcome::TimeCap,
            _ => Outcome::TangencyStop,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Returned => "returned",
            Outcome::Escaped => "escaped",
            Outcome::ConvergedToXL => "converged_to_xL",
            Outcome::ConvergedToXS => "converged_to_xS",
            Outcome::TangencyStop => "tangency_stop",
            Outcome::TimeCap => "time_cap",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PoincareSample {
    pub z: f64,
    /// Image under the map; `None` unless `outcome` is `Returned`.
    pub image: Option<f64>,
    pub outcome: Outcome,
    /// Flight time to the return (or to the terminal event).
    pub time: f64,
    pub events: Vec<EventKind>,
}

/// Return map of one normal-form system, reusable across many launches.
#[derive(Debug, Clone)]
pub struct PoincareMap {
    setup: FlowSetup,
    n: usize,
}

impl PoincareMap {
    pub fn new(nf: &NormalFormParams, opts: &SimOptions) -> Result<Self> {
        let n = nf.dim();
        if n != 2 && n != 3 {
            return Err(Error::Unsupported(format!(
                "return maps are implemented for n = 2, 3, got n = {n}"
            )));
        }
        if nf.d1 != Sign::Minus {
            return Err(Error::Unsupported(
                "return maps need an attracting sliding region (d_1 = -1)".into(),
            ));
        }
        Ok(PoincareMap {
            setup: FlowSetup::new(&embed(nf), nf.mu, opts)?,
            n,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn launch_point(&self, z: f64) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        x[self.n - 1] = z;
        x
    }

    pub fn sample(&self, z: f64) -> Result<PoincareSample> {
        if self.n == 3 && z >= 0.0 {
            return Err(Error::Unsupported(format!(
                "section point z = {z} must be negative"
            )));
        }
        if !z.is_finite() {
            return Err(Error::Schema(format!("section point z = {z} is not finite")));
        }
        let (rule, ret) = if self.n == 3 {
            (StopRule::FirstSlidingExit, EventKind::ExitSliding)
        } else {
            (StopRule::FirstLandingFromLeft, EventKind::EnterSliding)
        };
        let traj = self.setup.run(&self.launch_point(z), rule, false)?;
        let events: Vec<EventKind> = traj.events.iter().map(|e| e.kind).collect();
        let last = traj.events.last();
        let time = last.map_or(0.0, |e| e.t);
        let (image, outcome) = match last {
            Some(e) if e.kind == ret => (Some(e.x[self.n - 1]), Outcome::Returned),
            Some(e) => (None, Outcome::from_event(e.kind)),
            None => (None, Outcome::TangencyStop),
        };
        Ok(PoincareSample {
            z,
            image,
            outcome,
            time,
            events,
        })
    }

    /// Image of `z`, or `None` when the orbit does not return.
    pub fn eval(&self, z: f64) -> Option<f64> {
        self.sample(z).ok().and_then(|s| s.image)
    }

    /// Central difference of the map at `z`, one-sided if `z + h` leaves the section.
    pub fn derivative(&self, z: f64, h: f64) -> Option<f64> {
        if self.n == 3 && z + h >= 0.0 {
            let p0 = self.eval(z)?;
            let pm = self.eval(z - h)?;
            return Some((p0 - pm) / h);
        }
        let pp = self.eval(z + h)?;
        let pm = self.eval(z - h)?;
        Some((pp - pm) / (2.0 * h))
    }
}

/// One-shot evaluation of the return map at `z`.
pub fn poincare_map(nf: &NormalFormParams, z: f64, opts: &SimOptions) -> Result<PoincareSample> {
    PoincareMap::new(nf, opts)?.sample(z)
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointOptions {
    pub grid: usize,
    /// Accept a root once `|P(z) - z|` is at most this.
    pub tol: f64,
    pub fd_step: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            grid: 400,
            tol: 1e-8,
            fd_step: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPoint {
    pub z: f64,
    pub multiplier: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub fixed_points: Vec<FixedPoint>,
    /// Sign changes of `P(z) - z` that turned out to be jumps of the map.
    pub discontinuities: Vec<f64>,
    /// Grid points where the map is undefined.
    pub undefined: Vec<(f64, Outcome)>,
}

/// Fixed points of the return map in `[lo, hi]`: sign changes of `P(z) - z`
/// on a uniform grid, refined by bisection. Brackets across which the map
/// jumps are reported separately.
pub fn fixed_points(
    nf: &NormalFormParams,
    range: (f64, f64),
    sim: &SimOptions,
    opts: &FixedPointOptions,
) -> Result<FixedPointReport> {
    let map = PoincareMap::new(nf, sim)?;
    let (lo, hi) = range;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || opts.grid < 2 {
        return Err(Error::Schema(format!(
            "invalid scan range [{lo}, {hi}] with {} points",
            opts.grid
        )));
    }
    let zs: Vec<f64> = (0..opts.grid)
        .map(|i| lo + (hi - lo) * i as f64 / (opts.grid - 1) as f64)
        .collect();
    let samples = zs.iter().map(|&z| map.sample(z)).collect::<Result<Vec<_>>>()?;

    let mut report = FixedPointReport {
        fixed_points: Vec::new(),
        discontinuities: Vec::new(),
        undefined: samples
            .iter()
            .filter(|s| s.image.is_none())
            .map(|s| (s.z, s.outcome))
            .collect(),
    };
    let g = |z: f64| map.eval(z).map(|p| p - z);
    for w in samples.windows(2) {
        let (Some(p0), Some(p1)) = (w[0].image, w[1].image) else {
            continue;
        };
        let (g0, g1) = (p0 - w[0].z, p1 - w[1].z);
        if g0 == 0.0 {
            push_root(&map, &mut report, w[0].z, opts);
            continue;
        }
        if g0 * g1 > 0.0 || g1 == 0.0 {
            continue;
        }
        let (mut a, mut b, mut ga) = (w[0].z, w[1].z, g0);
        let root = loop {
            let m = 0.5 * (a + b);
            let Some(gm) = g(m) else { break None };
            if gm.abs() <= opts.tol {
                break Some(m);
            }
            if (b - a).abs() <= 4.0 * f64::EPSILON * m.abs().max(1e-300) {
                report.discontinuities.push(m);
                break None;
            }
            if gm * ga < 0.0 {
                b = m;
            } else {
                a = m;
                ga = gm;
            }
        };
        if let Some(z) = root {
            push_root(&map, &mut report, z, opts);
        }
    }
    if let Some(last) = samples.last() {
        if last.image.is_some_and(|p| p == last.z) {
            push_root(&map, &mut report, last.z, opts);
        }
    }
    if report.fixed_points.is_empty() {
        return Err(Error::NoBracket);
    }
    Ok(report)
}

fn push_root(map: &PoincareMap, report: &mut FixedPointReport, z: f64, opts: &FixedPointOptions) {
    let multiplier = map.derivative(z, opts.fd_step).unwrap_or(f64::NAN);
    report.fixed_points.push(FixedPoint {
        z,
        multiplier,
        stable: multiplier.abs() < 1.0,
    });
}

/// Where the two-dimensional stable manifold of a saddle-focus `x^L` meets
/// the section line `x1 = x2 = 0` (3D only).
///
/// Requires `A` to have exactly one eigenvalue with positive real part, which
/// must be real. The stable subspace is the kernel of the left eigenvector of
/// that eigenvalue, so the crossing solves `w . ((0, 0, z) - x^L) = 0`.
pub fn stable_manifold_crossing(nf: &NormalFormParams) -> Result<f64> {
    if nf.dim() != 3 {
        return Err(Error::Unsupported(
            "stable manifold crossing is defined for n = 3".into(),
        ));
    }
    let c = nf.companion();
    let spec = spectrum(&c)?;
    let unstable: Vec<_> = spec.eigenvalues.iter().filter(|l| l.re > 0.0).collect();
    let [lu] = unstable.as_slice() else {
        return Err(Error::Unsupported("need exactly one unstable eigenvalue".into()));
    };
    if lu.im != 0.0 {
        return Err(Error::Unsupported("unstable eigenvalue is not real".into()));
    }
    // adj(l I - C) = v w^T up to scale for a simple eigenvalue
    let shifted = Matrix::identity(3).scale(lu.re).sub(&c);
    let adj = faddeev_leverrier(&shifted).adjugate;
    let w = (0..3)
        .map(|i| adj.row(i).to_vec())
        .max_by(|x, y| crate::smallmat::norm_inf(x).total_cmp(&crate::smallmat::norm_inf(y)))
        .expect("three rows");
    let xl = crate::beb::regular_equilibrium(&embed(nf), nf.mu)?.x;
    if w[2].abs() <= 1e-12 * crate::smallmat::norm_inf(&w) {
        return Err(Error::Unsupported(
            "stable manifold is parallel to the section".into(),
        ));
    }
    Ok(crate::smallmat::dot(&w, &xl) / w[2])
}

/// Bisects on the outcome of the return map between grid points where the
/// outcome changes, and returns launch points whose orbit converged to `x^L`.
pub fn converging_launches(
    nf: &NormalFormParams,
    range: (f64, f64),
    grid: usize,
    sim: &SimOptions,
) -> Result<Vec<f64>> {
    let map = PoincareMap::new(nf, sim)?;
    let (lo, hi) = range;
    let zs: Vec<f64> = (0..grid.max(2))
        .map(|i| lo + (hi - lo) * i as f64 / (grid.max(2) - 1) as f64)
        .collect();
    let outcomes = zs
        .iter()
        .map(|&z| map.sample(z).map(|s| s.outcome))
        .collect::<Result<Vec<_>>>()?;
    let mut hits = Vec::new();
    for (i, w) in outcomes.windows(2).enumerate() {
        if w[0] == Outcome::ConvergedToXL {
            hits.push(zs[i]);
            continue;
        }
        if w[0] == w[1] {
            continue;
        }
        let (mut a, mut b, oa) = (zs[i], zs[i + 1], w[0]);
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            let om = map.sample(m)?.outcome;
            if om == Outcome::ConvergedToXL {
                hits.push(m);
                break;
            }
            if om == oa {
                a = m;
            } else {
                b = m;
            }
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{from_traces, TraceParams2D, TraceParams3D};

    fn param3d(tau_s: f64) -> NormalFormParams {
        from_traces(
            TraceParams3D {
                tau_l: -0.5,
                sigma_l: 4.0,
                delta_l: 2.0,
                tau_s,
                delta_s: 1.0,
            },
            1.0,
        )
    }

    #[test]
    fn rejects_bad_sections() {
        let nf = param3d(0.275);
        assert!(matches!(
            poincare_map(&nf, 0.5, &SimOptions::default()),
            Err(Error::Unsupported(_))
        ));
        let planar_rep = NormalFormParams::new(vec![0.1, 1.0], &[1.0, -1.0], -1.0).unwrap();
        assert!(matches!(
            PoincareMap::new(&planar_rep, &SimOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn planar_map_is_constant_on_sliding_side() {
        let nf = from_traces(
            TraceParams2D {
                tau_l: 0.2,
                delta_l: 1.0,
                d2: -1.0,
            },
            -1.0,
        );
        let map = PoincareMap::new(&nf, &SimOptions::default()).unwrap();
        let p1 = map.eval(0.3).unwrap();
        let p2 = map.eval(0.9).unwrap();
        assert!((p1 - p2).abs() < 1e-8);
        assert!(map.derivative(0.5, 1e-5).unwrap().abs() < 1e-3);
    }

    #[test]
    fn homogeneous_in_mu() {
        // P_mu(z) = mu P_1(z / mu) for mu > 0
        let nf = param3d(0.275);
        let opts = SimOptions::default();
        let base = poincare_map(&nf, -1.2, &opts).unwrap();
        let scaled = poincare_map(&nf.with_mu(0.01), -0.012, &opts).unwrap();
        assert_eq!(base.outcome, Outcome::Returned);
        assert_eq!(scaled.outcome, Outcome::Returned);
        let (p, q) = (base.image.unwrap(), scaled.image.unwrap() / 0.01);
        assert!((p - q).abs() < 1e-6 * p.abs().max(1.0), "{p} vs {q}");
    }
}
