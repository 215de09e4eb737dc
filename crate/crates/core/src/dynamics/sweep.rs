//! Parameter sweeps of the return map, Lyapunov exponents, and the stability
//! probe for the origin at the critical parameter value.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::flow::SimOptions;
use super::poincare::{Outcome, PoincareMap};
use crate::error::{Error, Result};
use crate::model::{from_traces, to_traces, NormalFormParams, TraceParams};

/// The quantity varied in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParameter {
    TauL,
    SigmaL,
    DeltaL,
    /// `tau_S` in 3D, `d_2` in 2D.
    TauS,
    DeltaS,
    Mu,
    /// Characteristic coefficient `a_i`, 1-based.
    A(usize),
    /// Right-field component `d_i`, 1-based, `i >= 2`.
    D(usize),
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let index = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| Error::Schema(format!("unknown sweep parameter '{s}'")))
        };
        Ok(match s {
            "tau_L" => SweepParameter::TauL,
            "sigma_L" => SweepParameter::SigmaL,
            "delta_L" => SweepParameter::DeltaL,
            "tau_S" => SweepParameter::TauS,
            "delta_S" => SweepParameter::DeltaS,
            "mu" => SweepParameter::Mu,
            _ if s.starts_with("a_") => SweepParameter::A(index(&s[2..])?),
            _ if s.starts_with("d_") => SweepParameter::D(index(&s[2..])?),
            _ => return Err(Error::Schema(format!("unknown sweep parameter '{s}'"))),
        })
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepParameter::TauL => write!(f, "tau_L"),
            SweepParameter::SigmaL => write!(f, "sigma_L"),
            SweepParameter::DeltaL => write!(f, "delta_L"),
            SweepParameter::TauS => write!(f, "tau_S"),
            SweepParameter::DeltaS => write!(f, "delta_S"),
            SweepParameter::Mu => write!(f, "mu"),
            SweepParameter::A(i) => write!(f, "a_{i}"),
            SweepParameter::D(i) => write!(f, "d_{i}"),
        }
    }
}

impl SweepParameter {
    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(self, base: &NormalFormParams, value: f64) -> Result<NormalFormParams> {
        let n = base.dim();
        let out_of_range = || Error::Schema(format!("{self} does not exist for n = {n}"));
        match self {
            SweepParameter::Mu => Ok(base.with_mu(value)),
            SweepParameter::A(i) => {
                let mut nf = base.clone();
                *nf.a.get_mut(i.wrapping_sub(1)).ok_or_else(out_of_range)? = value;
                Ok(nf)
            }
            SweepParameter::D(i) => {
                let mut nf = base.clone();
                if i < 2 {
                    return Err(out_of_range());
                }
                *nf.d_tail.get_mut(i - 2).ok_or_else(out_of_range)? = value;
                Ok(nf)
            }
            _ => {
                let traces = match to_traces(base)? {
                    TraceParams::Planar(mut p) => {
                        match self {
                            SweepParameter::TauL => p.tau_l = value,
                            SweepParameter::DeltaL => p.delta_l = value,
                            SweepParameter::TauS => p.d2 = value,
                            _ => return Err(out_of_range()),
                        }
                        TraceParams::Planar(p)
                    }
                    TraceParams::Spatial(mut p) => {
                        match self {
                            SweepParameter::TauL => p.tau_l = value,
                            SweepParameter::SigmaL => p.sigma_l = value,
                            SweepParameter::DeltaL => p.delta_l = value,
                            SweepParameter::TauS => p.tau_s = value,
                            _ => p.delta_s = value,
                        }
                        TraceParams::Spatial(p)
                    }
                };
                Ok(from_traces(traces, base.mu))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOptions {
    /// Launch point on the section.
    pub z0: f64,
    pub transient: usize,
    pub keep: usize,
    /// Flag a parameter value when a kept iterate comes this close to `z = 0`.
    pub touch_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            z0: -1.0,
            transient: 500,
            keep: 250,
            touch_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    /// Kept iterates, possibly fewer than requested if the orbit stopped returning.
    pub iterates: Vec<f64>,
    /// Why the orbit stopped returning, if it did.
    pub gap: Option<Outcome>,
    /// Some kept iterate lies within `touch_tol` of the section's endpoint.
    pub near_origin: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub points: Vec<SweepPoint>,
}

/// Iterates the return map from `z0` at each grid value, discarding a
/// transient. Grid points run in parallel; the result is in grid order.
pub fn sweep(
    base: &NormalFormParams,
    parameter: SweepParameter,
    grid: &[f64],
    sim: &SimOptions,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    let points = grid
        .par_iter()
        .map(|&value| {
            let nf = parameter.apply(base, value)?;
            let map = PoincareMap::new(&nf, sim)?;
            Ok(orbit_at(&map, value, opts))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { parameter, points })
}

fn orbit_at(map: &PoincareMap, value: f64, opts: &SweepOptions) -> SweepPoint {
    let mut z = opts.z0;
    let mut iterates = Vec::with_capacity(opts.keep);
    let mut gap = None;
    for k in 0..opts.transient + opts.keep {
        match map.sample(z) {
            Ok(s) if s.image.is_some() => z = s.image.unwrap(),
            Ok(s) => {
                gap = Some(s.outcome);
                break;
            }
            Err(_) => {
                gap = Some(Outcome::TangencyStop);
                break;
            }
        }
        if map.dim() == 3 && z >= 0.0 {
            gap = Some(Outcome::TangencyStop);
            break;
        }
        if k >= opts.transient {
            iterates.push(z);
        }
    }
    let near_origin = iterates.iter().any(|z| z.abs() <= opts.touch_tol);
    SweepPoint {
        value,
        iterates,
        gap,
        near_origin,
    }
}

/// A parameter value where the attractor reaches the end `z = 0` of the section.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryTouch {
    pub value: f64,
    /// Largest kept iterate on the side of the jump nearest zero.
    pub closest: f64,
}

/// Between neighbouring grid points the attractor's largest iterate can jump
/// because a periodic orbit reaches `z = 0` and changes its itinerary. Such a
/// jump is usually narrower than the sweep step, so each suspicious interval
/// is bisected towards the jump and the closest approach to zero is reported
/// when it falls within `touch_tol`.
pub fn boundary_touches(
    base: &NormalFormParams,
    result: &SweepResult,
    sim: &SimOptions,
    opts: &SweepOptions,
    jump_tol: f64,
    width: f64,
) -> Result<Vec<BoundaryTouch>> {
    let top = |p: &SweepPoint| p.iterates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let candidates: Vec<(f64, f64, f64, f64)> = result
        .points
        .windows(2)
        .filter(|w| w[0].gap.is_none() && w[1].gap.is_none())
        .map(|w| (w[0].value, w[1].value, top(&w[0]), top(&w[1])))
        .filter(|(_, _, ta, tb)| (ta - tb).abs() > jump_tol)
        .collect();
    let touches = candidates
        .into_par_iter()
        .map(
            |(mut a, mut b, mut ta, mut tb)| -> Result<Option<BoundaryTouch>> {
                let top_at = |v: f64| -> Result<Option<f64>> {
                    let map = PoincareMap::new(&result.parameter.apply(base, v)?, sim)?;
                    let p = orbit_at(&map, v, opts);
                    Ok(p.gap.is_none().then(|| top(&p)))
                };
                while b - a > width {
                    let m = 0.5 * (a + b);
                    let Some(tm) = top_at(m)? else { return Ok(None) };
                    if (tm - ta).abs() >= (tm - tb).abs() {
                        b = m;
                        tb = tm;
                    } else {
                        a = m;
                        ta = tm;
                    }
                }
                let closest = ta.max(tb);
                Ok(
                    ((ta - tb).abs() > jump_tol && closest >= -opts.touch_tol).then_some(BoundaryTouch {
                        value: if ta > tb { a } else { b },
                        closest,
                    }),
                )
            },
        )
        .collect::<Result<Vec<_>>>()?;
    Ok(touches.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct LyapunovOptions {
    pub transient: usize,
    pub fd_step: f64,
}

impl Default for LyapunovOptions {
    fn default() -> Self {
        LyapunovOptions {
            transient: 200,
            fd_step: 1e-6,
        }
    }
}

/// Mean of `ln |P'(z_k)|` over `n_iter` iterates after a transient.
pub fn map_lyapunov(
    nf: &NormalFormParams,
    z0: f64,
    n_iter: usize,
    sim: &SimOptions,
    opts: &LyapunovOptions,
) -> Result<f64> {
    let map = PoincareMap::new(nf, sim)?;
    let step = |z: f64, k: usize| -> Result<f64> {
        let s = map.sample(z)?;
        s.image.ok_or(Error::UndefinedOrbit {
            iterate: k,
            reason: s.outcome.label().into(),
        })
    };
    let mut z = z0;
    for k in 0..opts.transient {
        z = step(z, k)?;
    }
    let mut acc = 0.0;
    for k in 0..n_iter {
        let d = map.derivative(z, opts.fd_step).ok_or(Error::UndefinedOrbit {
            iterate: opts.transient + k,
            reason: "map undefined next to the orbit".into(),
        })?;
        acc += d.abs().max(1e-300).ln();
        z = step(z, opts.transient + k)?;
    }
    Ok(acc / n_iter.max(1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeOptions {
    /// Launch at `-radius * 10^-k` for `k = 1..=decades`.
    pub decades: u32,
    pub max_returns: usize,
    /// Ratios within this distance of 1 are inconclusive.
    pub ratio_tol: f64,
    /// A launch whose amplitude falls below `decay * |z0|` counts as converged.
    pub decay: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            decades: 6,
            max_returns: 200,
            ratio_tol: 1e-3,
            decay: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeLaunch {
    pub z0: f64,
    /// `|z_(k+1)| / |z_k|` for successive returns.
    pub ratios: Vec<f64>,
    /// Left the ball of the given radius.
    pub exited: bool,
    /// Settled onto the equilibrium, or shrank by the factor `ProbeOptions::decay`.
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub verdict: Stability,
    pub launches: Vec<ProbeLaunch>,
}

/// Decides stability of the origin at `mu = 0` from the growth or decay of
/// successive return amplitudes. At `mu = 0` the return map is homogeneous of
/// degree one, so a single launch scale would suffice in exact arithmetic;
/// several are used as a consistency check.
pub fn origin_stability_probe(
    nf: &NormalFormParams,
    radius: f64,
    sim: &SimOptions,
    opts: &ProbeOptions,
) -> Result<ProbeReport> {
    if nf.mu != 0.0 {
        return Err(Error::Unsupported(format!(
            "the origin probe runs at mu = 0, got mu = {}",
            nf.mu
        )));
    }
    let map = PoincareMap::new(nf, sim)?;
    let mut launches = Vec::new();
    for k in 1..=opts.decades {
        let z0 = -radius * 10f64.powi(-(k as i32));
        let mut launch = ProbeLaunch {
            z0,
            ratios: Vec::new(),
            exited: false,
            converged: false,
        };
        let mut z = z0;
        for _ in 0..opts.max_returns {
            let s = map.sample(z)?;
            match (s.image, s.outcome) {
                (Some(p), _) => {
                    launch.ratios.push(p.abs() / z.abs());
                    z = p;
                    if z.abs() > radius {
                        launch.exited = true;
                        break;
                    }
                    // below this the absolute tangency tolerance would take over
                    if z.abs() < opts.decay * z0.abs() {
                        launch.converged = true;
                        break;
                    }
                    if map.dim() == 3 && z >= 0.0 {
                        return Err(Error::Inconclusive);
                    }
                }
                (None, Outcome::Escaped) => {
                    launch.exited = true;
                    break;
                }
                (None, Outcome::ConvergedToXL | Outcome::ConvergedToXS) => {
                    launch.converged = true;
                    break;
                }
                (None, _) => return Err(Error::Inconclusive),
            }
        }
        launches.push(launch);
    }
    // by homogeneity, leaving the ball from a launch 10^k times smaller means unbounded growth
    let ratios = || launches.iter().flat_map(|l| l.ratios.iter().copied());
    let marginal = ratios().any(|r| (r - 1.0).abs() <= opts.ratio_tol);
    let shrinking = ratios().all(|r| r < 1.0 - opts.ratio_tol);
    let verdict = if marginal {
        return Err(Error::Inconclusive);
    } else if launches.iter().all(|l| l.exited) {
        Stability::Unstable
    } else if launches.iter().all(|l| l.converged || (!l.exited && shrinking)) {
        Stability::Stable
    } else {
        return Err(Error::Inconclusive);
    };
    Ok(ProbeReport { verdict, launches })
}
