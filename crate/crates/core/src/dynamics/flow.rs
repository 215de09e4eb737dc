//! Hybrid integration of the truncated Filippov system.
//!
//! In `x1 < 0` the affine field `A x + b mu` is integrated with an adaptive
//! Dormand–Prince pair; arrivals on `x1 = 0` are localised by bisection on
//! the step length. In `x1 > 0` the constant field `c` is followed in closed
//! form. On attracting sliding regions the linear, time-rescaled sliding
//! field is integrated together with the true elapsed time, and the orbit
//! leaves the surface where the normal component of the left field changes
//! sign.

use serde::Serialize;

use super::rk::{next_step, DormandPrince, Tolerance};
use crate::beb;
use crate::error::{Error, Result};
use crate::model::{embed, NormalFormParams, PwlSystem};
use crate::sliding::{
    classify_normals, scaled_sliding_field, scaled_sliding_system, tangency_tol, RegionType, SlidingSystem,
};
use crate::smallmat::{dot, norm2, norm_inf};

/// Numerical settings shared by every simulation routine.
#[derive(Debug, Clone, Serialize)]
pub struct SimOptions {
    /// Bound on `|x1|` (or on the normal field component) at a localised event.
    pub tol_event: f64,
    pub rtol: f64,
    /// Absolute tolerance per unit of the problem's length scale.
    pub atol: f64,
    pub t_max: f64,
    /// `None` selects `1e3 * max(1, |mu|)`.
    pub escape_radius: Option<f64>,
    /// Distance (per unit length scale) below which an orbit counts as sitting on an equilibrium.
    pub converge_tol: f64,
    /// Consecutive accepted steps within `converge_tol` needed to declare convergence.
    pub converge_steps: usize,
    pub h_init: f64,
    pub h_max: f64,
    pub max_events: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            tol_event: 1e-10,
            rtol: 1e-10,
            atol: 1e-12,
            t_max: 1e5,
            escape_radius: None,
            converge_tol: 1e-6,
            converge_steps: 10,
            h_init: 1e-2,
            h_max: 0.25,
            max_events: 100_000,
        }
    }
}

impl SimOptions {
    pub fn radius(&self, mu: f64) -> f64 {
        self.escape_radius.unwrap_or(1e3 * mu.abs().max(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    RegularLeft,
    RegularRight,
    Sliding,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::RegularLeft => "left",
            Mode::RegularRight => "right",
            Mode::Sliding => "sliding",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    CrossLtoR,
    CrossRtoL,
    EnterSliding,
    ExitSliding,
    HitEscapeRadius,
    TimeCap,
    TangencyStop,
    ConvergedToXL,
    ConvergedToXS,
}

impl EventKind {
    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            EventKind::HitEscapeRadius
                | EventKind::TimeCap
                | EventKind::TangencyStop
                | EventKind::ConvergedToXL
                | EventKind::ConvergedToXS
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Event {
    pub t: f64,
    pub x: Vec<f64>,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Segment {
    pub mode: Mode,
    pub samples: Vec<Sample>,
}

/// Time-ordered, mode-tagged polyline plus the discrete events along it.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Trajectory {
    pub segments: Vec<Segment>,
    pub events: Vec<Event>,
}

impl Trajectory {
    /// Terminal event, if the run ended on one.
    pub fn termination(&self) -> Option<EventKind> {
        self.events.last().map(|e| e.kind).filter(|k| k.is_terminal())
    }

    pub fn final_state(&self) -> Option<&[f64]> {
        self.events
            .last()
            .map(|e| e.x.as_slice())
            .or_else(|| self.segments.last()?.samples.last().map(|s| s.x.as_slice()))
    }
}

/// When to stop besides the terminal events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StopRule {
    Never,
    /// First departure from the sliding region (the section `x1 = x2 = 0` in 3D).
    FirstSlidingExit,
    /// First arrival on the surface from `x1 < 0`.
    FirstLandingFromLeft,
}

enum Next {
    Left { from_surface: bool },
    Right,
    Slide { armed: bool },
    Stop,
}

enum PhaseEnd {
    Event,
    Escaped,
    Converged,
    TimeCap,
    Stuck,
}

/// Precomputed data for repeated runs of one system at one parameter value.
#[derive(Debug, Clone)]
pub(crate) struct FlowSetup {
    pub sys: PwlSystem,
    pub mu: f64,
    pub sliding: SlidingSystem,
    pub xl: Option<Vec<f64>>,
    pub xs: Option<Vec<f64>>,
    pub opts: SimOptions,
}

impl FlowSetup {
    pub fn new(sys: &PwlSystem, mu: f64, opts: &SimOptions) -> Result<Self> {
        let sliding = scaled_sliding_system(sys)?;
        let xl = beb::regular_equilibrium(sys, mu).ok().map(|e| e.x);
        let xs = if sys.dim() > 1 {
            beb::pseudo_equilibrium(sys, mu).ok().map(|e| e.x)
        } else {
            Some(vec![0.0])
        };
        Ok(FlowSetup {
            sys: sys.clone(),
            mu,
            sliding,
            xl,
            xs,
            opts: opts.clone(),
        })
    }

    pub fn run(&self, x0: &[f64], rule: StopRule, record: bool) -> Result<Trajectory> {
        if x0.len() != self.sys.dim() {
            return Err(Error::DimensionMismatch(format!(
                "initial state has {} entries, system has dimension {}",
                x0.len(),
                self.sys.dim()
            )));
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Schema("non-finite initial state".into()));
        }
        let ell = self.mu.abs().max(norm_inf(x0)).max(f64::MIN_POSITIVE);
        let mut run = Run {
            setup: self,
            n: self.sys.dim(),
            ell,
            event_tol: self.opts.tol_event * ell.min(1.0),
            radius: self.opts.radius(self.mu),
            rule,
            record,
            traj: Trajectory::default(),
        };
        run.go(x0.to_vec())?;
        Ok(run.traj)
    }
}

struct Run<'a> {
    setup: &'a FlowSetup,
    n: usize,
    ell: f64,
    event_tol: f64,
    radius: f64,
    rule: StopRule,
    record: bool,
    traj: Trajectory,
}

impl Run<'_> {
    /// Surface tangency threshold, shrunk with the orbit scale like `event_tol`.
    fn tangency_tol(&self, x: &[f64]) -> f64 {
        tangency_tol(x) * self.ell.min(1.0)
    }

    fn push_event(&mut self, t: f64, x: &[f64], kind: EventKind) {
        self.traj.events.push(Event {
            t,
            x: x.to_vec(),
            kind,
        });
    }

    fn go(&mut self, mut x: Vec<f64>) -> Result<()> {
        let mut t = 0.0;
        let mut next = self.initial(&mut x)?;
        loop {
            next = match next {
                Next::Left { from_surface } => self.left(&mut x, &mut t, from_surface),
                Next::Right => self.right(&mut x, &mut t),
                Next::Slide { armed } => self.slide(&mut x, &mut t, armed),
                Next::Stop => return Ok(()),
            };
            if self.traj.events.len() > self.setup.opts.max_events {
                self.push_event(t, &x, EventKind::TimeCap);
                return Ok(());
            }
        }
    }

    /// Second time derivative of `x1` along the left flow at a surface point
    /// where the left field is tangent.
    fn left_curvature(&self, x: &[f64]) -> f64 {
        let f = self.setup.sys.left_field(x, self.setup.mu);
        dot(self.setup.sys.a.row(0), &f)
    }

    fn initial(&mut self, x: &mut [f64]) -> Result<Next> {
        let tol = self.tangency_tol(x);
        if x[0] < -tol {
            return Ok(Next::Left { from_surface: false });
        }
        if x[0] > tol {
            return Ok(Next::Right);
        }
        x[0] = 0.0;
        let sys = &self.setup.sys;
        let fl = sys.left_normal(x, self.setup.mu);
        let c1 = sys.c1();
        Ok(match classify_normals(fl, c1, tol) {
            RegionType::AttractingSliding => Next::Slide { armed: true },
            RegionType::RepellingSliding => return Err(Error::RepellingForwardFlow),
            RegionType::Crossing if fl < 0.0 => Next::Left { from_surface: true },
            RegionType::Crossing => Next::Right,
            RegionType::Tangency => {
                let curv = self.left_curvature(x);
                if c1 < 0.0 && curv < -tol {
                    Next::Left { from_surface: true }
                } else if c1 < 0.0 && curv > tol {
                    // boundary of the sliding region, flow moves into it
                    Next::Slide { armed: false }
                } else {
                    self.push_event(0.0, x, EventKind::TangencyStop);
                    Next::Stop
                }
            }
        })
    }

    fn arrive_from_left(&mut self, x: &[f64], t: f64) -> Next {
        let sys = &self.setup.sys;
        let fl = sys.left_normal(x, self.setup.mu);
        if fl > self.tangency_tol(x) {
            if sys.c1() < 0.0 {
                self.push_event(t, x, EventKind::EnterSliding);
                if self.rule == StopRule::FirstLandingFromLeft {
                    return Next::Stop;
                }
                Next::Slide { armed: true }
            } else {
                self.push_event(t, x, EventKind::CrossLtoR);
                Next::Right
            }
        } else if sys.c1() < 0.0 && self.sliding_rate(x) > 0.0 {
            // landing too shallow to resolve, but the sliding flow moves into the sliding region
            self.push_event(t, x, EventKind::EnterSliding);
            if self.rule == StopRule::FirstLandingFromLeft {
                return Next::Stop;
            }
            Next::Slide { armed: false }
        } else if self.left_curvature(x) < 0.0 {
            Next::Left { from_surface: true }
        } else {
            self.push_event(t, x, EventKind::TangencyStop);
            Next::Stop
        }
    }

    /// Rate of change of the left field's normal component along the sliding flow.
    fn sliding_rate(&self, x: &[f64]) -> f64 {
        let g = scaled_sliding_field(&self.setup.sys, x, self.setup.mu);
        dot(self.setup.sys.a.row(0), &g)
    }

    fn arrive_from_right(&mut self, x: &[f64], t: f64) -> Next {
        let fl = self.setup.sys.left_normal(x, self.setup.mu);
        let tol = self.tangency_tol(x);
        if fl > tol {
            self.push_event(t, x, EventKind::EnterSliding);
            Next::Slide { armed: true }
        } else if fl < -tol {
            self.push_event(t, x, EventKind::CrossRtoL);
            Next::Left { from_surface: true }
        } else {
            self.push_event(t, x, EventKind::TangencyStop);
            Next::Stop
        }
    }

    fn left(&mut self, x: &mut Vec<f64>, t: &mut f64, from_surface: bool) -> Next {
        let setup = self.setup;
        let sys = &setup.sys;
        let mu = setup.mu;
        let n = self.n;
        let field = |y: &[f64], dy: &mut [f64]| {
            for (i, d) in dy.iter_mut().enumerate() {
                *d = dot(sys.a.row(i), y) + sys.b[i] * mu;
            }
        };
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        let event = Affine { w, w0: 0.0 };
        let to_x = |y: &[f64]| y.to_vec();
        let spec = PhaseSpec {
            mode: Mode::RegularLeft,
            error_dims: n,
            time_index: None,
            target: setup.xl.as_deref().filter(|xl| xl[0] < 0.0),
            armed: !from_surface,
        };
        let (end, y, tt) = self.phase(&spec, x.clone(), *t, &field, &event, &to_x);
        *x = y;
        *t = tt;
        match end {
            PhaseEnd::Event => {
                x[0] = 0.0;
                self.arrive_from_left(x, *t)
            }
            PhaseEnd::Escaped => self.terminal(*t, x, EventKind::HitEscapeRadius),
            PhaseEnd::Converged => self.terminal(*t, x, EventKind::ConvergedToXL),
            PhaseEnd::TimeCap => self.terminal(*t, x, EventKind::TimeCap),
            PhaseEnd::Stuck => self.terminal(*t, x, EventKind::TangencyStop),
        }
    }

    fn terminal(&mut self, t: f64, x: &[f64], kind: EventKind) -> Next {
        self.push_event(t, x, kind);
        Next::Stop
    }

    fn slide(&mut self, x: &mut Vec<f64>, t: &mut f64, armed: bool) -> Next {
        let setup = self.setup;
        let n = self.n;
        if n == 1 {
            // the surface is a single point, which is the pseudo-equilibrium
            return self.terminal(*t, x, EventKind::ConvergedToXS);
        }
        let sys = &setup.sys;
        let mu = setup.mu;
        let c1 = sys.c1();
        let row0 = sys.a.row(0);
        let b1 = sys.b[0];
        let s = &setup.sliding;
        // state: (x_2, ..., x_n, t)
        let normal = move |y: &[f64]| dot(&row0[1..], &y[..n - 1]) + b1 * mu;
        let field = |y: &[f64], dy: &mut [f64]| {
            for (i, d) in dy[..n - 1].iter_mut().enumerate() {
                *d = dot(s.m_tilde.row(i), &y[..n - 1]) + s.forcing[i] * mu;
            }
            dy[n - 1] = 1.0 - normal(y) / c1;
        };
        // exit when the left field's normal component drops to zero
        let event = Affine {
            w: row0[1..].iter().map(|v| -v).chain(std::iter::once(0.0)).collect(),
            w0: -b1 * mu,
        };
        let to_x = |y: &[f64]| std::iter::once(0.0).chain(y[..n - 1].iter().copied()).collect();
        let spec = PhaseSpec {
            mode: Mode::Sliding,
            error_dims: n - 1,
            time_index: Some(n - 1),
            target: setup.xs.as_deref(),
            armed,
        };
        let y0: Vec<f64> = x[1..].iter().copied().chain(std::iter::once(*t)).collect();
        let (end, y, tt) = self.phase(&spec, y0, *t, &field, &event, &to_x);
        *x = to_x(&y);
        *t = tt;
        match end {
            PhaseEnd::Event => {
                let tol = self.tangency_tol(x);
                if self.left_curvature(x) < -tol {
                    self.push_event(*t, x, EventKind::ExitSliding);
                    if self.rule == StopRule::FirstSlidingExit {
                        return Next::Stop;
                    }
                    Next::Left { from_surface: true }
                } else {
                    self.terminal(*t, x, EventKind::TangencyStop)
                }
            }
            PhaseEnd::Escaped => self.terminal(*t, x, EventKind::HitEscapeRadius),
            PhaseEnd::Converged => self.terminal(*t, x, EventKind::ConvergedToXS),
            PhaseEnd::TimeCap => self.terminal(*t, x, EventKind::TimeCap),
            PhaseEnd::Stuck => self.terminal(*t, x, EventKind::TangencyStop),
        }
    }

    fn right(&mut self, x: &mut Vec<f64>, t: &mut f64) -> Next {
        let c = self.setup.sys.c.clone();
        let c1 = c[0];
        let start = x.clone();
        let cc = dot(&c, &c);
        let xc = dot(&start, &c);
        let xx = dot(&start, &start);
        let r2 = self.radius * self.radius;
        let escape_after = if xx >= r2 {
            0.0
        } else {
            (-xc + (xc * xc - cc * (xx - r2)).sqrt()) / cc
        };
        let hit_after = if c1 < 0.0 { start[0] / -c1 } else { f64::INFINITY };
        let remaining = (self.setup.opts.t_max - *t).max(0.0);
        let duration = hit_after.min(escape_after).min(remaining);
        let at = |s: f64| -> Vec<f64> { start.iter().zip(&c).map(|(xi, ci)| xi + ci * s).collect() };
        if self.record {
            let samples = (0..=8)
                .map(|k| {
                    let s = duration * k as f64 / 8.0;
                    Sample { t: *t + s, x: at(s) }
                })
                .collect();
            self.traj.segments.push(Segment {
                mode: Mode::RegularRight,
                samples,
            });
        }
        *x = at(duration);
        *t += duration;
        if duration == hit_after {
            x[0] = 0.0;
            self.arrive_from_right(x, *t)
        } else if duration == escape_after {
            self.terminal(*t, x, EventKind::HitEscapeRadius)
        } else {
            self.terminal(*t, x, EventKind::TimeCap)
        }
    }

    /// Integrates one smooth phase until `event` changes sign from negative to
    /// non-negative, a terminal condition fires, or the time cap is reached.
    fn phase<F, X>(
        &mut self,
        spec: &PhaseSpec,
        mut y: Vec<f64>,
        t0: f64,
        field: &F,
        event: &Affine,
        to_x: &X,
    ) -> (PhaseEnd, Vec<f64>, f64)
    where
        F: Fn(&[f64], &mut [f64]),
        X: Fn(&[f64]) -> Vec<f64>,
    {
        let opts = &self.setup.opts;
        let dim = y.len();
        let tol = Tolerance {
            rtol: opts.rtol,
            atol: opts.atol * self.ell,
            error_dims: spec.error_dims,
        };
        let mut stepper = DormandPrince::new(dim);
        let mut out = vec![0.0; dim];
        let mut s = 0.0;
        let time = |y: &[f64], s: f64| spec.time_index.map_or(t0 + s, |i| y[i]);
        let mut samples = Vec::new();
        if self.record {
            samples.push(Sample {
                t: time(&y, s),
                x: to_x(&y),
            });
        }
        let mut armed = spec.armed;
        let mut h = opts.h_init;
        let mut near = 0usize;
        let mut halvings = 0usize;
        let conv = opts.converge_tol * self.ell;

        let end = loop {
            let t_now = time(&y, s);
            if t_now >= opts.t_max {
                break PhaseEnd::TimeCap;
            }
            let mut h_try = h.min(opts.h_max);
            if spec.time_index.is_none() {
                h_try = h_try.min(opts.t_max - t_now);
            }
            if h_try <= 1e-14 * (1.0 + s.abs()) {
                break PhaseEnd::Stuck;
            }
            let err = stepper.step(field, &y, h_try, &mut out, tol);
            if err > 1.0 || !err.is_finite() {
                h = next_step(h_try, err.min(1e10));
                continue;
            }
            let g = event.eval(&out);
            if !armed && g >= 0.0 {
                halvings += 1;
                if halvings > 80 {
                    break PhaseEnd::Stuck;
                }
                h = 0.5 * h_try;
                continue;
            }
            if armed && g < 0.0 {
                // a grazing excursion can start and end inside one step
                let (f0, f1) = stepper.end_derivatives();
                let peak = event.interior_peak(event.eval(&y), g, event.rate(f0), event.rate(f1), h_try);
                if let Some(tp) = peak.filter(|&tp| tp > 1e-12 * h_try) {
                    h = tp;
                    continue;
                }
            }
            if armed && g >= 0.0 {
                let (theta, state) = localize(&mut stepper, field, event, &y, h_try, tol, self.event_tol);
                s += theta;
                y = state;
                if self.record {
                    samples.push(Sample {
                        t: time(&y, s),
                        x: to_x(&y),
                    });
                }
                break PhaseEnd::Event;
            }
            if let Some(i) = spec.time_index.filter(|&i| out[i] > opts.t_max) {
                let mut w = vec![0.0; dim];
                w[i] = 1.0;
                let cap = Affine { w, w0: -opts.t_max };
                let (theta, state) = localize(&mut stepper, field, &cap, &y, h_try, tol, self.event_tol);
                s += theta;
                y = state;
                if self.record {
                    samples.push(Sample {
                        t: time(&y, s),
                        x: to_x(&y),
                    });
                }
                break PhaseEnd::TimeCap;
            }
            armed = true;
            s += h_try;
            y.copy_from_slice(&out);
            let x = to_x(&y);
            if self.record {
                samples.push(Sample {
                    t: time(&y, s),
                    x: x.clone(),
                });
            }
            if norm2(&x) > self.radius {
                break PhaseEnd::Escaped;
            }
            if let Some(target) = spec.target {
                let dist = x
                    .iter()
                    .zip(target)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                if dist <= conv {
                    near += 1;
                    if near >= opts.converge_steps {
                        break PhaseEnd::Converged;
                    }
                } else {
                    near = 0;
                }
            }
            h = next_step(h_try, err);
        };
        if self.record {
            self.traj.segments.push(Segment {
                mode: spec.mode,
                samples,
            });
        }
        let t_end = time(&y, s);
        (end, y, t_end)
    }
}

/// Event function `w . y + w0`.
struct Affine {
    w: Vec<f64>,
    w0: f64,
}

impl Affine {
    fn eval(&self, y: &[f64]) -> f64 {
        dot(&self.w, y) + self.w0
    }

    fn rate(&self, dy: &[f64]) -> f64 {
        dot(&self.w, dy)
    }

    /// Location of an interior maximum of the cubic Hermite interpolant of the
    /// event function over a step of length `h`, if that maximum is non-negative.
    fn interior_peak(&self, g0: f64, g1: f64, r0: f64, r1: f64, h: f64) -> Option<f64> {
        let (c, d) = (h * r0, g0);
        let a = 2.0 * g0 - 2.0 * g1 + h * r0 + h * r1;
        let b = -3.0 * g0 + 3.0 * g1 - 2.0 * h * r0 - h * r1;
        let p = |s: f64| ((a * s + b) * s + c) * s + d;
        // critical points of the cubic: 3a s^2 + 2b s + c = 0
        let crit: Vec<f64> = if a.abs() <= 1e-14 * (b.abs() + c.abs()) {
            if b == 0.0 {
                vec![]
            } else {
                vec![-c / (2.0 * b)]
            }
        } else {
            let disc = b * b - 3.0 * a * c;
            if disc < 0.0 {
                vec![]
            } else {
                let q = -(b + b.signum() * disc.sqrt());
                let mut v = vec![q / (3.0 * a)];
                if q != 0.0 {
                    v.push(c / q);
                }
                v
            }
        };
        crit.into_iter()
            .filter(|s| *s > 0.0 && *s < 1.0 && p(*s) >= 0.0)
            .min_by(f64::total_cmp)
            .map(|s| s * h)
    }
}

struct PhaseSpec<'a> {
    mode: Mode,
    error_dims: usize,
    time_index: Option<usize>,
    target: Option<&'a [f64]>,
    armed: bool,
}

/// Bisection on the step length for the first point where `event >= 0`,
/// stopping once `|event| <= tol`. Returns the step length and the state on
/// the non-negative side.
fn localize<F>(
    stepper: &mut DormandPrince,
    field: &F,
    event: &Affine,
    y: &[f64],
    h: f64,
    tol: Tolerance,
    event_tol: f64,
) -> (f64, Vec<f64>)
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut buf = vec![0.0; y.len()];
    stepper.step(field, y, h, &mut buf, tol);
    let mut hi_state = buf.clone();
    let mut lo = 0.0;
    let mut hi = h;
    for _ in 0..200 {
        if event.eval(&hi_state).abs() <= event_tol || hi - lo <= 1e-15 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        stepper.step(field, y, mid, &mut buf, tol);
        if event.eval(&buf) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
            hi_state.copy_from_slice(&buf);
        }
    }
    (hi, hi_state)
}

/// Simulates the system from `x0` for at most `t_max` time units.
pub fn integrate(sys: &PwlSystem, mu: f64, x0: &[f64], t_max: f64, opts: &SimOptions) -> Result<Trajectory> {
    let opts = SimOptions {
        t_max,
        ..opts.clone()
    };
    FlowSetup::new(sys, mu, &opts)?.run(x0, StopRule::Never, true)
}

pub fn integrate_normal_form(
    nf: &NormalFormParams,
    x0: &[f64],
    t_max: f64,
    opts: &SimOptions,
) -> Result<Trajectory> {
    integrate(&embed(nf), nf.mu, x0, t_max, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{from_traces, TraceParams2D, TraceParams3D};

    fn kinds(t: &Trajectory) -> Vec<EventKind> {
        t.events.iter().map(|e| e.kind).collect()
    }

    #[test]
    fn right_flow_is_a_straight_line_to_sliding() {
        // right field (-1, -1): from (0.5, 2) the surface is reached at (0, 1.5)
        let nf = from_traces(
            TraceParams2D {
                tau_l: -0.2,
                delta_l: 1.0,
                d2: -1.0,
            },
            1.0,
        );
        let traj = integrate_normal_form(&nf, &[0.5, 2.0], 100.0, &SimOptions::default()).unwrap();
        let first = &traj.events[0];
        assert_eq!(first.kind, EventKind::EnterSliding);
        assert_eq!(first.t, 0.5);
        assert_eq!(first.x, vec![0.0, 1.5]);
        assert_eq!(traj.termination(), Some(EventKind::ConvergedToXS));
        let end = traj.final_state().unwrap();
        assert!(end[0] == 0.0 && (end[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn stable_focus_converges_to_xl() {
        let nf = from_traces(
            TraceParams2D {
                tau_l: -0.2,
                delta_l: 1.0,
                d2: -1.0,
            },
            -1.0,
        );
        let traj = integrate_normal_form(&nf, &[-0.5, 0.0], 1e4, &SimOptions::default()).unwrap();
        assert_eq!(traj.termination(), Some(EventKind::ConvergedToXL));
        let end = traj.final_state().unwrap();
        assert!((end[0] + 1.0).abs() < 1e-5 && (end[1] + 0.2).abs() < 1e-5);
    }

    #[test]
    fn repelling_start_is_rejected() {
        let nf = NormalFormParams::new(vec![0.1, 1.0], &[1.0, -1.0], -1.0).unwrap();
        let err = integrate_normal_form(&nf, &[0.0, -0.5], 10.0, &SimOptions::default()).unwrap_err();
        assert!(matches!(err, Error::RepellingForwardFlow));
    }

    #[test]
    fn unstable_region_escapes_and_time_cap() {
        let nf = NormalFormParams::new(vec![-1.0, -2.0], &[-1.0, 1.0], 0.0).unwrap();
        let traj = integrate_normal_form(&nf, &[-1.0, -1.0], 1e3, &SimOptions::default()).unwrap();
        assert_eq!(traj.termination(), Some(EventKind::HitEscapeRadius));
        assert!(norm2(traj.final_state().unwrap()) >= 1e3 * (1.0 - 1e-9));

        let nf = from_traces(
            TraceParams2D {
                tau_l: 0.0,
                delta_l: 1.0,
                d2: -1.0,
            },
            1.0,
        );
        let traj = integrate_normal_form(&nf, &[-0.5, 0.0], 7.0, &SimOptions::default()).unwrap();
        assert_eq!(traj.termination(), Some(EventKind::TimeCap));
        assert!((traj.events.last().unwrap().t - 7.0).abs() < 1e-9);
    }

    #[test]
    fn orbits_scale_with_mu() {
        // the sliding time factor 1 - F^L_1 / c_1 is not homogeneous, so only
        // the geometry of orbits scales
        let nf = from_traces(
            TraceParams3D {
                tau_l: -0.5,
                sigma_l: 4.0,
                delta_l: 2.0,
                tau_s: 0.275,
                delta_s: 1.0,
            },
            1.0,
        );
        let opts = SimOptions::default();
        let a = integrate_normal_form(&nf, &[0.0, 0.0, -1.0], 60.0, &opts).unwrap();
        let b = integrate_normal_form(&nf.with_mu(1e-3), &[0.0, 0.0, -1e-3], 60.0, &opts).unwrap();
        assert!(a.events.len() >= 8);
        assert_eq!(kinds(&a)[..8], kinds(&b)[..8]);
        for (ea, eb) in a.events.iter().zip(&b.events).take(8) {
            for (xa, xb) in ea.x.iter().zip(&eb.x) {
                assert!((xa - 1e3 * xb).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn modes_alternate_at_events() {
        let nf = from_traces(
            TraceParams3D {
                tau_l: -0.5,
                sigma_l: 4.0,
                delta_l: 2.0,
                tau_s: 0.275,
                delta_s: 1.0,
            },
            1.0,
        );
        let traj = integrate_normal_form(&nf, &[0.0, 0.0, -1.0], 30.0, &SimOptions::default()).unwrap();
        for pair in traj.segments.windows(2) {
            assert_ne!(pair[0].mode, pair[1].mode);
            let end = pair[0].samples.last().unwrap();
            let start = &pair[1].samples[0];
            assert_eq!(end.t, start.t);
        }
        for seg in traj.segments.iter().filter(|s| s.mode == Mode::Sliding) {
            assert!(seg.samples.iter().all(|s| s.x[0] == 0.0 && s.x[1] >= -1e-9));
        }
    }

    #[test]
    fn grazing_peak_inside_a_step() {
        // g(s) = 0.01 - (s - 0.5)^2 on [0, 1]
        let ev = Affine {
            w: vec![1.0],
            w0: 0.0,
        };
        let peak = ev.interior_peak(-0.24, -0.24, 1.0, -1.0, 1.0).unwrap();
        assert!((peak - 0.5).abs() < 1e-12);
        assert!(ev.interior_peak(-0.26, -0.26, 1.0, -1.0, 1.0).is_none());
        assert!(ev.interior_peak(-1.0, -0.5, 0.5, 0.5, 1.0).is_none());
    }
}
