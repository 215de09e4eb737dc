//! Simulation of the piecewise-smooth flow and the return-map tools built on it.

mod flow;
mod poincare;
mod rk;
mod sweep;

pub use flow::{
    integrate, integrate_normal_form, Event, EventKind, Mode, Sample, Segment, SimOptions, Trajectory,
};
pub use poincare::{
    converging_launches, fixed_points, poincare_map, stable_manifold_crossing, FixedPoint, FixedPointOptions,
    FixedPointReport, Outcome, PoincareMap, PoincareSample,
};
pub use sweep::{
    boundary_touches, map_lyapunov, origin_stability_probe, sweep, BoundaryTouch, LyapunovOptions,
    ProbeLaunch, ProbeOptions, ProbeReport, Stability, SweepOptions, SweepParameter, SweepPoint, SweepResult,
};
