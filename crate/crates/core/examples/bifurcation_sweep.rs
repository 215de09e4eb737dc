//! Bifurcation diagram of the return map in tau_S, with the parameter values
//! where the attractor reaches the boundary of the sliding region.

use filippov_beb::dynamics::{boundary_touches, sweep, SimOptions, SweepOptions, SweepParameter};
use filippov_beb::model::{from_traces, TraceParams3D};

fn main() -> filippov_beb::Result<()> {
    let nf = from_traces(
        TraceParams3D {
            tau_l: -0.5,
            sigma_l: 4.0,
            delta_l: 2.0,
            tau_s: 0.15,
            delta_s: 1.0,
        },
        1.0,
    );
    let sim = SimOptions::default();
    let opts = SweepOptions::default();
    let grid: Vec<f64> = (0..=35).map(|i| 0.135 + 0.001 * i as f64).collect();
    let result = sweep(&nf, SweepParameter::TauS, &grid, &sim, &opts)?;
    for p in result.points.iter().step_by(5) {
        let mut distinct: Vec<f64> = p.iterates.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let top = distinct.last().copied().unwrap_or(f64::NAN);
        println!(
            "tau_S = {:.3}: {:3} distinct values, max {top:+.4}",
            p.value,
            distinct.len()
        );
    }
    for t in boundary_touches(&nf, &result, &sim, &opts, 0.02, 1e-7)? {
        println!(
            "orbit reaches z = 0 near tau_S = {:.5} (closest {:+.1e})",
            t.value, t.closest
        );
    }
    Ok(())
}
