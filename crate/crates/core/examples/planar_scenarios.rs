//! The eight planar boundary-equilibrium scenarios, and the limit cycle that
//! a repelling focus with attracting sliding produces for mu < 0.

use filippov_beb::beb::classify_scenario_2d;
use filippov_beb::dynamics::{fixed_points, FixedPointOptions, SimOptions};
use filippov_beb::model::{from_traces, TraceParams2D};

fn main() -> filippov_beb::Result<()> {
    let triples = [(0.0, -1.0), (-1.0, 0.1), (1.0, 0.1), (0.2, 1.0)];
    for (tau_l, delta_l) in triples {
        for d2 in [-1.0, 1.0] {
            let s = classify_scenario_2d(TraceParams2D { tau_l, delta_l, d2 })?;
            println!("tau_L = {tau_l:+.1}, delta_L = {delta_l:+.1}, d2 = {d2:+.0}: {s}");
        }
    }

    let sim = SimOptions::default();
    for tau_l in [0.2, -0.2] {
        let nf = from_traces(
            TraceParams2D {
                tau_l,
                delta_l: 1.0,
                d2: -1.0,
            },
            -1.0,
        );
        let cycles = match fixed_points(&nf, (-2.0, 2.0), &sim, &FixedPointOptions::default()) {
            Ok(r) => r.fixed_points,
            Err(filippov_beb::Error::NoBracket) => Vec::new(),
            Err(e) => return Err(e),
        };
        println!(
            "tau_L = {tau_l:+.1}, mu = -1: {} cycle(s) {:?}",
            cycles.len(),
            cycles
        );
    }
    Ok(())
}
