//! Return map on the sliding-exit section and its fixed points: one stable
//! cycle and two unstable ones coexist with a chaotic attractor.

use filippov_beb::dynamics::{
    fixed_points, map_lyapunov, FixedPointOptions, LyapunovOptions, PoincareMap, SimOptions,
};
use filippov_beb::model::{from_traces, TraceParams3D};

fn main() -> filippov_beb::Result<()> {
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
    let sim = SimOptions::default();
    let report = fixed_points(&nf, (-3.5, -0.1), &sim, &FixedPointOptions::default())?;
    for p in &report.fixed_points {
        let kind = if p.stable { "stable" } else { "unstable" };
        println!("z* = {:+.8}  P'(z*) = {:+.4}  {kind}", p.z, p.multiplier);
    }
    println!("{} grid points undefined", report.undefined.len());

    let map = PoincareMap::new(&nf, &sim)?;
    let mut z = -1.0;
    for _ in 0..5 {
        let Some(next) = map.eval(z) else { break };
        z = next;
        print!("{z:.4} ");
    }
    println!();
    let lyap = map_lyapunov(&nf, -1.0, 2000, &sim, &LyapunovOptions::default())?;
    println!("Lyapunov exponent of the orbit from z = -1: {lyap:.4}");
    Ok(())
}
