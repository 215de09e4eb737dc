//! One orbit of the three-dimensional normal form, showing how it alternates
//! between the left region, the right region and sliding.

use std::collections::BTreeMap;

use filippov_beb::dynamics::{integrate_normal_form, SimOptions};
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
    let traj = integrate_normal_form(&nf, &[0.0, 0.0, -1.0], 200.0, &SimOptions::default())?;

    let mut counts = BTreeMap::new();
    for e in &traj.events {
        *counts.entry(format!("{:?}", e.kind)).or_insert(0) += 1;
    }
    println!("{} segments, events {counts:?}", traj.segments.len());
    for e in traj.events.iter().take(6) {
        println!("t = {:8.4}  {:?}  x = {:.4?}", e.t, e.kind, e.x);
    }
    println!(
        "stopped by {:?} at {:.4?}",
        traj.termination(),
        traj.final_state()
    );
    Ok(())
}
