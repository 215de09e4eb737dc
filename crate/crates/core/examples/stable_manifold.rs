//! Launch points whose orbit is captured by the stable focus accumulate on
//! the section where the focus's stable manifold crosses it.

use filippov_beb::dynamics::{converging_launches, stable_manifold_crossing, SimOptions};
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
    println!(
        "stable manifold of x^L meets the section at z = {:.6}",
        stable_manifold_crossing(&nf)?
    );
    let hits = converging_launches(&nf, (-2.26, -2.16), 200, &SimOptions::default())?;
    println!("{} launches in [-2.26, -2.16] converge to x^L", hits.len());
    for z in hits.iter().take(5) {
        println!("  z = {z:.9}");
    }
    Ok(())
}
