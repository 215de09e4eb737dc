//! Sliding dynamics on the switching surface: the reduced Jacobian, its
//! spectrum and the pseudo-equilibrium.

use filippov_beb::beb::pseudo_equilibrium;
use filippov_beb::model::{embed, from_traces, TraceParams3D};
use filippov_beb::sliding::{region_type, scaled_sliding_system};
use filippov_beb::smallmat::spectrum;

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
    let sys = embed(&nf);
    let s = scaled_sliding_system(&sys)?;
    println!("Mtilde = {:?}", s.m_tilde.to_rows());
    println!("spectrum {:?}", spectrum(&s.m_tilde)?.eigenvalues);
    let xs = pseudo_equilibrium(&sys, nf.mu)?;
    println!("x^S = {:?} (admissible {})", xs.x, xs.admissible);
    for x2 in [-1.0, 1.0] {
        println!(
            "at (0, {x2}, 0): {:?}",
            region_type(&sys, &[0.0, x2, 0.0], nf.mu)?
        );
    }
    Ok(())
}
