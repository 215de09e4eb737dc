//! Feigin classification of a boundary equilibrium bifurcation, checked
//! against the admissibility of both equilibria on either side of mu = 0.

use filippov_beb::beb::{brute_force_verdict, feigin_classify, pseudo_equilibrium, regular_equilibrium};
use filippov_beb::smallmat::Matrix;
use filippov_beb::PwlSystem;

fn main() -> filippov_beb::Result<()> {
    let sys = PwlSystem::new(
        Matrix::from_rows(&[[0.5, 1.0, 0.0], [-4.0, 0.0, 1.0], [2.0, 0.0, 0.0]])?,
        vec![0.0, 0.0, 1.0],
        vec![-1.0, 0.275, -1.0],
    )?;
    let report = feigin_classify(&sys)?;
    println!(
        "verdict {}  (N_L = {}, N_S = {}, sgn c1 = {})",
        report.verdict, report.n_l, report.n_s, report.c1_sign
    );
    println!(
        "alpha_L = {:+.4}, alpha_S = {:+.4}",
        report.alpha_l, report.alpha_s
    );

    for mu in [-1e-3, 1e-3] {
        let xl = regular_equilibrium(&sys, mu)?;
        let xs = pseudo_equilibrium(&sys, mu)?;
        println!(
            "mu = {mu:+e}: x^L admissible {}, x^S admissible {}",
            xl.admissible, xs.admissible
        );
    }
    println!("admissibility verdict {}", brute_force_verdict(&sys, 1e-3)?);
    Ok(())
}
