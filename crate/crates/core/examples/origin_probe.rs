//! Every eigenvalue of C and of the sliding Jacobian is stable, yet the
//! boundary equilibrium at mu = 0 repels: return amplitudes grow by a fixed
//! ratio on each circuit.

use filippov_beb::dynamics::{origin_stability_probe, ProbeOptions, SimOptions};
use filippov_beb::model::{embed, from_traces, TraceParams3D};
use filippov_beb::sliding::scaled_sliding_system;
use filippov_beb::smallmat::spectrum;

fn main() -> filippov_beb::Result<()> {
    let nf = from_traces(
        TraceParams3D {
            tau_l: -0.3,
            sigma_l: 0.4,
            delta_l: -0.1,
            tau_s: -0.2,
            delta_s: 1.0,
        },
        0.0,
    );
    let sys = embed(&nf);
    println!("eig C      {:.4?}", spectrum(&sys.a)?.eigenvalues);
    println!(
        "eig Mtilde {:.4?}",
        spectrum(&scaled_sliding_system(&sys)?.m_tilde)?.eigenvalues
    );

    let report = origin_stability_probe(&nf, 1.0, &SimOptions::default(), &ProbeOptions::default())?;
    println!("verdict {:?}", report.verdict);
    for l in &report.launches {
        let shown: Vec<String> = l.ratios.iter().take(5).map(|r| format!("{r:.6}")).collect();
        println!(
            "z0 = {:+.0e}: {} returns, ratios {}",
            l.z0,
            l.ratios.len(),
            shown.join(" ")
        );
    }
    Ok(())
}
