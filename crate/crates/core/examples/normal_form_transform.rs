//! Reduce an observable system to companion form and confirm that the
//! classification survives the change of coordinates.

use filippov_beb::beb::feigin_classify;
use filippov_beb::model::embed;
use filippov_beb::normal_form::to_normal_form;
use filippov_beb::smallmat::Matrix;
use filippov_beb::PwlSystem;

fn main() -> filippov_beb::Result<()> {
    let sys = PwlSystem::new(
        Matrix::from_rows(&[[0.3, -1.2, 0.7], [1.1, 0.4, -0.5], [-0.6, 0.9, -0.8]])?,
        vec![0.5, -1.0, 0.8],
        vec![-1.0, 0.6, 0.3],
    )?;
    let (nf, rec) = to_normal_form(&sys, 0.5)?;
    println!("a = {:?}", nf.a);
    println!("d = {:?}, mu = {}", nf.d(), nf.mu);
    println!(
        "scale s = {:.6}, conjugation residual {:.2e}",
        rec.s, rec.conjugation_residual
    );
    println!(
        "verdict before {}, after {}",
        feigin_classify(&sys)?.verdict,
        feigin_classify(&embed(&nf))?.verdict
    );
    Ok(())
}
