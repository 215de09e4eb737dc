//! Property tests for the structural invariants of each module.

mod common;

use filippov_beb::beb::{classify_scenario_2d, feigin_classify, Verdict};
use filippov_beb::dynamics::{integrate_normal_form, EventKind, Mode, PoincareMap, SimOptions};
use filippov_beb::model::{embed, from_traces, to_traces, TraceParams, TraceParams2D, TraceParams3D};
use filippov_beb::normal_form::{observability, to_normal_form};
use filippov_beb::sliding::{
    region_type, scaled_sliding_field, scaled_sliding_system, sliding_field_true_time, RegionType,
};
use filippov_beb::smallmat::{faddeev_leverrier, spectrum, Matrix};
use filippov_beb::PwlSystem;
use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;

use common::{eigs, to_na};

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, n), n)
        .prop_map(|rows| Matrix::from_rows(&rows).unwrap())
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=6).prop_flat_map(matrix)
}

fn system() -> impl Strategy<Value = PwlSystem> {
    (2usize..=5).prop_flat_map(|n| {
        (
            matrix(n),
            prop::collection::vec(-2.0..2.0f64, n),
            prop::collection::vec(-2.0..2.0f64, n),
        )
            .prop_filter("c1 bounded away from 0", |(_, _, c)| c[0].abs() > 0.1)
            .prop_map(|(a, b, c)| PwlSystem::new(a, b, c).unwrap())
    })
}

fn det_shifted(m: &DMatrix<f64>, lambda: f64) -> f64 {
    let n = m.nrows();
    (DMatrix::<f64>::identity(n, n) * lambda - m).determinant()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_matches_nalgebra(a in any_matrix()) {
        let ours = spectrum(&a).unwrap();
        let oracle = eigs(&to_na(&a));
        let scale = 1.0 + a.norm_inf();
        // each eigenvalue has a partner in the oracle spectrum; defective
        // clusters are only resolved to about sqrt(eps)
        for l in &ours.eigenvalues {
            let d = oracle.iter().map(|o| (o - Complex::new(l.re, l.im)).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-5 * scale, "{l} not in {oracle:?}");
        }
        let product = ours.product();
        prop_assert!((product.re - a.det()).abs() <= 1e-6 * (1.0 + a.det().abs()));
        prop_assert!(product.im.abs() <= 1e-6 * (1.0 + a.det().abs()));
        let mut conj: Vec<_> = ours.eigenvalues.iter().map(|l| l.conj()).collect();
        for l in &ours.eigenvalues {
            let k = conj.iter().position(|c| (c - l).norm() <= 1e-9 * scale);
            prop_assert!(k.is_some(), "{l} has no conjugate");
            conj.swap_remove(k.unwrap());
        }
    }

    #[test]
    fn faddeev_leverrier_adjugate_and_char_poly(a in any_matrix(), lambda in -3.0..3.0f64) {
        let fl = faddeev_leverrier(&a);
        let n = a.dim();
        let prod = a.matmul(&fl.adjugate);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { fl.det } else { 0.0 };
                prop_assert!((prod[(i, j)] - want).abs() <= 1e-10 * (1.0 + a.norm_inf()).powi(n as i32));
            }
        }
        let oracle = det_shifted(&to_na(&a), lambda);
        prop_assert!(common::approx(fl.char_poly.eval_real(lambda), oracle, 1e-9));
    }

    #[test]
    fn char_poly_from_roots(a in any_matrix()) {
        let roots = spectrum(&a).unwrap().eigenvalues;
        // expand prod (lambda - l_i) into monic coefficients
        let mut poly = vec![Complex::new(1.0, 0.0)];
        for l in &roots {
            let mut next = poly.clone();
            next.push(Complex::new(0.0, 0.0));
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] -= c * Complex::new(l.re, l.im);
            }
            poly = next;
        }
        let coeffs = faddeev_leverrier(&a).char_poly.coeffs;
        let scale = (1.0 + a.norm_inf()).powi(a.dim() as i32);
        for (k, c) in coeffs.iter().enumerate() {
            prop_assert!((poly[k + 1].re - c).abs() <= 1e-6 * scale, "a_{} = {} vs {}", k + 1, c, poly[k + 1]);
        }
    }

    #[test]
    fn eigenvalue_count_parities(a in any_matrix()) {
        let spec = spectrum(&a).unwrap();
        if let (Ok(n_real), Ok(n_all)) = (spec.count_real_positive(), spec.count_positive_real_part()) {
            prop_assert_eq!(n_real % 2, n_all % 2);
            let neg_det = a.scale(-1.0).det();
            prop_assert_eq!(if n_real % 2 == 0 { 1.0 } else { -1.0 }, neg_det.signum());
        }
    }

    #[test]
    fn traces_round_trip(t in (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64), mu in -2.0..2.0f64) {
        let p3 = TraceParams3D { tau_l: t.0, sigma_l: t.1, delta_l: t.2, tau_s: t.3, delta_s: t.4 };
        prop_assert_eq!(to_traces(&from_traces(p3, mu)).unwrap(), TraceParams::Spatial(p3));
        let p2 = TraceParams2D { tau_l: t.0, delta_l: t.1, d2: t.2 };
        prop_assert_eq!(to_traces(&from_traces(p2, mu)).unwrap(), TraceParams::Planar(p2));
    }

    #[test]
    fn sliding_jacobian_structure(sys in system(), lambdas in prop::collection::vec(-3.0..3.0f64, 5)) {
        let s = scaled_sliding_system(&sys).unwrap();
        prop_assert!(s.first_row_residual() <= 1e-12);
        let m = to_na(&s.m);
        let mt = to_na(&s.m_tilde);
        prop_assert!((&m - common::sliding_jacobian(&sys)).abs().max() <= 1e-12 * (1.0 + sys.a.norm_inf()));
        for l in lambdas {
            prop_assert!(common::approx(det_shifted(&m, l), l * det_shifted(&mt, l), 1e-8));
        }
    }

    #[test]
    fn sliding_fields_are_parallel(sys in system(), tail in prop::collection::vec(-2.0..2.0f64, 5), mu in -1.0..1.0f64) {
        let n = sys.dim();
        let mut sys = sys;
        sys.c[0] = -sys.c[0].abs();
        let mut x = vec![0.0];
        x.extend_from_slice(&tail[..n - 1]);
        // F^L_1 is linear in (x, mu): flip both to land on the attracting side
        let mut mu = mu;
        if sys.left_normal(&x, mu) < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
            mu = -mu;
        }
        prop_assume!(region_type(&sys, &x, mu).unwrap() == RegionType::AttractingSliding);
        let truth = sliding_field_true_time(&sys, &x, mu).unwrap();
        let scaled = scaled_sliding_field(&sys, &x, mu);
        prop_assert_eq!(truth[0], 0.0);
        prop_assert_eq!(scaled[0], 0.0);
        // true-time field = scaled field / (1 - F^L_1 / c_1)
        let k = 1.0 - sys.left_normal(&x, mu) / sys.c[0];
        prop_assert!(k > 0.0);
        for i in 1..n {
            prop_assert!(common::approx(truth[i] * k, scaled[i], 1e-8));
        }
        let reduced = scaled_sliding_system(&sys).unwrap().field(&x[1..], mu);
        for i in 1..n {
            prop_assert!(common::approx(reduced[i - 1], scaled[i], 1e-10));
        }
    }

    #[test]
    fn classification_invariants(sys in system()) {
        prop_assume!(feigin_classify(&sys).is_ok());
        let r = feigin_classify(&sys).unwrap();
        let product = r.alpha_l * r.alpha_s;
        prop_assert_eq!(r.verdict == Verdict::Persistence, product < 0.0);
        let parity = if (r.n_l + r.n_s).is_multiple_of(2) { 1.0 } else { -1.0 } * f64::from(r.c1_sign);
        prop_assert_eq!(parity, product.signum());
        if let (Some(dl), Some(ds)) = (r.d_l, r.d_s) {
            let lhs = if (dl + ds + 1) % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(lhs, product.signum());
        }
    }

    #[test]
    fn scenario_scaling_invariance(tau in -2.0..2.0f64, delta in -2.0..2.0f64, d2 in -2.0..2.0f64, k in 0.1..10.0f64) {
        let p = TraceParams2D { tau_l: tau, delta_l: delta, d2 };
        let q = TraceParams2D { tau_l: k * tau, delta_l: k * k * delta, d2: k * d2 };
        if let Ok(s) = classify_scenario_2d(p) {
            // rounding can only matter right at the node/focus boundary
            let margin = (delta - tau * tau / 4.0).abs() > 1e-9 && tau.abs() > 1e-9;
            if margin {
                prop_assert_eq!(classify_scenario_2d(q).unwrap(), s);
            }
        }
    }

    #[test]
    fn normal_form_structure(sys in system()) {
        let obs = observability(&sys.a);
        let hadamard: f64 = (0..sys.dim()).map(|i| filippov_beb::smallmat::norm2(obs.phi.row(i))).product();
        // away from the boundary both observability tests agree
        if obs.det_phi.abs() > 1e-3 * hadamard {
            prop_assert!(obs.observable && obs.pbh_observable);
        }
        prop_assume!(obs.observable);
        if let Ok((nf, rec)) = to_normal_form(&sys, 1.0) {
            prop_assert_eq!(nf.d()[0].abs(), 1.0);
            prop_assert!(rec.r[0].abs() <= 1e-12);
            prop_assert_eq!(rec.q.row(0)[0], 1.0);
            prop_assert!(rec.q.row(0)[1..].iter().all(|v| v.abs() <= 1e-12));
        }
    }
}

#[test]
fn sweep_keeps_the_requested_iterates() {
    use filippov_beb::dynamics::{sweep, SweepOptions, SweepParameter};
    let opts = SweepOptions {
        transient: 40,
        keep: 15,
        ..SweepOptions::default()
    };
    let result = sweep(
        &param3d(0.275, 1.0),
        SweepParameter::TauS,
        &[0.2, 0.25, 0.275],
        &SimOptions::default(),
        &opts,
    )
    .unwrap();
    for p in &result.points {
        assert!(
            p.gap.is_some() || p.iterates.len() == opts.keep,
            "{} kept {}",
            p.value,
            p.iterates.len()
        );
    }
}

fn param3d(tau_s: f64, mu: f64) -> filippov_beb::NormalFormParams {
    from_traces(
        TraceParams3D {
            tau_l: -0.5,
            sigma_l: 4.0,
            delta_l: 2.0,
            tau_s,
            delta_s: 1.0,
        },
        mu,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectory_invariants(x0 in prop::collection::vec(-2.0..2.0f64, 3), tau_s in 0.1..0.3f64) {
        let nf = param3d(tau_s, 1.0);
        let sys = embed(&nf);
        let opts = SimOptions::default();
        let traj = match integrate_normal_form(&nf, &x0, 150.0, &opts) {
            Ok(t) => t,
            Err(filippov_beb::Error::RepellingForwardFlow) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let tol = 1e-9;
        for e in &traj.events {
            if matches!(e.kind, EventKind::CrossLtoR | EventKind::CrossRtoL | EventKind::EnterSliding | EventKind::ExitSliding) {
                prop_assert!(e.x[0].abs() <= opts.tol_event, "{:?} at x1 = {}", e.kind, e.x[0]);
            }
            if e.kind == EventKind::ExitSliding {
                prop_assert!(e.x[1].abs() <= 1e-8 && e.x[2] < 0.0, "exit at {:?}", e.x);
            }
        }
        for pair in traj.segments.windows(2) {
            let end = &pair[0].samples.last().unwrap().x;
            let start = &pair[1].samples[0].x;
            let gap = end.iter().zip(start).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(gap <= tol * (1.0 + end.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
        }
        for seg in &traj.segments {
            let first = &seg.samples[0];
            match seg.mode {
                Mode::RegularLeft => prop_assert!(seg.samples.iter().all(|s| s.x[0] <= tol)),
                Mode::Sliding => {
                    prop_assert!(seg.samples.iter().all(|s| s.x[0].abs() <= tol));
                    prop_assert!(seg.samples.iter().all(|s| sys.left_normal(&s.x, nf.mu) * sys.c[0] <= 1e-8));
                    prop_assert!(sys.left_normal(&first.x, nf.mu) > -1e-8);
                }
                Mode::RegularRight => {
                    prop_assert!(seg.samples.iter().all(|s| s.x[0] >= -tol));
                    for s in &seg.samples {
                        let dt = s.t - first.t;
                        for i in 0..3 {
                            let exact = first.x[i] + sys.c[i] * dt;
                            prop_assert!((s.x[i] - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn poincare_homogeneity(z in -3.5..-0.1f64, mu_index in 0usize..3) {
        let mu = [0.5, 1.0, 2.0][mu_index];
        let sim = SimOptions::default();
        let one = PoincareMap::new(&param3d(0.275, 1.0), &sim).unwrap().sample(z).unwrap();
        let scaled = PoincareMap::new(&param3d(0.275, mu), &sim).unwrap().sample(mu * z).unwrap();
        prop_assert_eq!(one.outcome, scaled.outcome);
        if let (Some(p1), Some(pm)) = (one.image, scaled.image) {
            prop_assert!((pm - mu * p1).abs() <= 1e-6 * (mu * p1).abs());
        }
    }
}

#[test]
fn stable_fixed_point_is_a_closed_orbit() {
    let nf = param3d(0.275, 1.0);
    let sim = SimOptions::default();
    let z = -1.8010094960530596;
    let image = PoincareMap::new(&nf, &sim)
        .unwrap()
        .sample(z)
        .unwrap()
        .image
        .unwrap();
    assert!((image - z).abs() < 1e-6);
    // the orbit itself: one sliding exit brings it back to (0, 0, z)
    let traj = integrate_normal_form(&nf, &[0.0, 0.0, z], 200.0, &sim).unwrap();
    let exit = traj
        .events
        .iter()
        .find(|e| e.kind == EventKind::ExitSliding && e.t > 0.0)
        .unwrap();
    assert!(exit.x[0].abs() < 1e-9 && exit.x[1].abs() < 1e-9 && (exit.x[2] - z).abs() < 1e-6);
}

/// Long orbits from random starts either keep returning to the section or settle.
#[test]
fn orbits_register_returns_or_settle() {
    use rand::Rng;
    let mut rng = common::rng(7);
    let nf = param3d(0.275, 1.0);
    let sim = SimOptions::default();
    for _ in 0..20 {
        let x0: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let Ok(traj) = integrate_normal_form(&nf, &x0, 500.0, &sim) else {
            continue;
        };
        let returns = traj
            .events
            .iter()
            .filter(|e| e.kind == EventKind::ExitSliding)
            .count();
        let end = traj.termination();
        assert!(
            returns >= 5
                || matches!(
                    end,
                    Some(EventKind::ConvergedToXL | EventKind::ConvergedToXS | EventKind::HitEscapeRadius)
                ),
            "x0 = {x0:?}: {returns} returns, ended by {end:?}"
        );
    }
}
