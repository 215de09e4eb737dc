//! Equilibria, admissibility and classification of boundary equilibrium
//! bifurcations (BEBs) of the truncated system.
//!
//! A BEB is a *persistence* when the regular equilibrium `x^L` and the
//! pseudo-equilibrium `x^S` are admissible for opposite signs of `mu`, and a
//! *nonsmooth-fold* when they are admissible on the same side and collide.
//! [`feigin_classify`] decides this twice, once from the eigenvalue parity
//! formula and once from the signs of `alpha_L` and `alpha_S`, and refuses to
//! answer if the two routes disagree.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{PwlSystem, TraceParams2D};
use crate::sliding::{scaled_sliding_system, SlidingSystem};
use crate::smallmat::{dot, faddeev_leverrier, spectrum, FaddeevLeverrier, Matrix, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Persistence,
    NonsmoothFold,
}

impl Verdict {
    /// Persistence iff `sign < 0`.
    pub fn from_sign(sign: f64) -> Verdict {
        if sign < 0.0 {
            Verdict::Persistence
        } else {
            Verdict::NonsmoothFold
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Persistence => write!(f, "Persistence"),
            Verdict::NonsmoothFold => write!(f, "NonsmoothFold"),
        }
    }
}

/// An equilibrium at a given `mu` and whether it lies where its vector field applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    pub x: Vec<f64>,
    pub admissible: bool,
}

fn singular_tol(m: &Matrix) -> f64 {
    1e-12 * m.norm_inf().max(1.0).powi(m.dim() as i32)
}

fn checked_fl(a: &Matrix) -> Result<FaddeevLeverrier> {
    let fl = faddeev_leverrier(a);
    if fl.det.abs() <= singular_tol(a) {
        return Err(Error::SingularA(fl.det));
    }
    Ok(fl)
}

/// `x^L(mu) = -A^(-1) b mu`, admissible iff `x^L_1 < 0`.
pub fn regular_equilibrium(sys: &PwlSystem, mu: f64) -> Result<Equilibrium> {
    if sys.c.iter().all(|v| *v == 0.0) {
        return Err(Error::Unsupported(
            "c = 0: the right field has equilibria everywhere".into(),
        ));
    }
    let fl = checked_fl(&sys.a)?;
    let x = xl_direction(sys, &fl)
        .into_iter()
        .map(|v| v * mu)
        .collect::<Vec<_>>();
    let admissible = x[0] < 0.0;
    Ok(Equilibrium { x, admissible })
}

/// `-A^(-1) b`.
fn xl_direction(sys: &PwlSystem, fl: &FaddeevLeverrier) -> Vec<f64> {
    fl.adjugate
        .mul_vec(&sys.b)
        .into_iter()
        .map(|v| -v / fl.det)
        .collect()
}

fn checked_sliding(sys: &PwlSystem) -> Result<(SlidingSystem, FaddeevLeverrier)> {
    let s = scaled_sliding_system(sys)?;
    let fl = faddeev_leverrier(&s.m_tilde);
    if fl.det.abs() <= singular_tol(&s.m_tilde) {
        return Err(Error::SingularMtilde(fl.det));
    }
    Ok((s, fl))
}

/// `x^S(mu) / mu` on the surface, from `Mtilde x~ = -forcing`.
fn xs_direction(s: &SlidingSystem, fl: &FaddeevLeverrier) -> Vec<f64> {
    std::iter::once(0.0)
        .chain(fl.adjugate.mul_vec(&s.forcing).into_iter().map(|v| -v / fl.det))
        .collect()
}

/// Pseudo-equilibrium: the zero of the sliding field on `x1 = 0`, admissible
/// iff it lies in a sliding region (`chi < 0`).
pub fn pseudo_equilibrium(sys: &PwlSystem, mu: f64) -> Result<Equilibrium> {
    let (s, fl) = checked_sliding(sys)?;
    let x: Vec<f64> = xs_direction(&s, &fl).into_iter().map(|v| v * mu).collect();
    let chi = sys.left_normal(&x, mu) * sys.c1();
    Ok(Equilibrium {
        x,
        admissible: chi < 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alphas {
    /// `x^L_1(mu) = alpha_L mu`.
    pub alpha_l: f64,
    /// `chi(x^S(mu); mu) = alpha_S mu`.
    pub alpha_s: f64,
    /// `e_1^T adj(A)`.
    pub rho: Vec<f64>,
    pub rho_b: f64,
    pub transversal: bool,
}

/// `alpha_L = -rho^T b / det(A)` and `alpha_S = rho^T b c_1 / det(Mtilde)`.
pub fn alphas(sys: &PwlSystem) -> Result<Alphas> {
    let c1 = sys.require_c1()?;
    let fl = checked_fl(&sys.a)?;
    let (_, fl_s) = checked_sliding(sys)?;
    let rho = fl.adjugate.row(0).to_vec();
    let rho_b = dot(&rho, &sys.b);
    let scale = crate::smallmat::norm_inf(&rho) * crate::smallmat::norm_inf(&sys.b);
    if rho_b.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) || rho_b == 0.0 {
        return Err(Error::NonTransversal(rho_b));
    }
    Ok(Alphas {
        alpha_l: -rho_b / fl.det,
        alpha_s: rho_b * c1 / fl_s.det,
        rho,
        rho_b,
        transversal: true,
    })
}

/// Everything known about a BEB of the truncated system.
#[derive(Debug, Clone, Serialize)]
pub struct BebReport {
    pub n: usize,
    /// `x^L(mu) = xl_per_mu * mu`.
    pub xl_per_mu: Vec<f64>,
    /// `x^S(mu) = xs_per_mu * mu`.
    pub xs_per_mu: Vec<f64>,
    pub alpha_l: f64,
    pub alpha_s: f64,
    pub rho: Vec<f64>,
    pub det_a: f64,
    pub det_m_tilde: f64,
    pub n_l: usize,
    pub n_s: usize,
    /// Unstable manifold dimensions; `None` when an eigenvalue sits on the imaginary axis.
    pub d_l: Option<usize>,
    pub d_s: Option<usize>,
    pub c1_sign: i8,
    pub verdict: Verdict,
    /// Verdict from `(-1)^(N_L + N_S) sgn(c_1)`.
    pub parity_verdict: Verdict,
    /// Verdict from `sgn(alpha_L alpha_S)`.
    pub direct_verdict: Verdict,
    pub transversal: bool,
    pub eigenvalues_a: Vec<[f64; 2]>,
    pub eigenvalues_m_tilde: Vec<[f64; 2]>,
}

fn as_pairs(s: &Spectrum) -> Vec<[f64; 2]> {
    s.eigenvalues.iter().map(|l| [l.re, l.im]).collect()
}

fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Feigin classification of the BEB at `mu = 0`.
pub fn feigin_classify(sys: &PwlSystem) -> Result<BebReport> {
    let al = alphas(sys)?;
    let c1 = sys.c1();
    let fl = checked_fl(&sys.a)?;
    let (s, fl_s) = checked_sliding(sys)?;
    let spec_a = spectrum(&sys.a)?;
    let spec_s = spectrum(&s.m_tilde)?;
    let n_l = spec_a.count_real_positive()?;
    let n_s = spec_s.count_real_positive()?;
    let d_l = spec_a.count_positive_real_part().ok();
    let d_s = spec_s
        .count_positive_real_part()
        .ok()
        .map(|d| if c1 > 0.0 { d + 1 } else { d });

    let c1_sign = c1.signum();
    let parity_sign = parity(n_l + n_s) * c1_sign;
    let direct_sign = (al.alpha_l * al.alpha_s).signum();
    let parity_verdict = Verdict::from_sign(parity_sign);
    let direct_verdict = Verdict::from_sign(direct_sign);
    if parity_verdict != direct_verdict {
        return Err(Error::InternalInconsistency(format!(
            "parity formula gives {parity_verdict} (N_L = {n_l}, N_S = {n_s}, sgn c1 = {c1_sign}) \
             but alpha_L alpha_S = {:.3e} gives {direct_verdict}",
            al.alpha_l * al.alpha_s
        )));
    }
    if let (Some(dl), Some(ds)) = (d_l, d_s) {
        if Verdict::from_sign(parity(dl + ds + 1)) != direct_verdict {
            return Err(Error::InternalInconsistency(format!(
                "unstable dimensions D_L = {dl}, D_S = {ds} contradict {direct_verdict}"
            )));
        }
    }
    Ok(BebReport {
        n: sys.dim(),
        xl_per_mu: xl_direction(sys, &fl),
        xs_per_mu: xs_direction(&s, &fl_s),
        alpha_l: al.alpha_l,
        alpha_s: al.alpha_s,
        rho: al.rho,
        det_a: fl.det,
        det_m_tilde: fl_s.det,
        n_l,
        n_s,
        d_l,
        d_s,
        c1_sign: c1_sign as i8,
        verdict: direct_verdict,
        parity_verdict,
        direct_verdict,
        transversal: al.transversal,
        eigenvalues_a: as_pairs(&spec_a),
        eigenvalues_m_tilde: as_pairs(&spec_s),
    })
}

/// Verdict read off from admissibility of both equilibria at `mu = +-eps`,
/// without using any of the alpha formulas.
pub fn brute_force_verdict(sys: &PwlSystem, eps: f64) -> Result<Verdict> {
    let l_plus = regular_equilibrium(sys, eps)?.admissible;
    let l_minus = regular_equilibrium(sys, -eps)?.admissible;
    let s_plus = pseudo_equilibrium(sys, eps)?.admissible;
    let s_minus = pseudo_equilibrium(sys, -eps)?.admissible;
    if l_plus == l_minus || s_plus == s_minus {
        return Err(Error::InternalInconsistency(
            "an equilibrium is admissible on both or neither side of the BEB".into(),
        ));
    }
    Ok(if l_plus == s_plus {
        Verdict::NonsmoothFold
    } else {
        Verdict::Persistence
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// `det(Mtilde)` against `rho^T c / c_1`.
pub fn lemma5_identity(sys: &PwlSystem) -> Result<IdentityCheck> {
    let c1 = sys.require_c1()?;
    let fl = checked_fl(&sys.a)?;
    let s = scaled_sliding_system(sys)?;
    let lhs = s.m_tilde.det();
    let rhs = dot(fl.adjugate.row(0), &sys.c) / c1;
    Ok(IdentityCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / (1.0 + lhs.abs()),
    })
}

/// Slope `rho^T b c_1 / rho^T c` of `F^L_1(x^S(mu); mu)` at `mu = 0`.
pub fn lemma4_coefficient(sys: &PwlSystem) -> Result<f64> {
    let c1 = sys.require_c1()?;
    let fl = checked_fl(&sys.a)?;
    let rho = fl.adjugate.row(0);
    let rho_c = dot(rho, &sys.c);
    if rho_c.abs() <= 1e-12 * crate::smallmat::norm_inf(rho) * crate::smallmat::norm_inf(&sys.c) {
        return Err(Error::ZeroRhoC(rho_c));
    }
    Ok(dot(rho, &sys.b) * c1 / rho_c)
}

/// Central-difference slope of `F^L_1(x^S(mu); mu)` at `mu = 0`.
pub fn lemma4_finite_difference(sys: &PwlSystem, h: f64) -> Result<f64> {
    let plus = pseudo_equilibrium(sys, h)?;
    let minus = pseudo_equilibrium(sys, -h)?;
    Ok((sys.left_normal(&plus.x, h) - sys.left_normal(&minus.x, -h)) / (2.0 * h))
}

/// A parameter value at which `A` or `Mtilde` loses invertibility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodimTwoFlag {
    pub parameter: f64,
    pub det_a: f64,
    pub det_m_tilde: f64,
    pub note: String,
}

/// Scans a user-supplied path of systems and flags points where one of the
/// equilibria has a zero eigenvalue (codimension-two BEB). Purely diagnostic.
pub fn scan_codimension_two<I>(path: I, tol: f64) -> Vec<CodimTwoFlag>
where
    I: IntoIterator<Item = (f64, PwlSystem)>,
{
    path.into_iter()
        .filter_map(|(p, sys)| {
            let det_a = sys.a.det();
            let det_m = scaled_sliding_system(&sys)
                .map(|s| s.m_tilde.det())
                .unwrap_or(f64::NAN);
            let flag_a = det_a.abs() < tol;
            let flag_s = det_m.abs() < tol;
            (flag_a || flag_s).then(|| CodimTwoFlag {
                parameter: p,
                det_a,
                det_m_tilde: det_m,
                note: match (flag_a, flag_s) {
                    (true, true) => "codimension-two: zero eigenvalue of A and Mtilde",
                    (true, false) => "codimension-two: zero eigenvalue of A",
                    _ => "codimension-two: zero eigenvalue of Mtilde",
                }
                .to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumClass {
    Saddle,
    AttractingNode,
    RepellingNode,
    Focus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlidingDirection {
    /// `d_2 < 0`: sliding motion approaches the boundary equilibrium.
    SlidingToward,
    SlidingAway,
}

/// One of the eight generic planar boundary-equilibrium scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Scenario2D {
    pub equilibrium: EquilibriumClass,
    pub sliding: SlidingDirection,
}

impl fmt::Display for Scenario2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} x {:?}", self.equilibrium, self.sliding)
    }
}

pub fn classify_scenario_2d(p: TraceParams2D) -> Result<Scenario2D> {
    let TraceParams2D { tau_l, delta_l, d2 } = p;
    if ![tau_l, delta_l, d2].iter().all(|v| v.is_finite()) {
        return Err(Error::DegenerateScenario("non-finite parameter".into()));
    }
    let disc = tau_l * tau_l / 4.0;
    let tol = 1e-12 * (1.0 + delta_l.abs() + disc);
    if delta_l.abs() <= tol {
        return Err(Error::DegenerateScenario("delta_L = 0 (zero eigenvalue)".into()));
    }
    if (delta_l - disc).abs() <= tol {
        return Err(Error::DegenerateScenario(
            "delta_L = tau_L^2/4 (node-focus boundary)".into(),
        ));
    }
    if d2 == 0.0 {
        return Err(Error::DegenerateScenario(
            "d2 = 0 (sliding Jacobian singular)".into(),
        ));
    }
    let equilibrium = if delta_l < 0.0 {
        EquilibriumClass::Saddle
    } else if delta_l > disc {
        EquilibriumClass::Focus
    } else if tau_l < 0.0 {
        EquilibriumClass::AttractingNode
    } else if tau_l > 0.0 {
        EquilibriumClass::RepellingNode
    } else {
        return Err(Error::DegenerateScenario("tau_L = 0 for a node".into()));
    };
    let sliding = if d2 < 0.0 {
        SlidingDirection::SlidingToward
    } else {
        SlidingDirection::SlidingAway
    };
    Ok(Scenario2D { equilibrium, sliding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{embed, from_traces, NormalFormParams, TraceParams3D};

    fn focus_example() -> PwlSystem {
        PwlSystem::new(
            Matrix::from_rows(&[[-0.5, 1.0], [-2.0, 0.0]]).unwrap(),
            vec![0.0, 1.0],
            vec![-1.0, -1.0],
        )
        .unwrap()
    }

    fn param3d() -> PwlSystem {
        let p = TraceParams3D {
            tau_l: -0.5,
            sigma_l: 4.0,
            delta_l: 2.0,
            tau_s: 0.275,
            delta_s: 1.0,
        };
        embed(&from_traces(p, 1.0))
    }

    #[test]
    fn regular_equilibrium_of_normal_form() {
        let sys = embed(&NormalFormParams::new(vec![0.5, 2.0], &[-1.0, -1.0], 1.0).unwrap());
        let xl = regular_equilibrium(&sys, 1.0).unwrap();
        assert!((xl.x[0] - 0.5).abs() < 1e-15);
        assert!(!xl.admissible);
        let at_zero = regular_equilibrium(&sys, 0.0).unwrap();
        assert!(at_zero.x.iter().all(|v| *v == 0.0));

        let xl3 = regular_equilibrium(&param3d(), 1.0).unwrap();
        assert!((xl3.x[0] + 0.5).abs() < 1e-15);
        assert!(xl3.admissible);
    }

    #[test]
    fn singular_a_rejected() {
        let sys = PwlSystem::new(Matrix::diag(&[0.0, 1.0]), vec![1.0, 0.0], vec![-1.0, 0.0]).unwrap();
        assert!(matches!(regular_equilibrium(&sys, 1.0), Err(Error::SingularA(_))));
    }

    #[test]
    fn pseudo_equilibria() {
        let sys = param3d();
        let xs = pseudo_equilibrium(&sys, 1.0).unwrap();
        // [[0.275, 1], [-1, 0]] x~ = (0, -1)  =>  x~ = (1, -0.275)
        assert_eq!(xs.x[0], 0.0);
        assert!((xs.x[1] - 1.0).abs() < 1e-14);
        assert!((xs.x[2] + 0.275).abs() < 1e-14);
        assert!(xs.admissible);

        for (d2, mu) in [(-0.7, 1.0), (0.4, -2.0), (1.3, 0.5)] {
            let sys = embed(&NormalFormParams::new(vec![0.5, 2.0], &[-1.0, d2], mu).unwrap());
            let xs = pseudo_equilibrium(&sys, mu).unwrap();
            assert!((xs.x[1] + mu / d2).abs() < 1e-14);
        }
        assert!(pseudo_equilibrium(&sys, 0.0).unwrap().x.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn alphas_of_focus_example() {
        let al = alphas(&focus_example()).unwrap();
        assert_eq!(al.rho, vec![0.0, -1.0]);
        assert!((al.alpha_l - 0.5).abs() < 1e-15);
        assert!((al.alpha_s + 1.0).abs() < 1e-15);
        assert!(al.transversal);
    }

    #[test]
    fn normal_form_alpha_l_matches_equilibrium() {
        let nf = NormalFormParams::new(vec![0.3, -1.2, 0.7, 2.5], &[-1.0, 0.2, 0.4, -0.6], 1.0).unwrap();
        let al = alphas(&embed(&nf)).unwrap();
        assert!((al.alpha_l - 1.0 / 2.5).abs() < 1e-14);
    }

    #[test]
    fn classify_param3d_is_fold() {
        let r = feigin_classify(&param3d()).unwrap();
        assert_eq!(r.n_l, 1);
        assert_eq!(r.n_s, 0);
        assert_eq!(r.c1_sign, -1);
        assert_eq!(r.verdict, Verdict::NonsmoothFold);
        // saddle-focus with one unstable direction, unstable sliding focus
        assert_eq!(r.d_l, Some(1));
        assert_eq!(r.d_s, Some(2));
    }

    #[test]
    fn classify_focus_example_is_persistence() {
        let r = feigin_classify(&focus_example()).unwrap();
        assert_eq!((r.n_l, r.n_s), (0, 0));
        assert_eq!(r.verdict, Verdict::Persistence);
        assert_eq!((r.d_l, r.d_s), (Some(0), Some(0)));
    }

    #[test]
    fn repelling_c1_shifts_sliding_dimension() {
        let sys = PwlSystem::new(
            Matrix::from_rows(&[[-0.5, 1.0], [-2.0, 0.0]]).unwrap(),
            vec![0.0, 1.0],
            vec![1.0, -1.0],
        )
        .unwrap();
        let r = feigin_classify(&sys).unwrap();
        // Mtilde = -d2/d1 = 1 > 0 with c1 > 0: one unstable sliding direction plus the normal one
        assert_eq!(r.n_s, 1);
        assert_eq!(r.d_s, Some(2));
    }

    #[test]
    fn lemma5_on_focus_example() {
        let chk = lemma5_identity(&focus_example()).unwrap();
        assert!((chk.lhs + 1.0).abs() < 1e-15);
        assert!((chk.rhs + 1.0).abs() < 1e-15);
        assert_eq!(chk.residual, 0.0);
    }

    #[test]
    fn lemma5_with_c_along_normal() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 0.5], [-1.0, 0.3, 2.0], [0.7, -0.4, 1.1]]).unwrap();
        let sys = PwlSystem::new(a.clone(), vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]).unwrap();
        let chk = lemma5_identity(&sys).unwrap();
        let adj11 = faddeev_leverrier(&a).adjugate[(0, 0)];
        assert!((chk.rhs - adj11).abs() < 1e-14);
        assert!(chk.residual < 1e-12);
    }

    #[test]
    fn lemma4_on_focus_example() {
        let sys = focus_example();
        let k = lemma4_coefficient(&sys).unwrap();
        assert!((k - 1.0).abs() < 1e-15);
        let fd = lemma4_finite_difference(&sys, 1e-6).unwrap();
        assert!((fd - k).abs() < 1e-6);
        // chi(x^S) ~ k c1 mu reproduces alpha_S
        let al = alphas(&sys).unwrap();
        assert!((k * sys.c1() - al.alpha_s).abs() < 1e-14);
    }

    #[test]
    fn brute_force_agrees_on_examples() {
        assert_eq!(
            brute_force_verdict(&focus_example(), 1e-3).unwrap(),
            Verdict::Persistence
        );
        assert_eq!(
            brute_force_verdict(&param3d(), 1e-3).unwrap(),
            Verdict::NonsmoothFold
        );
    }

    #[test]
    fn codim_two_scan() {
        let path = [-0.1, 0.0, 0.1].map(|k| {
            let a = Matrix::from_rows(&[[k, 1.0], [0.0, -1.0]]).unwrap();
            (k, PwlSystem::new(a, vec![0.0, 1.0], vec![-1.0, 0.5]).unwrap())
        });
        let flags = scan_codimension_two(path, 1e-9);
        assert_eq!(flags.len(), 1);
        assert_eq!(flags[0].parameter, 0.0);
        assert!(flags[0].note.contains("A"));
    }

    #[test]
    fn scenario_examples() {
        let s = |t, d, d2| {
            classify_scenario_2d(TraceParams2D {
                tau_l: t,
                delta_l: d,
                d2,
            })
            .unwrap()
        };
        assert_eq!(
            s(0.0, -1.0, -1.0),
            Scenario2D {
                equilibrium: EquilibriumClass::Saddle,
                sliding: SlidingDirection::SlidingToward
            }
        );
        assert_eq!(
            s(-1.0, 0.1, 1.0),
            Scenario2D {
                equilibrium: EquilibriumClass::AttractingNode,
                sliding: SlidingDirection::SlidingAway
            }
        );
        assert_eq!(
            s(1.0, 5.0, -1.0),
            Scenario2D {
                equilibrium: EquilibriumClass::Focus,
                sliding: SlidingDirection::SlidingToward
            }
        );
        assert_eq!(s(1.0, 0.2, 1.0).equilibrium, EquilibriumClass::RepellingNode);
    }

    #[test]
    fn scenario_degeneracies() {
        let s = |t, d, d2| {
            classify_scenario_2d(TraceParams2D {
                tau_l: t,
                delta_l: d,
                d2,
            })
        };
        assert!(matches!(s(1.0, 0.0, 1.0), Err(Error::DegenerateScenario(_))));
        assert!(matches!(s(2.0, 1.0, 1.0), Err(Error::DegenerateScenario(_))));
        assert!(matches!(s(1.0, 5.0, 0.0), Err(Error::DegenerateScenario(_))));
    }
}
