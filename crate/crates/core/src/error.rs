use thiserror::Error;

/// Every failure the library can report.
///
/// Variants fall into two families: degenerate inputs that violate a
/// hypothesis of the analysis (the caller asked a question that has no
/// generic answer) and plumbing failures (bad files, bad schemas).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("eigenvalue refinement did not converge (residual {residual:.3e})")]
    ConvergenceFailure { residual: f64 },
    #[error("eigenvalue {re:.3e}{im:+.3e}i lies on the imaginary axis within tolerance: parity undecidable")]
    AmbiguousEigenvalue { re: f64, im: f64 },

    #[error("schema error: {0}")]
    Schema(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("normal form requires |d1| = 1, got d1 = {0}")]
    NonUnitD1(f64),

    #[error("point is not on the switching surface (x1 = {0:.3e})")]
    OffSurface(f64),
    #[error("point is not in a sliding region (chi = {0:.3e})")]
    NotSlidingRegion(f64),
    #[error("sliding denominator F^L_1 - F^R_1 = {0:.3e} vanishes")]
    DegenerateDenominator(f64),
    #[error("c1 = 0: the right-hand field is tangent to the switching surface")]
    ZeroC1,

    #[error("det(A) = {0:.3e}: the left Jacobian is singular")]
    SingularA(f64),
    #[error("det(Mtilde) = {0:.3e}: the sliding Jacobian is singular")]
    SingularMtilde(f64),
    #[error("rho^T b = {0:.3e}: transversality condition fails")]
    NonTransversal(f64),
    #[error("rho^T c = {0:.3e} vanishes")]
    ZeroRhoC(f64),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),

    #[error("det(Phi) = {det:.3e}: system is not observable from x1")]
    NotObservable { det: f64 },
    #[error("s = {0:.3e}: normal-form scaling degenerates (non-transversal BEB)")]
    ZeroS(f64),

    #[error("tangency reached on the switching surface at t = {t:.6}")]
    TangencyStop { t: f64 },
    #[error("forward flow would leave a repelling sliding region (non-unique)")]
    RepellingForwardFlow,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("no sign change of P(z) - z found on the grid")]
    NoBracket,
    #[error("Poincare orbit undefined after {iterate} iterates ({reason})")]
    UndefinedOrbit { iterate: usize, reason: String },
    #[error("stability probe inconclusive: return ratios straddle 1")]
    Inconclusive,

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// True for refusals caused by a degenerate (non-generic) input rather
    /// than by malformed data. The CLI maps these to exit code 2.
    pub fn is_degenerate(&self) -> bool {
        !matches!(
            self,
            Error::Schema(_) | Error::DimensionMismatch(_) | Error::NonUnitD1(_) | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.to_string())
        } else {
            Error::Schema(e.to_string())
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
