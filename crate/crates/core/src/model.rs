//! System descriptions: the truncated piecewise-linear Filippov system
//!
//! ```text
//! x' = A x + b mu   (x1 < 0)
//! x' = c            (x1 > 0)
//! ```
//!
//! and its companion-matrix normal form, together with the JSON schema used
//! to read and write them.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::smallmat::Matrix;

/// A sign stored exactly, used for `d_1` of the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn of(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Plus)
        } else if x < 0.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// Truncated local Filippov system with switching surface `x1 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PwlSystem {
    pub a: Matrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl PwlSystem {
    pub fn new(a: Matrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let n = a.dim();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "system dimension must be at least 1".into(),
            ));
        }
        if b.len() != n || c.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {n}x{n} but b has {} entries and c has {}",
                b.len(),
                c.len()
            )));
        }
        if b.iter().chain(&c).any(|v| !v.is_finite()) || !a.is_finite() {
            return Err(Error::Schema("non-finite system coefficient".into()));
        }
        Ok(PwlSystem { a, b, c })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn c1(&self) -> f64 {
        self.c[0]
    }

    /// `A x + b mu`.
    pub fn left_field(&self, x: &[f64], mu: f64) -> Vec<f64> {
        let mut f = self.a.mul_vec(x);
        for (fi, bi) in f.iter_mut().zip(&self.b) {
            *fi += bi * mu;
        }
        f
    }

    /// First component of the left field, `(A x + b mu)_1`.
    pub fn left_normal(&self, x: &[f64], mu: f64) -> f64 {
        crate::smallmat::dot(self.a.row(0), x) + self.b[0] * mu
    }

    pub fn right_field(&self) -> &[f64] {
        &self.c
    }

    pub(crate) fn require_c1(&self) -> Result<f64> {
        let c1 = self.c1();
        if c1 == 0.0 {
            Err(Error::ZeroC1)
        } else {
            Ok(c1)
        }
    }
}

/// Normal form `x' = C x + e_n mu` (x1 < 0), `x' = d` (x1 > 0) with `C` the
/// companion matrix of `a` and `d_1 = +-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormParams {
    pub a: Vec<f64>,
    pub d1: Sign,
    /// `d_2, ..., d_n`.
    pub d_tail: Vec<f64>,
    pub mu: f64,
}

impl NormalFormParams {
    /// Validating constructor; `d[0]` must be exactly `-1` or `+1`.
    pub fn new(a: Vec<f64>, d: &[f64], mu: f64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::DimensionMismatch("normal form needs n >= 1".into()));
        }
        if d.len() != a.len() {
            return Err(Error::DimensionMismatch(format!(
                "a has {} entries but d has {}",
                a.len(),
                d.len()
            )));
        }
        if a.iter()
            .chain(d)
            .chain(std::iter::once(&mu))
            .any(|v| !v.is_finite())
        {
            return Err(Error::Schema("non-finite normal form coefficient".into()));
        }
        let d1 = match d[0] {
            1.0 => Sign::Plus,
            -1.0 => Sign::Minus,
            v => return Err(Error::NonUnitD1(v)),
        };
        Ok(NormalFormParams {
            a,
            d1,
            d_tail: d[1..].to_vec(),
            mu,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn d(&self) -> Vec<f64> {
        std::iter::once(self.d1.value())
            .chain(self.d_tail.iter().copied())
            .collect()
    }

    pub fn companion(&self) -> Matrix {
        Matrix::companion(&self.a)
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        NormalFormParams { mu, ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "normal_form": { "a": self.a, "d": self.d(), "mu": self.mu } })
    }
}

/// Planar normal form with `d_1 = -1`: `C = [[tau_L, 1], [-delta_L, 0]]`, `d = (-1, d_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceParams2D {
    pub tau_l: f64,
    pub delta_l: f64,
    pub d2: f64,
}

/// Three-dimensional normal form with `d_1 = -1`, parametrised by the trace,
/// second trace and determinant of `C` and the trace and determinant of the
/// sliding Jacobian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceParams3D {
    pub tau_l: f64,
    pub sigma_l: f64,
    pub delta_l: f64,
    pub tau_s: f64,
    pub delta_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceParams {
    Planar(TraceParams2D),
    Spatial(TraceParams3D),
}

impl From<TraceParams2D> for TraceParams {
    fn from(p: TraceParams2D) -> Self {
        TraceParams::Planar(p)
    }
}

impl From<TraceParams3D> for TraceParams {
    fn from(p: TraceParams3D) -> Self {
        TraceParams::Spatial(p)
    }
}

pub fn from_traces(p: impl Into<TraceParams>, mu: f64) -> NormalFormParams {
    match p.into() {
        TraceParams::Planar(p) => NormalFormParams {
            a: vec![-p.tau_l, p.delta_l],
            d1: Sign::Minus,
            d_tail: vec![p.d2],
            mu,
        },
        TraceParams::Spatial(p) => NormalFormParams {
            a: vec![-p.tau_l, p.sigma_l, -p.delta_l],
            d1: Sign::Minus,
            d_tail: vec![p.tau_s, -p.delta_s],
            mu,
        },
    }
}

/// Inverse of [`from_traces`]; only defined for `n in {2, 3}` with `d_1 = -1`.
pub fn to_traces(nf: &NormalFormParams) -> Result<TraceParams> {
    if nf.d1 != Sign::Minus {
        return Err(Error::Unsupported("trace parameters assume d1 = -1".into()));
    }
    match nf.dim() {
        2 => Ok(TraceParams::Planar(TraceParams2D {
            tau_l: -nf.a[0],
            delta_l: nf.a[1],
            d2: nf.d_tail[0],
        })),
        3 => Ok(TraceParams::Spatial(TraceParams3D {
            tau_l: -nf.a[0],
            sigma_l: nf.a[1],
            delta_l: -nf.a[2],
            tau_s: nf.d_tail[0],
            delta_s: -nf.d_tail[1],
        })),
        n => Err(Error::Unsupported(format!(
            "trace parameters need n in {{2, 3}}, got {n}"
        ))),
    }
}

/// The normal form as a general system: `A = C`, `b = e_n`, `c = d`.
pub fn embed(nf: &NormalFormParams) -> PwlSystem {
    let n = nf.dim();
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    PwlSystem {
        a: nf.companion(),
        b,
        c: nf.d(),
    }
}

/// A parsed system file.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedSystem {
    System { system: PwlSystem, mu: f64 },
    NormalForm(NormalFormParams),
}

impl ParsedSystem {
    pub fn dim(&self) -> usize {
        match self {
            ParsedSystem::System { system, .. } => system.dim(),
            ParsedSystem::NormalForm(nf) => nf.dim(),
        }
    }

    pub fn mu(&self) -> f64 {
        match self {
            ParsedSystem::System { mu, .. } => *mu,
            ParsedSystem::NormalForm(nf) => nf.mu,
        }
    }

    /// The general-form view (normal forms are embedded).
    pub fn system(&self) -> PwlSystem {
        match self {
            ParsedSystem::System { system, .. } => system.clone(),
            ParsedSystem::NormalForm(nf) => embed(nf),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ParsedSystem::System { system, mu } => json!({
                "system": { "A": system.a.to_rows(), "b": system.b, "c": system.c, "mu": mu }
            }),
            ParsedSystem::NormalForm(nf) => nf.to_json(),
        }
    }
}

/// A system file plus the free-form `run` block consumed by the CLI.
#[derive(Debug, Clone)]
pub struct Document {
    pub model: ParsedSystem,
    pub run: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    system: Option<RawSystem>,
    normal_form: Option<RawNormalForm>,
    traces: Option<RawTraces>,
    run: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    #[serde(default)]
    mu: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNormalForm {
    a: Vec<f64>,
    d: Vec<f64>,
    #[serde(default)]
    mu: f64,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawTraces {
    #[serde(rename = "tau_L")]
    tau_l: f64,
    #[serde(rename = "sigma_L")]
    sigma_l: Option<f64>,
    #[serde(rename = "delta_L")]
    delta_l: f64,
    #[serde(rename = "tau_S")]
    tau_s: f64,
    #[serde(rename = "delta_S")]
    delta_s: Option<f64>,
    #[serde(default)]
    mu: f64,
}

/// Parses a system file and validates dimensions.
pub fn parse_system(text: &str) -> Result<ParsedSystem> {
    parse_document(text).map(|d| d.model)
}

pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDocument = serde_json::from_str(text)?;
    let present = [
        raw.system.is_some(),
        raw.normal_form.is_some(),
        raw.traces.is_some(),
    ]
    .iter()
    .filter(|p| **p)
    .count();
    if present != 1 {
        return Err(Error::Schema(
            "exactly one of \"system\", \"normal_form\" or \"traces\" is required".into(),
        ));
    }
    let model = if let Some(s) = raw.system {
        let a = Matrix::from_rows(&s.a)?;
        ParsedSystem::System {
            system: PwlSystem::new(a, s.b, s.c)?,
            mu: s.mu,
        }
    } else if let Some(nf) = raw.normal_form {
        ParsedSystem::NormalForm(NormalFormParams::new(nf.a, &nf.d, nf.mu)?)
    } else {
        let t = raw.traces.expect("checked above");
        let params: TraceParams = match (t.sigma_l, t.delta_s) {
            (Some(sigma_l), Some(delta_s)) => TraceParams3D {
                tau_l: t.tau_l,
                sigma_l,
                delta_l: t.delta_l,
                tau_s: t.tau_s,
                delta_s,
            }
            .into(),
            // planar: the sliding Jacobian is the scalar d2, its own trace
            (None, None) => TraceParams2D {
                tau_l: t.tau_l,
                delta_l: t.delta_l,
                d2: t.tau_s,
            }
            .into(),
            _ => {
                return Err(Error::Schema(
                    "traces: sigma_L and delta_S must be given together (3D) or both omitted (2D)".into(),
                ))
            }
        };
        ParsedSystem::NormalForm(from_traces(params, t.mu))
    };
    Ok(Document { model, run: raw.run })
}
