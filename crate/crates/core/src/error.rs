use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The transform is undefined at the requested point (inside the support,
    /// at a pole, or in the wrong half-plane).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate polynomial: every coefficient is below the trim threshold")]
    Degenerate,

    #[error("no physical root at z = {z}: {} candidates rejected", roots.len())]
    Selection { z: Complex64, roots: Vec<Complex64> },

    #[error("grid does not bracket the support (mass = {mass:.6})")]
    Grid { mass: f64 },

    #[error("no real root of the inverse relation above the bulk edge for w = {w}")]
    NoRoot { w: f64 },

    #[error("{} roots of the inverse relation survive the filters", roots.len())]
    Ambiguity { w: f64, roots: Vec<f64> },

    #[error("density mass {mass:.6} outside [0.99, 1.01]")]
    Mass { mass: f64 },

    #[error("simulation of {elements} matrix entries exceeds the cap of {cap}")]
    MemoryGuard { elements: usize, cap: usize },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Machine-readable payload describing the failure.
    pub fn diagnostic(&self) -> Value {
        let pair = |z: &Complex64| json!([z.re, z.im]);
        match self {
            Error::Selection { z, roots } => json!({
                "kind": "selection",
                "z": pair(z),
                "roots": roots.iter().map(pair).collect::<Vec<_>>(),
            }),
            Error::Grid { mass } => json!({ "kind": "grid", "mass": mass }),
            Error::NoRoot { w } => json!({ "kind": "no_root", "w": w }),
            Error::Ambiguity { w, roots } => json!({ "kind": "ambiguity", "w": w, "roots": roots }),
            Error::Mass { mass } => json!({ "kind": "mass", "mass": mass }),
            Error::MemoryGuard { elements, cap } => {
                json!({ "kind": "memory_guard", "elements": elements, "cap": cap })
            }
            other => json!({ "kind": other.kind(), "message": other.to_string() }),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::Domain(_) => "domain",
            Error::Degenerate => "degenerate",
            Error::Selection { .. } => "selection",
            Error::Grid { .. } => "grid",
            Error::NoRoot { .. } => "no_root",
            Error::Ambiguity { .. } => "ambiguity",
            Error::Mass { .. } => "mass",
            Error::MemoryGuard { .. } => "memory_guard",
            Error::Linalg(_) => "linalg",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// True for failures caused by bad user input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidParams(_) | Error::Io(_))
    }
}
