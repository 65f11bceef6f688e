//! Closed-form Cauchy, M- and N-transforms of the three base spectra
//! (Marčenko-Pastur, shifted semicircle, exponential-decay Toeplitz) and
//! the free-multiplicative composition of their N-transforms.
//!
//! Conventions:
//! * `G(z) = ∫ dμ(t) / (z - t)` maps the upper half-plane into the lower one.
//! * `M(z) = z G(z) - 1` and `N` is the functional inverse, `M(N(w)) = w`.
//! * Radicals use [`principal_sqrt`] (argument taken in `[0, 2π)`), except the
//!   spatial radical `√(α² + 4β²w)` of the semicircle N-transform, which must
//!   be continuous with `+α` at `w = 0` and therefore uses the usual
//!   `Re ≥ 0` square root (see [`spatial_sqrt`]).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Imaginary offset used to evaluate transforms on the real axis as a limit
/// from the upper half-plane.
pub const REAL_AXIS_GUARD: f64 = 1e-300;

/// Parameters `(c, α, β, r)` of the separable covariance model, plus the
/// derived Toeplitz constant `γ = (1 + r²) / (1 - r²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams")]
pub struct ModelParams {
    c: f64,
    alpha: f64,
    beta: f64,
    r: f64,
    gamma: f64,
}

#[derive(Deserialize)]
struct RawModelParams {
    c: f64,
    alpha: f64,
    beta: f64,
    r: f64,
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawModelParams) -> Result<Self> {
        ModelParams::new(raw.c, raw.alpha, raw.beta, raw.r)
    }
}

impl ModelParams {
    pub fn new(c: f64, alpha: f64, beta: f64, r: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::invalid(format!("c must lie in (0, 1), got {c}")));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::invalid(format!("beta must be >= 0, got {beta}")));
        }
        if !(0.0..1.0).contains(&r) {
            return Err(Error::invalid(format!("r must lie in [0, 1), got {r}")));
        }
        Ok(ModelParams { c, alpha, beta, r, gamma: toeplitz_gamma(r) })
    }

    /// `c = 0.5, α = 1, β = 0.5, r = 0.5`, the parameter set used throughout
    /// the validation suite.
    pub fn default_experiment() -> Self {
        ModelParams::new(0.5, 1.0, 0.5, 0.5).expect("default parameters are valid")
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_c(&self, c: f64) -> Result<Self> {
        ModelParams::new(c, self.alpha, self.beta, self.r)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        ModelParams::new(self.c, self.alpha, beta, self.r)
    }

    pub fn with_r(&self, r: f64) -> Result<Self> {
        ModelParams::new(self.c, self.alpha, self.beta, r)
    }

    /// First moment of the limiting spectral distribution of `C`.
    pub fn mean(&self) -> f64 {
        self.alpha
    }
}

pub fn toeplitz_gamma(r: f64) -> f64 {
    (1.0 + r * r) / (1.0 - r * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SupportInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        SupportInterval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// One of the three base spectral models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum BaseModel {
    MarchenkoPastur { c: f64 },
    ShiftedSemicircle { alpha: f64, beta: f64 },
    ExponentialToeplitz { r: f64 },
}

impl BaseModel {
    pub fn marchenko_pastur(c: f64) -> Result<Self> {
        let model = BaseModel::MarchenkoPastur { c };
        model.validate()?;
        Ok(model)
    }

    pub fn shifted_semicircle(alpha: f64, beta: f64) -> Result<Self> {
        let model = BaseModel::ShiftedSemicircle { alpha, beta };
        model.validate()?;
        Ok(model)
    }

    pub fn exponential_toeplitz(r: f64) -> Result<Self> {
        let model = BaseModel::ExponentialToeplitz { r };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseModel::MarchenkoPastur { c } if !(c > 0.0 && c < 1.0) => {
                Err(Error::invalid(format!("Marchenko-Pastur ratio must lie in (0, 1), got {c}")))
            }
            BaseModel::ShiftedSemicircle { alpha, beta } if !(alpha >= 0.0 && beta > 0.0) => {
                Err(Error::invalid(format!(
                    "shifted semicircle needs alpha >= 0 and beta > 0, got ({alpha}, {beta})"
                )))
            }
            BaseModel::ExponentialToeplitz { r } if !(0.0..1.0).contains(&r) => {
                Err(Error::invalid(format!("Toeplitz decay must lie in [0, 1), got {r}")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BaseModel::MarchenkoPastur { .. } => "marchenko-pastur",
            BaseModel::ShiftedSemicircle { .. } => "shifted-semicircle",
            BaseModel::ExponentialToeplitz { .. } => "exponential-toeplitz",
        }
    }

    pub fn support(&self) -> SupportInterval {
        match *self {
            BaseModel::MarchenkoPastur { c } => {
                SupportInterval::new((1.0 - c.sqrt()).powi(2), (1.0 + c.sqrt()).powi(2))
            }
            BaseModel::ShiftedSemicircle { alpha, beta } => {
                SupportInterval::new(alpha - 2.0 * beta, alpha + 2.0 * beta)
            }
            BaseModel::ExponentialToeplitz { r } => {
                SupportInterval::new((1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r))
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            BaseModel::ShiftedSemicircle { alpha, .. } => alpha,
            _ => 1.0,
        }
    }

    /// Analytic density of the model; zero outside the support.
    ///
    /// The Toeplitz density has integrable singularities at both edges and is
    /// reported as `+∞` exactly at an edge when `r > 0`.
    pub fn density(&self, x: f64) -> f64 {
        let SupportInterval { lo: a, hi: b } = self.support();
        match *self {
            BaseModel::MarchenkoPastur { c } => {
                if x <= a || x >= b {
                    0.0
                } else {
                    ((x - a) * (b - x)).sqrt() / (2.0 * PI * c * x)
                }
            }
            BaseModel::ShiftedSemicircle { alpha, beta } => {
                let d = x - alpha;
                if d.abs() >= 2.0 * beta {
                    0.0
                } else {
                    (4.0 * beta * beta - d * d).sqrt() / (2.0 * PI * beta * beta)
                }
            }
            BaseModel::ExponentialToeplitz { r } => {
                if r == 0.0 || x < a || x > b {
                    0.0
                } else if x == a || x == b {
                    f64::INFINITY
                } else {
                    1.0 / (PI * x * ((x - a) * (b - x)).sqrt())
                }
            }
        }
    }
}

/// Which transform to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Cauchy,
    M,
    N,
}

/// A complex evaluation point paired with the transform value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformValue {
    pub z: Complex64,
    pub value: Complex64,
}

pub fn evaluate(model: &BaseModel, kind: TransformKind, z: Complex64) -> Result<TransformValue> {
    let value = match kind {
        TransformKind::Cauchy => cauchy(model, z)?,
        TransformKind::M => m_transform(model, z)?,
        TransformKind::N => n_transform(model, z)?,
    };
    Ok(TransformValue { z, value })
}

/// `√|z| e^{iθ/2}` with `θ = arg z ∈ [0, 2π)`.
///
/// The branch cut lies along the positive real axis and the result is always
/// in the closed upper half-plane.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let mut theta = z.im.atan2(z.re);
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    let half = 0.5 * theta;
    Complex64::new(half.cos(), half.sin()) * z.norm().sqrt()
}

/// Square root of `α² + 4β²w` on the branch continuous with `+α` at `w = 0`.
///
/// This is the `Re ≥ 0` root (cut along the negative reals). On the image of
/// the semicircle M-transform the `[0, 2π)` convention returns the other root
/// of the N-transform quadratic.
pub fn spatial_sqrt(alpha: f64, beta: f64, w: Complex64) -> Complex64 {
    (alpha * alpha + 4.0 * beta * beta * w).sqrt()
}

fn guard_real_axis(model: &BaseModel, z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("non-finite argument {z}")));
    }
    if z.im < 0.0 {
        return Err(Error::domain(format!(
            "{} transform requires Im(z) >= 0, got {z}",
            model.name()
        )));
    }
    if z.im > 0.0 {
        return Ok(z);
    }
    let support = model.support();
    if support.contains(z.re) {
        return Err(Error::domain(format!(
            "z = {} lies inside the {} support [{}, {}]",
            z.re,
            model.name(),
            support.lo,
            support.hi
        )));
    }
    Ok(Complex64::new(z.re, REAL_AXIS_GUARD))
}

fn reject_origin(model: &BaseModel, z: Complex64) -> Result<()> {
    if z.re == 0.0 && z.im.abs() <= REAL_AXIS_GUARD {
        return Err(Error::domain(format!("{} transform has a pole at z = 0", model.name())));
    }
    Ok(())
}

/// Cauchy transform `G(z)` of a base model, for `Im(z) ≥ 0` outside the support.
pub fn cauchy(model: &BaseModel, z: Complex64) -> Result<Complex64> {
    model.validate()?;
    let z = guard_real_axis(model, z)?;
    match *model {
        BaseModel::MarchenkoPastur { c } => {
            reject_origin(model, z)?;
            let SupportInterval { lo: a, hi: b } = model.support();
            let s = principal_sqrt((z - a) * (z - b));
            let minus = z + c - 1.0 - s;
            let plus = z + c - 1.0 + s;
            // (z + c - 1)² - s² = 4cz, so both forms agree; pick the one
            // without cancellation.
            if minus.norm() >= plus.norm() {
                Ok(minus / (2.0 * c * z))
            } else {
                Ok(2.0 / plus)
            }
        }
        BaseModel::ShiftedSemicircle { alpha, beta } => {
            let u = z - alpha;
            let s = principal_sqrt(u * u - 4.0 * beta * beta);
            let minus = u - s;
            let plus = u + s;
            if minus.norm() >= plus.norm() {
                Ok(minus / (2.0 * beta * beta))
            } else {
                Ok(2.0 / plus)
            }
        }
        BaseModel::ExponentialToeplitz { .. } => {
            reject_origin(model, z)?;
            let m = toeplitz_m(model, z);
            Ok((m + 1.0) / z)
        }
    }
}

fn toeplitz_m(model: &BaseModel, z: Complex64) -> Complex64 {
    let SupportInterval { lo: a, hi: b } = model.support();
    1.0 / (principal_sqrt(z - b) * principal_sqrt(z - a))
}

/// M-transform `M(z) = z G(z) - 1`, using the dedicated closed form for the
/// Marčenko-Pastur and Toeplitz models.
pub fn m_transform(model: &BaseModel, z: Complex64) -> Result<Complex64> {
    model.validate()?;
    let z = guard_real_axis(model, z)?;
    match *model {
        BaseModel::MarchenkoPastur { c } => {
            let SupportInterval { lo: a, hi: b } = model.support();
            let s = principal_sqrt((z - a) * (z - b));
            let minus = z - c - 1.0 - s;
            let plus = z - c - 1.0 + s;
            // (z - c - 1)² - s² = 4c.
            if minus.norm() >= plus.norm() {
                Ok(minus / (2.0 * c))
            } else {
                Ok(2.0 / plus)
            }
        }
        BaseModel::ShiftedSemicircle { .. } => Ok(z * cauchy(model, z)? - 1.0),
        BaseModel::ExponentialToeplitz { .. } => {
            reject_origin(model, z)?;
            Ok(toeplitz_m(model, z))
        }
    }
}

/// N-transform, the inverse of the M-transform: `M(N(w)) = w`.
pub fn n_transform(model: &BaseModel, w: Complex64) -> Result<Complex64> {
    model.validate()?;
    if w == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("N-transform has a pole at w = 0"));
    }
    match *model {
        BaseModel::MarchenkoPastur { c } => Ok(n_marchenko_pastur(c, w)),
        BaseModel::ShiftedSemicircle { alpha, beta } => Ok(n_spatial(alpha, beta, w)),
        BaseModel::ExponentialToeplitz { r } => Ok(n_temporal(toeplitz_gamma(r), w)),
    }
}

fn n_marchenko_pastur(c: f64, w: Complex64) -> Complex64 {
    (1.0 + w) * (1.0 + c * w) / w
}

/// N-transform of `αI + βV`; also valid for `β = 0` (the point mass at `α`).
fn n_spatial(alpha: f64, beta: f64, w: Complex64) -> Complex64 {
    (w + 1.0) * (alpha + spatial_sqrt(alpha, beta, w)) / (2.0 * w)
}

fn n_temporal(gamma: f64, w: Complex64) -> Complex64 {
    gamma + principal_sqrt(gamma * gamma + 1.0 / (w * w) - 1.0)
}

fn check_composed_domain(params: &ModelParams, w: Complex64) -> Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    if w == zero || w + 1.0 == zero || params.c() * w + 1.0 == zero {
        return Err(Error::domain(format!(
            "composed N-transform undefined at w = {w} (poles at 0, -1, -1/c)"
        )));
    }
    Ok(())
}

/// N-transform of the separable sample covariance `C`, collapsed form:
///
/// `N_C(w) = (c/2)(w + 1)(γ + √(γ² - 1 + 1/(c²w²)))(α + √(α² + 4β²w))`.
pub fn n_composed(params: &ModelParams, w: Complex64) -> Result<Complex64> {
    check_composed_domain(params, w)?;
    let (c, alpha, beta, gamma) = (params.c(), params.alpha(), params.beta(), params.gamma());
    let temporal = gamma + principal_sqrt(gamma * gamma - 1.0 + 1.0 / (c * c * w * w));
    let spatial = alpha + spatial_sqrt(alpha, beta, w);
    Ok(0.5 * c * (w + 1.0) * temporal * spatial)
}

/// The same N-transform assembled factor by factor from the free
/// multiplication law: `(w/(1+w)) (cw/(1+cw)) N_MP(w) N_Σt(cw) N_Σs(w)`.
pub fn n_composed_factored(params: &ModelParams, w: Complex64) -> Result<Complex64> {
    check_composed_domain(params, w)?;
    let c = params.c();
    let cw = c * w;
    Ok(w / (1.0 + w)
        * (cw / (1.0 + cw))
        * n_marchenko_pastur(c, w)
        * n_temporal(params.gamma(), cw)
        * n_spatial(params.alpha(), params.beta(), w))
}
