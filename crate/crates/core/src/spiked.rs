//! Low-rank spikes on top of the separable noise covariance: the forward
//! phase-transition map `θ → η = G⁻¹(1/θ)`, the shrinkage inverse
//! `λ → θ̂ = 1/G(λ)`, and the Wigner-noise closed forms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lsd::{composed_cauchy, relation_factor, upper_edge, BulkEdge};
use crate::poly;
use crate::transforms::ModelParams;

/// Offset to the right of the edge standing in for the one-sided limit `a⁺`.
pub const EDGE_OFFSET: f64 = 1e-6;
/// Imaginary part used when evaluating `G_C` on the real axis.
pub const REAL_AXIS_OFFSET: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Observations in `(a, a (1 + LOW_CONFIDENCE_BAND)]` are flagged.
pub const LOW_CONFIDENCE_BAND: f64 = 1e-3;

/// Coefficients `q₀..q₄` of the quartic satisfied by `G_C⁻¹(z)`, ascending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticCoefficients {
    pub q: [Complex64; 5],
}

pub fn q_coefficients(params: &ModelParams, z: Complex64) -> QuarticCoefficients {
    let (c, a, b, g) = (params.c(), params.alpha(), params.beta(), params.gamma());
    let (b2, b4) = (b * b, b.powi(4));
    let (c2, c3, c4) = (c * c, c.powi(3), c.powi(4));
    let (a2, g2) = (a * a, g * g);
    let zp = |k: i32| z.powi(k);

    let q4 = b4 * zp(8);
    let q3 = 2.0 * b2 * zp(5) / c2 - 4.0 * b2 * g2 * zp(5) / c2 + 2.0 * a * b2 * g * zp(6) / c
        - 4.0 * b4 * zp(7);
    let q2 = zp(2) / c4 - 2.0 * a * g * zp(3) / c3 + a2 * zp(4) / c2 - 6.0 * b2 * zp(4) / c2
        + 12.0 * b2 * g2 * zp(4) / c2
        - 6.0 * a * b2 * g * zp(5) / c
        + 6.0 * b4 * zp(6)
        - 2.0 * b4 * zp(6) / c2;
    let q1 = -2.0 * z / c4 + 4.0 * a * g * zp(2) / c3 - 2.0 * b2 * zp(3) / c4
        - 2.0 * a2 * zp(3) / c2
        + 6.0 * b2 * zp(3) / c2
        - 12.0 * b2 * g2 * zp(3) / c2
        - 2.0 * a * b2 * g * zp(4) / c3
        + 6.0 * a * b2 * g * zp(4) / c
        - 4.0 * b4 * zp(5)
        + 4.0 * b4 * zp(5) / c2;
    let q0 = Complex64::from(1.0 / c4) - 2.0 * a * g * z / c3 - a2 * zp(2) / c4
        + 2.0 * b2 * zp(2) / c4
        + a2 * zp(2) / c2
        - 2.0 * b2 * zp(2) / c2
        + 4.0 * b2 * g2 * zp(2) / c2
        + 2.0 * a * b2 * g * zp(3) / c3
        - 2.0 * a * b2 * g * zp(3) / c
        + b4 * zp(4)
        + b4 * zp(4) / c4
        - 2.0 * b4 * zp(4) / c2;

    QuarticCoefficients { q: [q0, q1, q2, q3, q4] }
}

/// Mismatch of the unsquared inverse relation
/// `1 = (c w / 2)(γ + √(γ² - 1 + 1/(c² m²)))(α + √(α² + 4β² m))`, `m = x w - 1`.
pub fn inverse_residual(params: &ModelParams, w: f64, x: f64) -> f64 {
    let m = Complex64::from(x * w - 1.0);
    let r = (1.0 - 0.5 * params.c() * w * relation_factor(params, m)).norm();
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

/// Spike levels `θ₁ ≥ … ≥ θ_r ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpikeSpec {
    thetas: Vec<f64>,
}

impl TryFrom<Vec<f64>> for SpikeSpec {
    type Error = Error;

    fn try_from(thetas: Vec<f64>) -> Result<Self> {
        SpikeSpec::new(thetas)
    }
}

impl From<SpikeSpec> for Vec<f64> {
    fn from(spec: SpikeSpec) -> Self {
        spec.thetas
    }
}

impl SpikeSpec {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::invalid("spike levels must be finite and nonnegative"));
        }
        if thetas.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid("spike levels must be sorted in descending order"));
        }
        Ok(SpikeSpec { thetas })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn rank(&self) -> usize {
        self.thetas.len()
    }
}

/// One spike, in either direction. Forward records carry `theta` and the
/// predicted `eta`; shrinkage records carry the observed `eta` and
/// `theta_hat` (unset when the observation is inside the bulk).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikeResult {
    pub theta: Option<f64>,
    pub eta: f64,
    pub detectable: bool,
    pub theta_hat: Option<f64>,
    pub critical_theta: f64,
    pub support_edge: f64,
    pub low_confidence: bool,
}

/// The noise model with its bulk edge and phase-transition threshold
/// computed once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikedModel {
    params: ModelParams,
    edge: BulkEdge,
    critical_theta: f64,
}

impl SpikedModel {
    pub fn new(params: ModelParams) -> Result<Self> {
        let edge = upper_edge(&params);
        let z = Complex64::new(edge.edge + EDGE_OFFSET, REAL_AXIS_OFFSET);
        let g = composed_cauchy(&params, z, None, RESIDUAL_TOL)?;
        Ok(SpikedModel { params, edge, critical_theta: 1.0 / g.re })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn support_edge(&self) -> f64 {
        self.edge.edge
    }

    pub fn critical_theta(&self) -> f64 {
        self.critical_theta
    }

    /// `G_C⁻¹(w)` for real `w = 1/θ`: the real root of the quartic above the
    /// edge that satisfies the unsquared relation on the branch where
    /// `M_C = x w - 1` lies in `(0, m*]`.
    pub fn g_inverse(&self, w: f64) -> Result<f64> {
        let coeffs = q_coefficients(&self.params, Complex64::from(w));
        let roots = poly::solve_roots(&coeffs.q)?;
        let real: Vec<f64> = roots
            .iter()
            .filter(|r| r.im.abs() <= 1e-8 * (1.0 + r.re.abs()))
            .map(|r| r.re)
            .collect();
        let above: Vec<f64> = real.iter().copied().filter(|&x| x > self.edge.edge).collect();
        let survivors: Vec<f64> = above
            .iter()
            .copied()
            .filter(|&x| inverse_residual(&self.params, w, x) <= RESIDUAL_TOL)
            .filter(|&x| {
                let m = x * w - 1.0;
                m > 0.0 && m <= self.edge.m_star * (1.0 + 1e-9)
            })
            .collect();
        match survivors.as_slice() {
            [] => Err(Error::NoRoot { w }),
            [x] => Ok(*x),
            _ => Err(Error::Ambiguity { w, roots: survivors }),
        }
    }

    /// Predicted top eigenvalue location for a spike of level `theta`.
    pub fn forward(&self, theta: f64) -> Result<SpikeResult> {
        let detectable = theta > self.critical_theta;
        let eta = if detectable { self.g_inverse(1.0 / theta)? } else { self.edge.edge };
        Ok(SpikeResult {
            theta: Some(theta),
            eta,
            detectable,
            theta_hat: None,
            critical_theta: self.critical_theta,
            support_edge: self.edge.edge,
            low_confidence: false,
        })
    }

    pub fn forward_map(&self, spec: &SpikeSpec) -> Result<Vec<SpikeResult>> {
        spec.thetas().iter().map(|&t| self.forward(t)).collect()
    }

    /// `θ̂ = 1/G_C(λ)`; observations at or below the edge are not recoverable.
    pub fn shrink_one(&self, lambda: f64) -> Result<SpikeResult> {
        let edge = self.edge.edge;
        let mut out = SpikeResult {
            theta: None,
            eta: lambda,
            detectable: false,
            theta_hat: None,
            critical_theta: self.critical_theta,
            support_edge: edge,
            low_confidence: false,
        };
        if lambda > edge {
            let z = Complex64::new(lambda, REAL_AXIS_OFFSET);
            let g = composed_cauchy(&self.params, z, None, RESIDUAL_TOL)?;
            out.detectable = true;
            out.theta_hat = Some(1.0 / g.re);
            out.low_confidence = lambda <= edge * (1.0 + LOW_CONFIDENCE_BAND);
        }
        Ok(out)
    }

    pub fn shrink(&self, lambdas: &[f64]) -> Result<Vec<SpikeResult>> {
        if lambdas.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid("observed eigenvalues must be sorted in descending order"));
        }
        lambdas.iter().map(|&l| self.shrink_one(l)).collect()
    }
}

pub fn g_inverse(params: &ModelParams, w: f64) -> Result<f64> {
    SpikedModel::new(*params)?.g_inverse(w)
}

pub fn forward_map(params: &ModelParams, spec: &SpikeSpec) -> Result<Vec<SpikeResult>> {
    SpikedModel::new(*params)?.forward_map(spec)
}

pub fn shrink(params: &ModelParams, lambdas: &[f64]) -> Result<Vec<SpikeResult>> {
    SpikedModel::new(*params)?.shrink(lambdas)
}

/// Top eigenvalue of `θ φφᵀ + σ V` for a Wigner `V`: `θ + σ²/θ` above the
/// threshold `θ > σ`, otherwise the bulk edge `2σ`.
pub fn wigner_spike_map(theta: f64, sigma: f64) -> f64 {
    if theta > sigma {
        theta + sigma * sigma / theta
    } else {
        2.0 * sigma
    }
}

/// Inverse of [`wigner_spike_map`]; `None` for `η ≤ 2σ`.
pub fn wigner_spike_shrink(eta: f64, sigma: f64) -> Option<f64> {
    if eta > 2.0 * sigma {
        Some(0.5 * (eta + (eta * eta - 4.0 * sigma * sigma).sqrt()))
    } else {
        None
    }
}
