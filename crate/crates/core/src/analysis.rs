//! CDFs, Kolmogorov-Smirnov distances and the shrinkage error experiment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lsd::DensityCurve;
use crate::montecarlo::{sample_spiked, EsdSample, Ensemble, SimSpec};
use crate::spiked::{SpikeSpec, SpikedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CdfKind {
    /// Right-continuous steps at each abscissa.
    Step,
    /// Piecewise linear between abscissae.
    Linear,
}

/// A distribution function sampled at ascending abscissae. It is `0` below
/// the first abscissa and `1` above the last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfCurve {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CdfKind,
}

impl CdfCurve {
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 0 || x < self.xs[0] {
            return 0.0;
        }
        if x > self.xs[n - 1] {
            return 1.0;
        }
        // number of abscissae <= x, at least 1 here
        let i = self.xs.partition_point(|&v| v <= x);
        match self.kind {
            CdfKind::Step => self.values[i - 1],
            CdfKind::Linear => {
                if i == n {
                    return self.values[n - 1];
                }
                let (x0, x1) = (self.xs[i - 1], self.xs[i]);
                let t = (x - x0) / (x1 - x0);
                self.values[i - 1] + t * (self.values[i] - self.values[i - 1])
            }
        }
    }

    /// `F(x⁻)`; differs from [`eval`](Self::eval) only at the jumps of a step curve.
    pub fn eval_left(&self, x: f64) -> f64 {
        match self.kind {
            CdfKind::Linear => self.eval(x),
            CdfKind::Step => {
                let i = self.xs.partition_point(|&v| v < x);
                if i == 0 {
                    0.0
                } else {
                    self.values[i - 1]
                }
            }
        }
    }
}

/// Step CDF putting mass `1/N` on each eigenvalue; ties accumulate.
pub fn esd_cdf(sample: &EsdSample) -> CdfCurve {
    step_cdf(&sample.eigenvalues)
}

/// Empirical CDF of ascending `values`.
pub fn step_cdf(values: &[f64]) -> CdfCurve {
    debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    let n = values.len() as f64;
    let mut xs: Vec<f64> = Vec::with_capacity(values.len());
    let mut cum: Vec<f64> = Vec::with_capacity(values.len());
    for (k, &v) in values.iter().enumerate() {
        let f = (k + 1) as f64 / n;
        if xs.last() == Some(&v) {
            *cum.last_mut().unwrap() = f;
        } else {
            xs.push(v);
            cum.push(f);
        }
    }
    CdfCurve { xs, values: cum, kind: CdfKind::Step }
}

/// Cumulative trapezoid integral of a density, renormalized by its mass.
pub fn density_cdf(curve: &DensityCurve) -> Result<CdfCurve> {
    if !(0.99..=1.01).contains(&curve.mass) {
        return Err(Error::Mass { mass: curve.mass });
    }
    let mut values = Vec::with_capacity(curve.xs.len());
    let mut acc = 0.0;
    values.push(0.0);
    for k in 1..curve.xs.len() {
        acc += 0.5 * (curve.xs[k] - curve.xs[k - 1]) * (curve.density[k] + curve.density[k - 1]);
        values.push((acc / curve.mass).clamp(0.0, 1.0));
    }
    Ok(CdfCurve { xs: curve.xs.clone(), values, kind: CdfKind::Linear })
}

/// `sup |F_a - F_b|` over the union of both abscissa sets, including the
/// left limits at every jump.
pub fn ks_distance(a: &CdfCurve, b: &CdfCurve) -> f64 {
    let mut worst: f64 = 0.0;
    for &x in a.xs.iter().chain(&b.xs) {
        worst = worst.max((a.eval(x) - b.eval(x)).abs());
        worst = worst.max((a.eval_left(x) - b.eval_left(x)).abs());
    }
    worst
}

/// KS distance between a simulated spectrum and a limiting density.
pub fn ks_to_density(sample: &EsdSample, curve: &DensityCurve) -> Result<f64> {
    Ok(ks_distance(&esd_cdf(sample), &density_cdf(curve)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub ensemble: Ensemble,
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub ks: f64,
}

/// Min, quartiles (linear interpolation between order statistics) and max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileSummary {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        return sorted[lo];
    }
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl QuantileSummary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(QuantileSummary {
            min: v[0],
            q25: quantile_sorted(&v, 0.25),
            median: quantile_sorted(&v, 0.5),
            q75: quantile_sorted(&v, 0.75),
            max: v[v.len() - 1],
        })
    }
}

/// Relative errors `(θ̂ - θ)/θ` of the shrinkage estimator, one column per
/// spike and one row per trial. `None` marks an observation inside the bulk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub thetas: Vec<f64>,
    pub critical_theta: f64,
    /// `errors[k][trial]` for spike `k`.
    pub errors: Vec<Vec<Option<f64>>>,
    pub summaries: Vec<Option<QuantileSummary>>,
    /// Spikes at or below the phase transition.
    pub flagged: Vec<bool>,
}

impl ErrorTable {
    pub fn from_columns(thetas: Vec<f64>, critical_theta: f64, errors: Vec<Vec<Option<f64>>>) -> Self {
        let summaries = errors
            .iter()
            .map(|col| QuantileSummary::of(&col.iter().flatten().copied().collect::<Vec<_>>()))
            .collect();
        let flagged = thetas.iter().map(|&t| t <= critical_theta).collect();
        ErrorTable { thetas, critical_theta, errors, summaries, flagged }
    }

    pub fn trials(&self) -> usize {
        self.errors.first().map_or(0, Vec::len)
    }

    /// Median of `|error|` for spike `k`; unrecoverable trials count as
    /// infinite error.
    pub fn median_abs_error(&self, k: usize) -> f64 {
        let mut v: Vec<f64> =
            self.errors[k].iter().map(|e| e.map_or(f64::INFINITY, f64::abs)).collect();
        v.sort_by(f64::total_cmp);
        quantile_sorted(&v, 0.5)
    }
}

/// Simulates `trials` spiked matrices, shrinks the top `rank` eigenvalues and
/// tabulates the relative errors.
pub fn shrinkage_experiment(spec: &SimSpec, spike: &SpikeSpec, trials: usize) -> Result<ErrorTable> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let model = SpikedModel::new(spec.params)?;
    let rank = spike.rank();
    for &theta in spike.thetas() {
        if theta <= model.critical_theta() {
            log::warn!(
                "spike {theta} is at or below the phase transition {}; column flagged",
                model.critical_theta()
            );
        }
    }
    let rows = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let sample = sample_spiked(spec, spike, trial)?;
            let top: Vec<f64> = sample.eigenvalues.iter().rev().take(rank).copied().collect();
            let shrunk = model.shrink(&top)?;
            Ok(spike
                .thetas()
                .iter()
                .zip(&shrunk)
                .map(|(&theta, s)| s.theta_hat.map(|h| (h - theta) / theta))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let errors = (0..rank).map(|k| rows.iter().map(|row| row[k]).collect()).collect();
    Ok(ErrorTable::from_columns(spike.thetas().to_vec(), model.critical_theta(), errors))
}
