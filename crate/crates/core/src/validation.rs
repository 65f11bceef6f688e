//! The acceptance suite: twelve numbered checks with fixed sizes and
//! tolerances, each producing a [`CriterionReport`].

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{density_cdf, esd_cdf, ks_distance, shrinkage_experiment, step_cdf};
use crate::error::Result;
use crate::lsd::{base_model_density, lsd_density, toeplitz_lsd_density, GridSpec, InversionConfig};
use crate::montecarlo::{kronecker_check, sample_ar1, sample_covariance, sample_sigma_t, sample_spiked};
use crate::montecarlo::{eigenvalues, ArMode, SimSpec};
use crate::spiked::{wigner_spike_map, wigner_spike_shrink, SpikeSpec, SpikedModel};
use crate::transforms::{m_transform, n_transform, BaseModel, ModelParams};

pub const DEFAULT_SEED: u64 = 42;
pub const ALL: [u8; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];
/// Checks that involve no random matrices; they finish in a few seconds.
pub const ANALYTIC: [u8; 6] = [1, 2, 3, 7, 8, 12];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub elapsed_s: f64,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: measured {:.3e} vs threshold {:.1e} ({:.1}s) {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.measured,
            self.threshold,
            self.elapsed_s,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    measured: f64,
    threshold: f64,
    detail: String,
}

fn titled(id: u8) -> &'static str {
    match id {
        1 => "transform identities M(N(w)) = w",
        2 => "closed-form density recovery by Stieltjes inversion",
        3 => "Marchenko-Pastur reduction of the degree-8 engine",
        4 => "separable covariance ESD vs LSD, n=1000, 5 seeds",
        5 => "finite Toeplitz spectrum vs its LSD, t=2000",
        6 => "heterogeneous vs homogeneous AR(1) ESDs, n=2000",
        7 => "Wigner spike closed forms",
        8 => "shrink(forward_map(theta)) round trip",
        9 => "rank-1 spiked simulation vs predicted outlier, 10 seeds",
        10 => "shrinkage experiment, rank 10, 100 trials",
        11 => "Kronecker structure of the vectorized covariance",
        12 => "M-transform half-plane signs on the imaginary axis",
        _ => "unknown criterion",
    }
}

/// Runs one criterion. Library errors are reported as failures.
pub fn run_criterion(id: u8) -> CriterionReport {
    let start = Instant::now();
    let result = match id {
        1 => transform_identities(),
        2 => closed_form_recovery(),
        3 => marchenko_pastur_reduction(),
        4 => separable_esd(),
        5 => toeplitz_esd(),
        6 => mean_field(),
        7 => wigner_closed_forms(),
        8 => spike_round_trip(),
        9 => spiked_simulation(),
        10 => shrinkage(),
        11 => kronecker(),
        12 => half_plane(),
        _ => Ok(Outcome {
            passed: false,
            measured: f64::NAN,
            threshold: f64::NAN,
            detail: format!("no criterion numbered {id}"),
        }),
    };
    let elapsed_s = start.elapsed().as_secs_f64();
    let outcome = result.unwrap_or_else(|e| Outcome {
        passed: false,
        measured: f64::NAN,
        threshold: f64::NAN,
        detail: format!("error: {e}"),
    });
    CriterionReport {
        id,
        title: titled(id).to_string(),
        passed: outcome.passed,
        measured: outcome.measured,
        threshold: outcome.threshold,
        elapsed_s,
        detail: outcome.detail,
    }
}

pub fn run_suite(ids: &[u8]) -> Vec<CriterionReport> {
    ids.iter().map(|&id| run_criterion(id)).collect()
}

fn base_models() -> [BaseModel; 3] {
    [
        BaseModel::MarchenkoPastur { c: 0.5 },
        BaseModel::ShiftedSemicircle { alpha: 1.0, beta: 0.5 },
        BaseModel::ExponentialToeplitz { r: 0.5 },
    ]
}

fn transform_identities() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for model in &base_models() {
        for i in 0..20 {
            for j in 0..10 {
                let x = -5.0 + 25.0 * i as f64 / 19.0;
                let y = 0.1 * 100f64.powf(j as f64 / 9.0);
                let z = Complex64::new(x, y);
                let w = m_transform(model, z)?;
                let back = m_transform(model, n_transform(model, w)?)?;
                worst = worst.max((back - w).norm());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        passed: worst <= 1e-9 && secs < 1.0,
        measured: worst,
        threshold: 1e-9,
        detail: format!("600 points, {secs:.3}s (limit 1s)"),
    })
}

fn closed_form_recovery() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut worst_edge: f64 = 0.0;
    let mut parts = Vec::new();
    for model in &base_models() {
        let s = model.support();
        let grid = GridSpec::new(s.lo - 0.5, s.hi + 0.5, 4001)?;
        let curve = base_model_density(model, &InversionConfig::with_grid(grid))?;
        let linf = curve
            .xs
            .iter()
            .zip(&curve.density)
            .filter(|(&x, _)| (x - s.lo).abs() > 0.05 && (x - s.hi).abs() > 0.05)
            .map(|(&x, &d)| (d - model.density(x)).abs())
            .fold(0.0, f64::max);
        let edge = (curve.support.lo - s.lo).abs().max((curve.support.hi - s.hi).abs());
        worst = worst.max(linf);
        worst_edge = worst_edge.max(edge);
        parts.push(format!("{} linf {linf:.1e} support err {edge:.1e}", model.name()));
    }
    Ok(Outcome {
        passed: worst <= 1e-3 && worst_edge <= 1e-2,
        measured: worst,
        threshold: 1e-3,
        detail: format!("{} (support limit 1e-2)", parts.join("; ")),
    })
}

fn marchenko_pastur_reduction() -> Result<Outcome> {
    let start = Instant::now();
    let params = ModelParams::new(0.5, 1.0, 0.0, 0.0)?;
    let curve = lsd_density(&params, &InversionConfig::default())?;
    let secs = start.elapsed().as_secs_f64();
    let mp = BaseModel::MarchenkoPastur { c: 0.5 };
    let linf = curve
        .xs
        .iter()
        .zip(&curve.density)
        .map(|(&x, &d)| (d - mp.density(x)).abs())
        .fold(0.0, f64::max);
    let mass_ok = (0.997..=1.003).contains(&curve.mass);
    Ok(Outcome {
        passed: linf <= 1e-2 && mass_ok && secs < 10.0,
        measured: linf,
        threshold: 1e-2,
        detail: format!("mass {:.5} (limit [0.997, 1.003]), {} points in {secs:.2}s", curve.mass, curve.xs.len()),
    })
}

fn separable_esd() -> Result<Outcome> {
    let params = ModelParams::default_experiment();
    let cdf = density_cdf(&lsd_density(&params, &InversionConfig::default())?)?;
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    let mut each = Vec::new();
    for seed in DEFAULT_SEED..DEFAULT_SEED + 5 {
        let start = Instant::now();
        let spec = SimSpec::new(1000, 2000, &params, seed, 1)?;
        let ks = ks_distance(&esd_cdf(&sample_covariance(&spec)?), &cdf);
        slowest = slowest.max(start.elapsed().as_secs_f64());
        worst = worst.max(ks);
        each.push(format!("{ks:.4}"));
    }
    Ok(Outcome {
        passed: worst <= 0.05 && slowest < 120.0,
        measured: worst,
        threshold: 0.05,
        detail: format!("ks per seed [{}], slowest seed {slowest:.1}s", each.join(", ")),
    })
}

fn toeplitz_esd() -> Result<Outcome> {
    let (t, r) = (2000, 0.5);
    let spectrum = eigenvalues(&sample_sigma_t(t, r)?.matrix)?;
    let (a, b) = ((1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r));
    let curve = toeplitz_lsd_density(r, GridSpec::new(a, b, 400_000)?)?;
    let ks = ks_distance(&step_cdf(&spectrum), &density_cdf(&curve)?);
    let (lo, hi) = (spectrum[0], spectrum[t - 1]);
    let inside = lo >= a - 0.05 && hi <= b + 0.05;
    Ok(Outcome {
        passed: ks <= 0.05 && inside,
        measured: ks,
        threshold: 0.05,
        detail: format!("eigenvalues in [{lo:.5}, {hi:.5}], allowed [{:.4}, {:.4}]", a - 0.05, b + 0.05),
    })
}

/// Pass/fail uses [`DEFAULT_SEED`]; four more seeds are reported alongside.
fn mean_field() -> Result<Outcome> {
    let ks_for = |seed: u64| -> Result<f64> {
        let het = sample_ar1(2000, 4000, ArMode::Heterogeneous, seed)?;
        let hom = sample_ar1(2000, 4000, ArMode::Homogeneous, seed)?;
        Ok(ks_distance(&esd_cdf(&het), &esd_cdf(&hom)))
    };
    let ks = ks_for(DEFAULT_SEED)?;
    let others = (DEFAULT_SEED + 1..DEFAULT_SEED + 5)
        .map(|s| ks_for(s).map(|k| format!("{k:.4}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        passed: ks <= 0.05,
        measured: ks,
        threshold: 0.05,
        detail: format!("seed {DEFAULT_SEED}; seeds {}..{} give [{}]", DEFAULT_SEED + 1, DEFAULT_SEED + 4, others.join(", ")),
    })
}

fn wigner_closed_forms() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    worst = worst.max((wigner_spike_map(2.0, 1.0) - 2.5).abs());
    worst = worst.max((wigner_spike_shrink(2.5, 1.0).unwrap_or(f64::NAN) - 2.0).abs());
    for theta in [0.0, 0.25, 0.5, 0.99, 1.0] {
        worst = worst.max((wigner_spike_map(theta, 1.0) - 2.0).abs());
    }
    let plateau_unrecoverable = wigner_spike_shrink(2.0, 1.0).is_none();
    Ok(Outcome {
        passed: worst <= 1e-12 && plateau_unrecoverable,
        measured: worst,
        threshold: 1e-12,
        detail: "theta=2 -> 2.5, 2.5 -> 2, plateau 2 sigma for theta <= sigma".into(),
    })
}

fn spike_round_trip() -> Result<Outcome> {
    let model = SpikedModel::new(ModelParams::default_experiment())?;
    let mut worst: f64 = 0.0;
    for k in [1.1, 2.0, 5.0, 10.0] {
        let theta = k * model.critical_theta();
        let eta = model.forward(theta)?.eta;
        let back = model.shrink_one(eta)?.theta_hat.unwrap_or(f64::NAN);
        worst = worst.max(((back - theta) / theta).abs());
    }
    Ok(Outcome {
        passed: worst <= 1e-4,
        measured: worst,
        threshold: 1e-4,
        detail: format!("critical theta {:.6}", model.critical_theta()),
    })
}

fn spiked_simulation() -> Result<Outcome> {
    let params = ModelParams::default_experiment();
    let model = SpikedModel::new(params)?;
    let theta = 5.0 * model.critical_theta();
    let eta = model.forward(theta)?.eta;
    let spike = SpikeSpec::new(vec![theta])?;
    let mut total = 0.0;
    for seed in DEFAULT_SEED..DEFAULT_SEED + 10 {
        let spec = SimSpec::new(1000, 2000, &params, seed, 1)?;
        let top = sample_spiked(&spec, &spike, 0)?.largest();
        total += ((top - eta) / eta).abs();
    }
    let mean = total / 10.0;
    Ok(Outcome {
        passed: mean <= 0.02,
        measured: mean,
        threshold: 0.02,
        detail: format!("theta {theta:.4}, predicted eta {eta:.4}"),
    })
}

/// Spike levels of the shrinkage experiment, as multiples of the threshold.
pub const SHRINKAGE_MULTIPLES: [f64; 10] = [10.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.5, 2.0, 1.5];

fn shrinkage() -> Result<Outcome> {
    let params = ModelParams::default_experiment();
    let model = SpikedModel::new(params)?;
    let thetas = SHRINKAGE_MULTIPLES.iter().map(|k| k * model.critical_theta()).collect();
    let spec = SimSpec::new(1000, 2000, &params, DEFAULT_SEED, 100)?;
    let table = shrinkage_experiment(&spec, &SpikeSpec::new(thetas)?, 100)?;
    let medians: Vec<f64> = (0..table.thetas.len()).map(|k| table.median_abs_error(k)).collect();
    let worst = medians.iter().copied().fold(0.0, f64::max);
    Ok(Outcome {
        passed: worst <= 0.05,
        measured: worst,
        threshold: 0.05,
        detail: format!(
            "median |rel err| per spike [{}]",
            medians.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>().join(", ")
        ),
    })
}

fn kronecker() -> Result<Outcome> {
    let check = kronecker_check(3, 4, &ModelParams::default_experiment(), 100_000, DEFAULT_SEED)?;
    Ok(Outcome {
        passed: check.max_abs_deviation <= 0.05,
        measured: check.max_abs_deviation,
        threshold: 0.05,
        detail: format!("{} draws, 12x12 covariance", check.draws),
    })
}

fn half_plane() -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    for model in &base_models() {
        let needs_im = !matches!(model, BaseModel::ShiftedSemicircle { .. });
        for k in 0..=40 {
            let y = 0.01 * 10f64.powf(k as f64 / 10.0);
            let m = m_transform(model, Complex64::new(0.0, y))?;
            worst = worst.max(m.re);
            if m.re >= 0.0 {
                violations += 1;
            }
            if needs_im {
                worst = worst.max(m.im);
                if m.im >= 0.0 {
                    violations += 1;
                }
            }
        }
    }
    Ok(Outcome {
        passed: violations == 0,
        measured: worst,
        threshold: 0.0,
        detail: format!("{violations} sign violations over 41 offsets per model"),
    })
}
