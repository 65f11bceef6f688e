//! Finite-dimensional simulation of the matrix ensembles: Wigner, spatial
//! and temporal covariances, the separable sample covariance `C_N`, the
//! spiked model `Y_N = X_N + C_N`, and row-wise AR(1) processes.
//!
//! Randomness comes from ChaCha8 seeded with the run seed; every
//! `(trial, matrix)` pair reads its own stream, `(trial << 8) | tag`, so any
//! trial can be regenerated on its own. Gaussians use the ziggurat sampler of
//! `rand_distr`.

use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spiked::SpikeSpec;
use crate::transforms::ModelParams;

pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), stream = (trial << 8) | matrix tag";
pub const GAUSSIAN_METHOD: &str = "ziggurat (rand_distr::StandardNormal)";

/// Largest `n * t` accepted by the simulators (a 1.6 GB noise matrix).
pub const ELEMENT_CAP: usize = 200_000_000;

/// Stream tags, one per random matrix drawn within a trial.
pub mod tag {
    pub const NOISE: u64 = 1;
    pub const WIGNER: u64 = 2;
    pub const FRAME: u64 = 3;
    pub const AR_RATES: u64 = 4;
    pub const AR_NOISE: u64 = 5;
    pub const KRONECKER: u64 = 6;
}

pub fn stream_rng(seed: u64, trial: u64, tag: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 8) | tag);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat<f64> {
    // fill row by row so the draw order does not depend on the storage layout
    let mut m = Mat::<f64>::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

fn linalg<E: std::fmt::Debug>(e: E) -> Error {
    Error::Linalg(format!("{e:?}"))
}

pub fn check_memory(n: usize, t: usize) -> Result<()> {
    let elements = n.saturating_mul(t);
    if elements > ELEMENT_CAP {
        return Err(Error::MemoryGuard { elements, cap: ELEMENT_CAP });
    }
    Ok(())
}

/// Dimensions, model and seed of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub n: usize,
    pub t: usize,
    pub params: ModelParams,
    pub seed: u64,
    pub trials: usize,
}

impl SimSpec {
    /// Uses `c = n / t`, replacing whatever ratio `params` carried.
    pub fn new(n: usize, t: usize, params: &ModelParams, seed: u64, trials: usize) -> Result<Self> {
        if n < 2 || t < n + 1 {
            return Err(Error::invalid(format!("need n >= 2 and t >= n + 1, got n = {n}, t = {t}")));
        }
        let params = params.with_c(n as f64 / t as f64)?;
        let spec = SimSpec { n, t, params, seed, trials };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.t < self.n + 1 {
            return Err(Error::invalid(format!(
                "need n >= 2 and t >= n + 1, got n = {}, t = {}",
                self.n, self.t
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        let ratio = self.n as f64 / self.t as f64;
        if (self.params.c() - ratio).abs() > 1e-12 * ratio {
            return Err(Error::invalid(format!(
                "c = {} does not match n / t = {ratio}",
                self.params.c()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    Wigner,
    SpatialCovariance,
    Toeplitz,
    SampleCovariance,
    Spiked,
    Ar1Heterogeneous,
    Ar1Homogeneous,
}

/// Ascending eigenvalues of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdSample {
    pub eigenvalues: Vec<f64>,
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub trial: u64,
    pub ensemble: Ensemble,
    /// Negative eigenvalues of the spatial covariance set to zero.
    pub clamped: usize,
}

impl EsdSample {
    pub fn largest(&self) -> f64 {
        *self.eigenvalues.last().expect("samples are nonempty")
    }
}

/// Symmetrizes in place and returns the largest `|A - Aᵀ|` entry seen.
pub fn symmetrize(a: &mut Mat<f64>) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in (j + 1)..n {
            let (x, y) = (a[(i, j)], a[(j, i)]);
            worst = worst.max((x - y).abs());
            let m = 0.5 * (x + y);
            a[(i, j)] = m;
            a[(j, i)] = m;
        }
    }
    worst
}

pub fn eigenvalues(a: &Mat<f64>) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower).map_err(linalg)
}

fn wigner_from(n: usize, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let scale = 1.0 / (n as f64).sqrt();
    let mut v = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = gaussian(rng) * scale;
            v[(i, j)] = x;
            v[(j, i)] = x;
        }
    }
    v
}

/// Symmetric Wigner matrix with `N(0, 1/n)` entries on and above the diagonal.
pub fn sample_wigner(n: usize, seed: u64) -> Result<Mat<f64>> {
    if n < 2 {
        return Err(Error::invalid("Wigner dimension must be at least 2"));
    }
    Ok(wigner_from(n, &mut stream_rng(seed, 0, tag::WIGNER)))
}

/// `αI + βV` after clamping negative eigenvalues, with its principal root.
#[derive(Debug, Clone)]
pub struct SpatialCovariance {
    pub matrix: Mat<f64>,
    pub sqrt: Mat<f64>,
    pub eigenvalues: Vec<f64>,
    pub clamped: usize,
}

fn spatial_from(n: usize, alpha: f64, beta: f64, rng: &mut ChaCha8Rng) -> Result<SpatialCovariance> {
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::invalid("alpha and beta must be nonnegative"));
    }
    if beta == 0.0 {
        let root = alpha.sqrt();
        return Ok(SpatialCovariance {
            matrix: Mat::from_fn(n, n, |i, j| if i == j { alpha } else { 0.0 }),
            sqrt: Mat::from_fn(n, n, |i, j| if i == j { root } else { 0.0 }),
            eigenvalues: vec![alpha; n],
            clamped: 0,
        });
    }
    let mut s = wigner_from(n, rng);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] *= beta;
        }
        s[(i, i)] += alpha;
    }
    let eig = s.self_adjoint_eigen(Side::Lower).map_err(linalg)?;
    let u = eig.U();
    let raw = eig.S().column_vector();
    let mut values = Vec::with_capacity(n);
    let mut clamped = 0;
    for k in 0..n {
        let v = raw[k];
        if v < 0.0 {
            clamped += 1;
            values.push(0.0);
        } else {
            values.push(v);
        }
    }
    if clamped > 0 {
        log::info!("spatial covariance: clamped {clamped} negative eigenvalues to zero");
    }
    let scaled = Mat::from_fn(n, n, |i, k| u[(i, k)] * values[k]);
    let rooted = Mat::from_fn(n, n, |i, k| u[(i, k)] * values[k].sqrt());
    let mut matrix = &scaled * u.transpose();
    let mut sqrt = &rooted * u.transpose();
    symmetrize(&mut matrix);
    symmetrize(&mut sqrt);
    Ok(SpatialCovariance { matrix, sqrt, eigenvalues: values, clamped })
}

pub fn sample_sigma_s(n: usize, alpha: f64, beta: f64, seed: u64) -> Result<SpatialCovariance> {
    spatial_from(n, alpha, beta, &mut stream_rng(seed, 0, tag::WIGNER))
}

/// Toeplitz matrix `r^|a-b|` with its lower Cholesky factor.
#[derive(Debug, Clone)]
pub struct TemporalCovariance {
    pub matrix: Mat<f64>,
    pub factor: Mat<f64>,
}

pub fn toeplitz_matrix(t: usize, r: f64) -> Mat<f64> {
    Mat::from_fn(t, t, |a, b| r.powi((a as i64 - b as i64).unsigned_abs() as i32))
}

pub fn sample_sigma_t(t: usize, r: f64) -> Result<TemporalCovariance> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::invalid(format!("r must lie in [0, 1), got {r}")));
    }
    let matrix = toeplitz_matrix(t, r);
    let factor = matrix.llt(Side::Lower).map_err(linalg)?.L().to_owned();
    Ok(TemporalCovariance { matrix, factor })
}

/// Replaces each row `w` by `w Lᵀ`, `L` the Cholesky factor of `r^|a-b|`.
///
/// `L[k][0] = r^k` and `L[k][j] = √(1 - r²) r^(k-j)`, so the product is the
/// stationary AR(1) recursion `u₀ = w₀`, `u_k = r u_{k-1} + √(1 - r²) w_k`.
pub fn ar1_filter(w: &mut Mat<f64>, r: f64) {
    if r == 0.0 {
        return;
    }
    let innovation = (1.0 - r * r).sqrt();
    for i in 0..w.nrows() {
        for k in 1..w.ncols() {
            w[(i, k)] = r * w[(i, k - 1)] + innovation * w[(i, k)];
        }
    }
}

/// `(1/T) Σs^{1/2} U Uᵀ Σs^{1/2}` for one trial, where the rows of `U` are
/// Gaussian with covariance `Σt`.
pub fn covariance_matrix(spec: &SimSpec, trial: u64) -> Result<(Mat<f64>, usize)> {
    spec.validate()?;
    check_memory(spec.n, spec.t)?;
    let p = &spec.params;
    let mut u = gaussian_matrix(spec.n, spec.t, &mut stream_rng(spec.seed, trial, tag::NOISE));
    ar1_filter(&mut u, p.r());
    let gram = &u * u.transpose();
    let inv_t = 1.0 / spec.t as f64;
    let (mut c, clamped) = if p.beta() == 0.0 {
        (Mat::from_fn(spec.n, spec.n, |i, j| gram[(i, j)] * (p.alpha() * inv_t)), 0)
    } else {
        let s = spatial_from(spec.n, p.alpha(), p.beta(), &mut stream_rng(spec.seed, trial, tag::WIGNER))?;
        let mut c = &(&s.sqrt * &gram) * &s.sqrt;
        for j in 0..spec.n {
            for i in 0..spec.n {
                c[(i, j)] *= inv_t;
            }
        }
        (c, s.clamped)
    };
    let asym = symmetrize(&mut c);
    log::trace!("sample covariance asymmetry before symmetrization: {asym:e}");
    Ok((c, clamped))
}

pub fn sample_covariance_trial(spec: &SimSpec, trial: u64) -> Result<EsdSample> {
    let (c, clamped) = covariance_matrix(spec, trial)?;
    Ok(EsdSample {
        eigenvalues: eigenvalues(&c)?,
        n: spec.n,
        t: spec.t,
        seed: spec.seed,
        trial,
        ensemble: Ensemble::SampleCovariance,
        clamped,
    })
}

/// First trial of `spec`.
pub fn sample_covariance(spec: &SimSpec) -> Result<EsdSample> {
    sample_covariance_trial(spec, 0)
}

/// Every trial of `spec`, run concurrently and returned in trial order.
pub fn sample_covariance_trials(spec: &SimSpec) -> Result<Vec<EsdSample>> {
    (0..spec.trials as u64).into_par_iter().map(|k| sample_covariance_trial(spec, k)).collect()
}

/// Orthonormal `n × rank` frame: thin Q of a Gaussian block.
pub fn random_frame(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> Mat<f64> {
    gaussian_matrix(n, rank, rng).qr().compute_thin_Q()
}

/// `Y = Σ θ_i φ_i φ_iᵀ + C_N`, sharing `C_N` with [`sample_covariance_trial`].
pub fn sample_spiked(spec: &SimSpec, spike: &SpikeSpec, trial: u64) -> Result<EsdSample> {
    let rank = spike.rank();
    if rank > spec.n / 100 {
        return Err(Error::invalid(format!(
            "spike rank {rank} exceeds n / 100 = {}",
            spec.n / 100
        )));
    }
    let (mut y, clamped) = covariance_matrix(spec, trial)?;
    if rank > 0 {
        let frame = random_frame(spec.n, rank, &mut stream_rng(spec.seed, trial, tag::FRAME));
        let weighted = Mat::from_fn(spec.n, rank, |i, k| frame[(i, k)] * spike.thetas()[k]);
        let x = &weighted * frame.transpose();
        y += &x;
        symmetrize(&mut y);
    }
    Ok(EsdSample {
        eigenvalues: eigenvalues(&y)?,
        n: spec.n,
        t: spec.t,
        seed: spec.seed,
        trial,
        ensemble: Ensemble::Spiked,
        clamped,
    })
}

/// Row-wise AR(1) rates `r_i ~ U[0, 1)` with `σ_i² = 1 - r_i²`, and their
/// mean-field counterparts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeterogeneousArParams {
    pub rates: Vec<f64>,
    pub noise_var: Vec<f64>,
    pub mean_rate: f64,
    pub mean_noise_var: f64,
}

impl HeterogeneousArParams {
    pub fn draw(n: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, 0, tag::AR_RATES);
        let rates: Vec<f64> = (0..n)
            .map(|_| loop {
                let r: f64 = rng.random();
                if r < 1.0 {
                    break r;
                }
            })
            .collect();
        let noise_var = rates.iter().map(|r| 1.0 - r * r).collect();
        let mean_rate = rates.iter().sum::<f64>() / n as f64;
        HeterogeneousArParams { rates, noise_var, mean_rate, mean_noise_var: 1.0 - mean_rate * mean_rate }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArMode {
    Heterogeneous,
    Homogeneous,
}

/// Eigenvalues of `(1/t) U Uᵀ` for `U[i, k] = r_i U[i, k-1] + ξ[i, k]`,
/// started at stationarity. Both modes read the same rates and innovations
/// for a given seed.
pub fn sample_ar1(n: usize, t: usize, mode: ArMode, seed: u64) -> Result<EsdSample> {
    if n < 2 || t < 2 {
        return Err(Error::invalid("AR(1) simulation needs n, t >= 2"));
    }
    let ar = HeterogeneousArParams::draw(n, seed);
    let (rates, ensemble) = match mode {
        ArMode::Heterogeneous => (ar.rates, Ensemble::Ar1Heterogeneous),
        ArMode::Homogeneous => (vec![ar.mean_rate; n], Ensemble::Ar1Homogeneous),
    };
    sample_ar1_rates(&rates, t, seed, ensemble)
}

/// [`sample_ar1`] with explicit per-row rates; innovations have variance
/// `1 - r_i²` so every row is stationary with unit variance.
pub fn sample_ar1_rates(rates: &[f64], t: usize, seed: u64, ensemble: Ensemble) -> Result<EsdSample> {
    let n = rates.len();
    if n < 2 || t < 2 {
        return Err(Error::invalid("AR(1) simulation needs n, t >= 2"));
    }
    if rates.iter().any(|r| !(0.0..1.0).contains(r)) {
        return Err(Error::invalid("AR(1) rates must lie in [0, 1)"));
    }
    check_memory(n, t)?;
    let mut u = gaussian_matrix(n, t, &mut stream_rng(seed, 0, tag::AR_NOISE));
    for (i, &r) in rates.iter().enumerate() {
        let sd = (1.0 - r * r).sqrt();
        // U[i, 0] ~ N(0, 1) is the stationary law since σ² / (1 - r²) = 1
        for k in 1..t {
            u[(i, k)] = r * u[(i, k - 1)] + sd * u[(i, k)];
        }
    }
    let mut c = &u * u.transpose();
    let inv_t = 1.0 / t as f64;
    for j in 0..n {
        for i in 0..n {
            c[(i, j)] *= inv_t;
        }
    }
    symmetrize(&mut c);
    Ok(EsdSample { eigenvalues: eigenvalues(&c)?, n, t, seed, trial: 0, ensemble, clamped: 0 })
}

/// Empirical covariance of `vec(U)` (column-major) for `U = Σs^{1/2} W Lᵀ`
/// against `Σt ⊗ Σs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerCheck {
    pub draws: usize,
    pub max_abs_deviation: f64,
    pub empirical: Vec<Vec<f64>>,
    pub expected: Vec<Vec<f64>>,
}

pub fn kronecker_check(n: usize, t: usize, params: &ModelParams, draws: usize, seed: u64) -> Result<KroneckerCheck> {
    if draws < 2 {
        return Err(Error::invalid("need at least two draws"));
    }
    let spatial = spatial_from(n, params.alpha(), params.beta(), &mut stream_rng(seed, 0, tag::WIGNER))?;
    let temporal = sample_sigma_t(t, params.r())?;
    let dim = n * t;
    let expected: Vec<Vec<f64>> = (0..dim)
        .map(|p| {
            (0..dim)
                .map(|q| {
                    let (ip, kp) = (p % n, p / n);
                    let (iq, kq) = (q % n, q / n);
                    temporal.matrix[(kp, kq)] * spatial.matrix[(ip, iq)]
                })
                .collect()
        })
        .collect();

    let mut rng = stream_rng(seed, 0, tag::KRONECKER);
    let mut sum = vec![0.0; dim];
    let mut cross = vec![vec![0.0; dim]; dim];
    let lt = temporal.factor.transpose();
    for _ in 0..draws {
        let w = gaussian_matrix(n, t, &mut rng);
        let u = &(&spatial.sqrt * &w) * lt;
        let v: Vec<f64> = (0..dim).map(|p| u[(p % n, p / n)]).collect();
        for p in 0..dim {
            sum[p] += v[p];
            for q in 0..dim {
                cross[p][q] += v[p] * v[q];
            }
        }
    }
    let d = draws as f64;
    let mut worst: f64 = 0.0;
    let empirical: Vec<Vec<f64>> = (0..dim)
        .map(|p| {
            (0..dim)
                .map(|q| {
                    let cov = (cross[p][q] - sum[p] * sum[q] / d) / (d - 1.0);
                    worst = worst.max((cov - expected[p][q]).abs());
                    cov
                })
                .collect()
        })
        .collect();
    Ok(KroneckerCheck { draws, max_abs_deviation: worst, empirical, expected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wigner_is_symmetric_and_seeded() {
        let a = sample_wigner(50, 3).unwrap();
        let b = sample_wigner(50, 3).unwrap();
        for i in 0..50 {
            for j in 0..50 {
                assert_eq!(a[(i, j)], a[(j, i)]);
                assert_eq!(a[(i, j)], b[(i, j)]);
            }
        }
        assert!(sample_wigner(1, 0).is_err());
    }

    #[test]
    fn streams_differ_by_trial_and_tag() {
        let x: f64 = stream_rng(1, 0, tag::NOISE).random();
        let y: f64 = stream_rng(1, 1, tag::NOISE).random();
        let z: f64 = stream_rng(1, 0, tag::WIGNER).random();
        assert!(x != y && x != z && y != z);
    }

    #[test]
    fn zero_beta_spatial_is_scaled_identity() {
        let s = sample_sigma_s(5, 2.0, 0.0, 0).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert_eq!(s.matrix[(i, j)], 2.0 * e);
                assert_eq!(s.sqrt[(i, j)], 2f64.sqrt() * e);
            }
        }
    }

    #[test]
    fn spatial_root_squares_back() {
        let s = sample_sigma_s(40, 1.0, 0.3, 9).unwrap();
        assert_eq!(s.clamped, 0);
        let sq = &s.sqrt * &s.sqrt;
        for i in 0..40 {
            for j in 0..40 {
                assert!((sq[(i, j)] - s.matrix[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn heavy_spatial_noise_is_clamped() {
        let s = sample_sigma_s(400, 0.0, 1.0, 5).unwrap();
        assert!(s.clamped > 150 && s.clamped < 250, "{}", s.clamped);
        assert!(s.eigenvalues.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn cholesky_factor_has_closed_form() {
        let r = 0.6;
        let tc = sample_sigma_t(8, r).unwrap();
        let q = (1.0 - r * r).sqrt();
        for k in 0..8 {
            assert!((tc.factor[(k, 0)] - r.powi(k as i32)).abs() < 1e-14);
            for j in 1..=k {
                assert!((tc.factor[(k, j)] - q * r.powi((k - j) as i32)).abs() < 1e-14);
            }
        }
        let id = sample_sigma_t(4, 0.0).unwrap();
        assert_eq!(id.matrix, Mat::<f64>::identity(4, 4));
    }

    #[test]
    fn recursion_equals_cholesky_product() {
        let r = 0.5;
        let mut rng = stream_rng(11, 0, tag::NOISE);
        let w = gaussian_matrix(3, 30, &mut rng);
        let mut filtered = w.clone();
        ar1_filter(&mut filtered, r);
        let tc = sample_sigma_t(30, r).unwrap();
        let direct = &w * tc.factor.transpose();
        for i in 0..3 {
            for k in 0..30 {
                assert!((filtered[(i, k)] - direct[(i, k)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sim_spec_validation() {
        let p = ModelParams::default_experiment();
        assert!(SimSpec::new(10, 10, &p, 0, 1).is_err());
        assert!(SimSpec::new(10, 20, &p, 0, 0).is_err());
        let s = SimSpec::new(10, 40, &p, 0, 1).unwrap();
        assert_eq!(s.params.c(), 0.25);
        let bad = SimSpec { params: p, ..s };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn memory_guard_trips() {
        assert!(matches!(
            check_memory(100_000, 100_000),
            Err(Error::MemoryGuard { .. })
        ));
    }

    #[test]
    fn spiked_with_zero_levels_matches_noise_exactly() {
        let spec = SimSpec::new(200, 400, &ModelParams::default_experiment(), 4, 1).unwrap();
        let base = sample_covariance(&spec).unwrap();
        let spiked = sample_spiked(&spec, &SpikeSpec::new(vec![0.0, 0.0]).unwrap(), 0).unwrap();
        assert_eq!(base.eigenvalues, spiked.eigenvalues);
        assert!(sample_spiked(&spec, &SpikeSpec::new(vec![1.0; 3]).unwrap(), 0).is_err());
    }

    #[test]
    fn frame_is_orthonormal() {
        let q = random_frame(60, 4, &mut stream_rng(2, 0, tag::FRAME));
        let g = q.transpose() * &q;
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ar_modes_share_rates() {
        let a = HeterogeneousArParams::draw(100, 3);
        assert!(a.rates.iter().all(|&r| (0.0..1.0).contains(&r)));
        for (r, v) in a.rates.iter().zip(&a.noise_var) {
            assert_eq!(*v, 1.0 - r * r);
        }
        let het = sample_ar1(20, 50, ArMode::Heterogeneous, 3).unwrap();
        let hom = sample_ar1(20, 50, ArMode::Homogeneous, 3).unwrap();
        assert_eq!(het.eigenvalues.len(), 20);
        assert_ne!(het.eigenvalues, hom.eigenvalues);
    }
}
