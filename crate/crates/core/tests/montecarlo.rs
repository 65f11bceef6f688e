mod common;

use freelsd::analysis::{esd_cdf, ks_distance, step_cdf, CdfCurve, CdfKind};
use freelsd::lsd::lsd_density;
use freelsd::montecarlo::{
    check_memory, eigenvalues, kronecker_check, sample_ar1, sample_ar1_rates, sample_covariance,
    sample_covariance_trials, sample_sigma_s, sample_sigma_t, sample_spiked, sample_wigner,
    toeplitz_matrix, ArMode, Ensemble, HeterogeneousArParams, ELEMENT_CAP,
};
use freelsd::{Error, InversionConfig, ModelParams, SimSpec, SpikeSpec, SpikedModel};

/// Analytic CDF sampled finely enough for KS comparisons.
fn analytic_cdf<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> CdfCurve {
    let xs: Vec<f64> = (0..=4000).map(|k| lo + (hi - lo) * k as f64 / 4000.0).collect();
    let values = xs.iter().map(|&x| f(x)).collect();
    CdfCurve { xs, values, kind: CdfKind::Linear }
}

#[test]
fn wigner_follows_the_semicircle() {
    let v = sample_wigner(1500, 7).unwrap();
    let eig = eigenvalues(&v).unwrap();
    let law = analytic_cdf(|x| common::semicircle_cdf(0.0, 1.0, x), -2.0, 2.0);
    let ks = ks_distance(&step_cdf(&eig), &law);
    assert!(ks <= 0.03, "KS {ks}");
}

#[test]
fn spatial_covariance_is_a_shifted_semicircle() {
    let s = sample_sigma_s(1500, 1.0, 0.5, 3).unwrap();
    // the limit touches zero, so edge fluctuations may clamp a few values
    assert!(s.clamped <= 5, "{}", s.clamped);
    assert_eq!(sample_sigma_s(400, 1.0, 0.3, 3).unwrap().clamped, 0);
    let law = analytic_cdf(|x| common::semicircle_cdf(1.0, 0.5, x), 0.0, 2.0);
    assert!(ks_distance(&step_cdf(&s.eigenvalues), &law) <= 0.03);
    // the square root squares back to the matrix
    let back = &s.sqrt * &s.sqrt;
    let worst = (0..50).flat_map(|i| (0..50).map(move |j| (i, j))).map(|(i, j)| (back[(i, j)] - s.matrix[(i, j)]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10);
    // β > α/2 leaves negative eigenvalues to clamp
    assert!(sample_sigma_s(400, 0.2, 0.5, 3).unwrap().clamped > 0);
}

#[test]
fn toeplitz_spectrum_stays_in_the_symbol_range() {
    for r in [0.3, 0.5, 0.9] {
        let t = sample_sigma_t(600, r).unwrap();
        let eig = eigenvalues(&t.matrix).unwrap();
        let (a, b) = ((1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r));
        assert!(eig[0] >= a - 1e-10 && *eig.last().unwrap() <= b + 1e-10);
        // boundary effects decay with the correlation length 1/(1 - r)
        let law = analytic_cdf(|x| common::toeplitz_cdf(r, x), a, b);
        let ks = ks_distance(&step_cdf(&eig), &law);
        assert!(ks <= 0.01 / (1.0 - r), "r = {r}: KS {ks}");
    }
    let m = toeplitz_matrix(4, 0.5);
    assert_eq!(m[(0, 3)], 0.125);
    assert_eq!(m[(2, 1)], 0.5);
}

#[test]
fn sample_covariance_is_deterministic_and_psd() {
    let p = ModelParams::default_experiment();
    let spec = SimSpec::new(200, 400, &p, 11, 3).unwrap();
    let a = sample_covariance(&spec).unwrap();
    let b = sample_covariance(&spec).unwrap();
    assert_eq!(a, b);
    assert!(a.eigenvalues[0] >= -1e-10);
    assert!(a.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    let trials = sample_covariance_trials(&spec).unwrap();
    assert_eq!(trials.len(), 3);
    assert_eq!(trials[0], a);
    assert_ne!(trials[0].eigenvalues, trials[1].eigenvalues);
    let other = sample_covariance(&SimSpec { seed: 12, ..spec }).unwrap();
    assert_ne!(a.eigenvalues, other.eigenvalues);
}

#[test]
fn seeds_agree_in_distribution() {
    let p = ModelParams::default_experiment();
    let a = sample_covariance(&SimSpec::new(800, 1600, &p, 1, 1).unwrap()).unwrap();
    let b = sample_covariance(&SimSpec::new(800, 1600, &p, 2, 1).unwrap()).unwrap();
    let ks = ks_distance(&esd_cdf(&a), &esd_cdf(&b));
    assert!(ks <= 0.03, "KS {ks}");
}

#[test]
fn marchenko_pastur_reduction_of_the_simulator() {
    let p = ModelParams::new(0.5, 1.0, 0.0, 0.0).unwrap();
    let sample = sample_covariance(&SimSpec::new(500, 1000, &p, 5, 1).unwrap()).unwrap();
    let (a, b) = common::mp_edges(0.5);
    let law = analytic_cdf(|x| common::mp_cdf(0.5, x), a, b);
    let ks = ks_distance(&esd_cdf(&sample), &law);
    assert!(ks <= 0.05, "KS {ks}");
}

#[test]
fn separable_sample_matches_the_engine() {
    let p = ModelParams::default_experiment();
    let sample = sample_covariance(&SimSpec::new(600, 1200, &p, 9, 1).unwrap()).unwrap();
    let curve = lsd_density(&p, &InversionConfig::default()).unwrap();
    let ks = freelsd::analysis::ks_to_density(&sample, &curve).unwrap();
    assert!(ks <= 0.05, "KS {ks}");
}

#[test]
fn white_rows_reduce_to_marchenko_pastur() {
    let sample = sample_ar1_rates(&vec![0.0; 500], 1000, 4, Ensemble::Ar1Homogeneous).unwrap();
    let (a, b) = common::mp_edges(0.5);
    let law = analytic_cdf(|x| common::mp_cdf(0.5, x), a, b);
    assert!(ks_distance(&esd_cdf(&sample), &law) <= 0.05);
    assert!(sample_ar1_rates(&[0.5, 1.0], 10, 0, Ensemble::Ar1Homogeneous).is_err());
}

#[test]
fn homogeneous_ar_matches_the_separable_ensemble() {
    let (n, t, seed) = (1000, 2000, 21);
    let r_bar = HeterogeneousArParams::draw(n, seed).mean_rate;
    let ar = sample_ar1(n, t, ArMode::Homogeneous, seed).unwrap();
    let p = ModelParams::new(0.5, 1.0, 0.0, r_bar).unwrap();
    let sep = sample_covariance(&SimSpec::new(n, t, &p, seed + 1, 1).unwrap()).unwrap();
    let ks = ks_distance(&esd_cdf(&ar), &esd_cdf(&sep));
    assert!(ks <= 0.05, "KS {ks}");
}

#[test]
fn ar_rates_are_uniform() {
    let ar = HeterogeneousArParams::draw(20_000, 3);
    assert!(ar.rates.iter().all(|r| (0.0..1.0).contains(r)));
    assert!((ar.mean_rate - 0.5).abs() < 0.01);
    assert!((ar.mean_noise_var - (1.0 - ar.mean_rate * ar.mean_rate)).abs() < 1e-15);
    assert_eq!(ar.rates, HeterogeneousArParams::draw(20_000, 3).rates);
}

#[test]
fn strong_spike_separates_from_the_bulk() {
    let p = ModelParams::default_experiment();
    let model = SpikedModel::new(p).unwrap();
    let theta = 10.0 * model.critical_theta();
    let spec = SimSpec::new(1000, 2000, &p, 8, 1).unwrap();
    let spike = SpikeSpec::new(vec![theta]).unwrap();
    let sample = sample_spiked(&spec, &spike, 0).unwrap();
    let eta = model.forward(theta).unwrap().eta;
    assert!((sample.largest() - eta).abs() < 0.02 * eta, "{} vs {eta}", sample.largest());
    assert!(sample.eigenvalues[998] < model.support_edge() * 1.05);
    // rank is capped at n / 100
    let spec_small = SimSpec::new(100, 200, &p, 8, 1).unwrap();
    assert!(sample_spiked(&spec_small, &SpikeSpec::new(vec![5.0, 4.0]).unwrap(), 0).is_err());
}

#[test]
fn kronecker_structure() {
    let p = ModelParams::default_experiment();
    let check = kronecker_check(3, 4, &p, 40_000, 17).unwrap();
    assert!(check.max_abs_deviation < 0.05, "{}", check.max_abs_deviation);
    assert_eq!(check.expected.len(), 12);
}

#[test]
fn memory_guard() {
    assert!(check_memory(1000, 2000).is_ok());
    let err = check_memory(ELEMENT_CAP, 2).unwrap_err();
    assert!(matches!(err, Error::MemoryGuard { .. }));
    assert!(SimSpec::new(10, 10, &ModelParams::default_experiment(), 0, 1).is_err());
}
