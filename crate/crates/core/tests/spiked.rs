mod common;

use freelsd::lsd::{composed_cauchy, upper_edge};
use freelsd::spiked::{
    forward_map, q_coefficients, shrink, wigner_spike_map, wigner_spike_shrink, LOW_CONFIDENCE_BAND,
};
use freelsd::{Complex64, Error, ModelParams, SpikeSpec, SpikedModel};
use proptest::prelude::*;

fn default_model() -> SpikedModel {
    SpikedModel::new(ModelParams::default_experiment()).unwrap()
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn forward_matches_marchenko_pastur_oracle() {
    // β = 0, r = 0: the noise limit is Marchenko-Pastur and η solves
    // G_MP(η) = 1/θ, with G_MP from direct quadrature
    let c = 0.3;
    let model = SpikedModel::new(ModelParams::new(c, 1.0, 0.0, 0.0).unwrap()).unwrap();
    let (_, b) = common::mp_edges(c);
    assert!((model.support_edge() - b).abs() < 1e-6);
    let g_edge = common::mp_cauchy(c, Complex64::new(b + 1e-6, 0.0)).re;
    assert!((model.critical_theta() - 1.0 / g_edge).abs() < 1e-3 * model.critical_theta());
    for theta in [1.0, 1.5, 3.0, 8.0] {
        let out = model.forward(theta).unwrap();
        let oracle = bisect(|x| common::mp_cauchy(c, Complex64::new(x, 0.0)).re - 1.0 / theta, b + 1e-9, 100.0);
        assert!(out.detectable);
        assert!((out.eta - oracle).abs() < 1e-7 * oracle, "θ = {theta}: {} vs {oracle}", out.eta);
    }
}

#[test]
fn round_trip_above_the_transition() {
    let model = default_model();
    let crit = model.critical_theta();
    for k in 0..200 {
        let theta = crit * (1.05 + (10.0 - 1.05) * k as f64 / 199.0);
        let fwd = model.forward(theta).unwrap();
        let back = model.shrink_one(fwd.eta).unwrap();
        let hat = back.theta_hat.unwrap();
        assert!((hat - theta).abs() < 1e-6 * theta, "θ = {theta}: {hat}");
    }
}

#[test]
fn forward_is_increasing_and_biased_upward() {
    let model = default_model();
    let crit = model.critical_theta();
    let etas: Vec<f64> = (0..100)
        .map(|k| crit * (1.01 + 9.0 * k as f64 / 99.0))
        .map(|t| model.forward(t).unwrap().eta)
        .collect();
    assert!(etas.windows(2).all(|w| w[0] < w[1]));
    for k in 0..100 {
        let theta = crit * (1.01 + 9.0 * k as f64 / 99.0);
        assert!(etas[k] > theta && etas[k] > model.support_edge());
    }
}

#[test]
fn plateau_below_the_transition() {
    let model = default_model();
    for frac in [0.0, 0.1, 0.5, 0.99, 1.0] {
        let out = model.forward(frac * model.critical_theta()).unwrap();
        assert!(!out.detectable);
        assert_eq!(out.eta, model.support_edge());
    }
    for lambda in [0.5, 3.0, model.support_edge()] {
        let out = model.shrink_one(lambda).unwrap();
        assert!(out.theta_hat.is_none() && !out.detectable);
    }
}

#[test]
fn low_confidence_band() {
    let model = default_model();
    let edge = model.support_edge();
    assert!(model.shrink_one(edge * (1.0 + 0.5 * LOW_CONFIDENCE_BAND)).unwrap().low_confidence);
    assert!(!model.shrink_one(edge * (1.0 + 2.0 * LOW_CONFIDENCE_BAND)).unwrap().low_confidence);
}

#[test]
fn g_inverse_undoes_the_cauchy_transform() {
    let p = ModelParams::default_experiment();
    let model = SpikedModel::new(p).unwrap();
    for mult in [1.01, 1.5, 3.0, 20.0] {
        let x = mult * model.support_edge();
        let g = composed_cauchy(&p, Complex64::new(x, 1e-9), None, 1e-8).unwrap();
        assert!(g.im.abs() < 1e-6);
        let back = model.g_inverse(g.re).unwrap();
        assert!((back - x).abs() < 1e-7 * x, "{back} vs {x}");
    }
    // beyond G_C(edge) there is no outlier
    assert!(matches!(model.g_inverse(1.2 / model.critical_theta()), Err(Error::NoRoot { .. })));
}

#[test]
fn critical_theta_reference() {
    let model = default_model();
    assert!((model.support_edge() - 4.7187526).abs() < 1e-6);
    assert!((model.critical_theta() - 2.76135).abs() < 1e-4);
    assert_eq!(model.support_edge(), upper_edge(&ModelParams::default_experiment()).edge);
}

#[test]
fn spike_spec_validation_and_serde() {
    assert!(SpikeSpec::new(vec![3.0, 1.0, 1.0]).is_ok());
    assert!(SpikeSpec::new(vec![1.0, 3.0]).is_err());
    assert!(SpikeSpec::new(vec![1.0, -0.5]).is_err());
    assert!(SpikeSpec::new(vec![f64::NAN]).is_err());
    let spec: SpikeSpec = serde_json::from_str("[5.0, 2.0]").unwrap();
    assert_eq!(spec.rank(), 2);
    assert_eq!(serde_json::to_string(&spec).unwrap(), "[5.0,2.0]");
    assert!(serde_json::from_str::<SpikeSpec>("[2.0, 5.0]").is_err());
}

#[test]
fn free_functions_agree_with_the_model() {
    let p = ModelParams::default_experiment();
    let spec = SpikeSpec::new(vec![20.0, 10.0, 5.0]).unwrap();
    let fwd = forward_map(&p, &spec).unwrap();
    let etas: Vec<f64> = fwd.iter().map(|r| r.eta).collect();
    let back = shrink(&p, &etas).unwrap();
    for (b, t) in back.iter().zip(spec.thetas()) {
        assert!((b.theta_hat.unwrap() - t).abs() < 1e-6 * t);
    }
    assert!(shrink(&p, &[1.0, 2.0]).is_err());
}

#[test]
fn wigner_closed_forms_round_trip() {
    for sigma in [0.5, 1.0, 2.0] {
        for k in 0..100 {
            let theta = sigma * (1.001 + 9.0 * k as f64 / 99.0);
            let eta = wigner_spike_map(theta, sigma);
            assert!(eta > 2.0 * sigma);
            let back = wigner_spike_shrink(eta, sigma).unwrap();
            assert!((back - theta).abs() < 1e-10 * theta);
        }
        assert_eq!(wigner_spike_map(0.5 * sigma, sigma), 2.0 * sigma);
        assert_eq!(wigner_spike_shrink(2.0 * sigma, sigma), None);
    }
}

fn covariance_params() -> impl Strategy<Value = ModelParams> {
    (0.05f64..0.95, 0.2f64..3.0, 0.0f64..1.0, 0.0f64..0.9)
        .prop_map(|(c, a, frac, r)| ModelParams::new(c, a, 0.5 * a * frac, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn quartic_matches_the_factored_product(
        p in covariance_params(),
        wr in -2.0f64..2.0, wi in -2.0f64..2.0,
        xr in -5.0f64..10.0, xi in -2.0f64..2.0,
    ) {
        let w = Complex64::new(wr, wi);
        let x = Complex64::new(xr, xi);
        let q = q_coefficients(&p, w);
        let value: Complex64 = q.q.iter().rev().fold(Complex64::from(0.0), |acc, &c| acc * x + c);
        let oracle = common::quartic_factored(p.c(), p.alpha(), p.beta(), common::gamma_of(p.r()), w, x);
        let scale: f64 = q.q.iter().enumerate().map(|(k, c)| c.norm() * x.norm().powi(k as i32)).sum();
        prop_assert!((value - oracle).norm() <= 1e-10 * scale, "{} vs {}", value, oracle);
    }

    #[test]
    fn round_trip_over_parameters(p in covariance_params(), mult in 1.05f64..10.0) {
        let model = SpikedModel::new(p).unwrap();
        let theta = mult * model.critical_theta();
        let eta = model.forward(theta).unwrap().eta;
        let hat = model.shrink_one(eta).unwrap().theta_hat.unwrap();
        prop_assert!((hat - theta).abs() < 1e-6 * theta, "{:?}: {} vs {}", p, hat, theta);
    }
}
