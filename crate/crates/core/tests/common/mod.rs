//! Independent oracles: direct quadrature of the defining integrals and
//! closed-form distribution functions. Nothing here calls the transform code.
#![allow(dead_code)]

use std::f64::consts::PI;

use freelsd::Complex64;

/// Composite Simpson on `[a, b]` with `panels` (even) intervals.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize) -> Complex64 {
    assert!(panels % 2 == 0);
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * k as f64);
    }
    acc * (h / 3.0)
}

/// `∫ ρ(x) g(x) dx` for a density with square-root edges on `[lo, hi]`,
/// written as `ρ(x) = √((hi - x)(x - lo)) k(x)`. The substitution
/// `x = mid - half·cos θ` removes both edge singularities.
fn sqrt_edge_integral<K, G>(lo: f64, hi: f64, upper: f64, k: K, g: G) -> Complex64
where
    K: Fn(f64) -> f64,
    G: Fn(f64) -> Complex64,
{
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    simpson(
        |th| {
            let x = mid - half * th.cos();
            let s = half * th.sin();
            g(x) * (s * s * k(x))
        },
        0.0,
        upper,
        20_000,
    )
}

pub fn mp_edges(c: f64) -> (f64, f64) {
    ((1.0 - c.sqrt()).powi(2), (1.0 + c.sqrt()).powi(2))
}

pub fn mp_cauchy(c: f64, z: Complex64) -> Complex64 {
    let (a, b) = mp_edges(c);
    sqrt_edge_integral(a, b, PI, |x| 1.0 / (2.0 * PI * c * x), |x| 1.0 / (z - x))
}

pub fn semicircle_cauchy(alpha: f64, beta: f64, z: Complex64) -> Complex64 {
    let k = 1.0 / (2.0 * PI * beta * beta);
    sqrt_edge_integral(alpha - 2.0 * beta, alpha + 2.0 * beta, PI, |_| k, |x| 1.0 / (z - x))
}

/// Symbol of the Toeplitz matrix `r^|i-j|`.
pub fn toeplitz_symbol(r: f64, omega: f64) -> f64 {
    (1.0 - r * r) / (1.0 - 2.0 * r * omega.cos() + r * r)
}

/// The LSD of `r^|i-j|` is the law of the symbol at a uniform frequency.
pub fn toeplitz_cauchy(r: f64, z: Complex64) -> Complex64 {
    simpson(|w| 1.0 / (z - toeplitz_symbol(r, w)), 0.0, PI, 20_000) / PI
}

pub fn mp_cdf(c: f64, x: f64) -> f64 {
    let (a, b) = mp_edges(c);
    if x <= a {
        return 0.0;
    }
    if x >= b {
        return 1.0;
    }
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let upper = ((mid - x) / half).acos();
    sqrt_edge_integral(a, b, upper, |x| 1.0 / (2.0 * PI * c * x), |_| Complex64::from(1.0)).re
}

pub fn semicircle_cdf(alpha: f64, beta: f64, x: f64) -> f64 {
    let u = ((x - alpha) / beta).clamp(-2.0, 2.0);
    0.5 + u * (4.0 - u * u).sqrt() / (4.0 * PI) + (u / 2.0).asin() / PI
}

/// `P(symbol(ω) ≤ x)`: the symbol decreases in `ω` on `[0, π]`.
pub fn toeplitz_cdf(r: f64, x: f64) -> f64 {
    let (a, b) = ((1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r));
    if x <= a {
        return 0.0;
    }
    if x >= b {
        return 1.0;
    }
    let cos_w = ((1.0 + r * r) - (1.0 - r * r) / x) / (2.0 * r);
    1.0 - cos_w.clamp(-1.0, 1.0).acos() / PI
}

/// Principal square root; the products below are symmetric in the sign.
fn sqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// `Π_{s,t = ±1} [(γ + s·A)(α + t·B) - 2/(c v)]` with
/// `A² = γ² - 1 + 1/(c² m²)` and `B² = α² + 4β² m`. Clearing both radicals
/// from `1 = (c v / 2)(γ + A)(α + B)` gives this product.
fn radical_product(c: f64, alpha: f64, beta: f64, gamma: f64, m: Complex64, v: Complex64) -> Complex64 {
    let a = sqrt(gamma * gamma - 1.0 + 1.0 / (c * c * m * m));
    let b = sqrt(alpha * alpha + 4.0 * beta * beta * m);
    let k = 2.0 / (c * v);
    let mut prod = Complex64::from(1.0);
    for s in [1.0, -1.0] {
        for t in [1.0, -1.0] {
            prod *= (gamma + s * a) * (alpha + t * b) - k;
        }
    }
    prod
}

/// Value at `g` of the degree-8 polynomial in `G_C(z)`, built from the
/// factored product instead of the coefficient list.
pub fn degree8_factored(c: f64, alpha: f64, beta: f64, gamma: f64, z: Complex64, g: Complex64) -> Complex64 {
    let m = z * g - 1.0;
    g.powi(4) * m * m / 16.0 * radical_product(c, alpha, beta, gamma, m, g)
}

/// Value at `x` of the quartic satisfied by `G_C⁻¹(w)`.
pub fn quartic_factored(c: f64, alpha: f64, beta: f64, gamma: f64, w: Complex64, x: Complex64) -> Complex64 {
    let m = x * w - 1.0;
    w.powi(4) * m * m / 16.0 * radical_product(c, alpha, beta, gamma, m, w)
}

/// `(1 + r²)/(1 - r²)`, recomputed here.
pub fn gamma_of(r: f64) -> f64 {
    (1.0 + r * r) / (1.0 - r * r)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
