//! Limiting spectral distribution of the separable sample covariance
//! `C = (1/T) Σs^{1/2} W Σt Wᵀ Σs^{1/2}`.
//!
//! `G_C(z)` solves an algebraic equation whose squared-out form is a
//! polynomial of degree eight in `G`. At each grid point the eight roots are
//! computed, the physical one is selected, and the density is recovered by
//! Stieltjes inversion `ρ(x) = -Im G(x + iy) / π` as `y → 0⁺`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;
use crate::transforms::{principal_sqrt, spatial_sqrt, ModelParams, SupportInterval};

/// Coefficients `p₀..p₈` of the degree-8 polynomial in `G_C(z)`, ascending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Degree8Coefficients {
    pub p: [Complex64; 9],
}

impl Degree8Coefficients {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.p
    }

    pub fn eval(&self, g: Complex64) -> Complex64 {
        poly::eval(&self.p, g)
    }
}

/// Evaluates `p₀..p₈` at `z`.
///
/// The `z²` term of `p₆` is `6β⁴z²`; a resultant computation confirms this
/// coefficient and it matches the corresponding term of the quartic used by
/// the spiked model.
pub fn p_coefficients(params: &ModelParams, z: Complex64) -> Degree8Coefficients {
    let (c, a, b, g) = (params.c(), params.alpha(), params.beta(), params.gamma());
    let (b2, b4) = (b * b, b.powi(4));
    let (c2, c3, c4) = (c * c, c.powi(3), c.powi(4));
    let (a2, g2) = (a * a, g * g);
    let z2 = z * z;
    let z3 = z2 * z;
    let z4 = z3 * z;

    let p8 = b4 * z4;
    let p7 = -4.0 * b4 * z3;
    let p6 = 6.0 * b4 * z2 - 2.0 * b4 * z2 / c2 + 2.0 * a * b2 * g * z3 / c;
    let p5 = -4.0 * b4 * z + 4.0 * b4 * z / c2 - 6.0 * a * b2 * g * z2 / c + 2.0 * b2 * z3 / c2
        - 4.0 * b2 * g2 * z3 / c2;
    let p4 = Complex64::from(b4 + b4 / c4 - 2.0 * b4 / c2) - 2.0 * a * b2 * g * z / c3
        + 6.0 * a * b2 * g * z / c
        + a2 * z2 / c2
        - 6.0 * b2 * z2 / c2
        + 12.0 * b2 * g2 * z2 / c2;
    let p3 = Complex64::from(2.0 * a * b2 * g / c3 - 2.0 * a * b2 * g / c) - 2.0 * b2 * z / c4
        - 2.0 * a2 * z / c2
        + 6.0 * b2 * z / c2
        - 12.0 * b2 * g2 * z / c2
        - 2.0 * a * g * z2 / c3;
    let p2 = Complex64::from(
        -a2 / c4 + 2.0 * b2 / c4 + a2 / c2 - 2.0 * b2 / c2 + 4.0 * b2 * g2 / c2,
    ) + 4.0 * a * g * z / c3
        + z2 / c4;
    let p1 = Complex64::from(-2.0 * a * g / c3) - 2.0 * z / c4;
    let p0 = Complex64::from(1.0 / c4);

    Degree8Coefficients { p: [p0, p1, p2, p3, p4, p5, p6, p7, p8] }
}

/// `|1 - (c/2) G (γ + √(γ² - 1 + 1/(c² m²))) (α + √(α² + 4β² m))|` with
/// `m = zG - 1`: the mismatch of the unsquared equation for `G_C`.
pub fn unsquared_residual(params: &ModelParams, z: Complex64, g: Complex64) -> f64 {
    let m = z * g - 1.0;
    let value = relation_factor(params, m) * g * (0.5 * params.c());
    let r = (1.0 - value).norm();
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

/// `(γ + √(γ² - 1 + 1/(c² m²))) (α + √(α² + 4β² m))`.
pub(crate) fn relation_factor(params: &ModelParams, m: Complex64) -> Complex64 {
    let (c, gamma) = (params.c(), params.gamma());
    let temporal = gamma + principal_sqrt(gamma * gamma - 1.0 + 1.0 / (c * c * m * m));
    let spatial = params.alpha() + spatial_sqrt(params.alpha(), params.beta(), m);
    temporal * spatial
}

/// Roots of the degree-8 polynomial (degree may drop after trimming).
pub fn solve_roots(coeffs: &Degree8Coefficients) -> Result<Vec<Complex64>> {
    poly::solve_roots(coeffs.as_slice())
}

/// Roots that are admissible values of `G_C(z)`: `Im G < 0`, `Im(zG) < 0`
/// (the measure lives on `[0, ∞)`) and an unsquared residual within `tol`.
pub fn physical_candidates(
    roots: &[Complex64],
    z: Complex64,
    params: &ModelParams,
    tol: f64,
) -> Vec<Complex64> {
    roots
        .iter()
        .copied()
        .filter(|g| g.im < 0.0 && (z * g).im < 0.0)
        .filter(|&g| unsquared_residual(params, z, g) <= tol)
        .collect()
}

/// Picks the physical root; ties go to the candidate closest to `prev`, or
/// to `1/z` without a previous value.
pub fn select_root(
    roots: &[Complex64],
    z: Complex64,
    params: &ModelParams,
    prev: Option<Complex64>,
    tol: f64,
) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::domain(format!("root selection needs Im(z) > 0, got {z}")));
    }
    let target = prev.unwrap_or(1.0 / z);
    physical_candidates(roots, z, params, tol)
        .into_iter()
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
        .ok_or_else(|| Error::Selection { z, roots: roots.to_vec() })
}

/// `G_C(z)` for a single point in the upper half-plane.
pub fn composed_cauchy(
    params: &ModelParams,
    z: Complex64,
    prev: Option<Complex64>,
    tol: f64,
) -> Result<Complex64> {
    let roots = solve_roots(&p_coefficients(params, z))?;
    select_root(&roots, z, params, prev, tol)
}

/// Upper edge of the LSD support and the value of `M_C` there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkEdge {
    pub edge: f64,
    pub m_star: f64,
}

/// `N_C` restricted to `m > 0`, where it is real.
pub fn n_composed_real(params: &ModelParams, m: f64) -> f64 {
    let (c, gamma, alpha, beta) = (params.c(), params.gamma(), params.alpha(), params.beta());
    let temporal = gamma + (gamma * gamma - 1.0 + 1.0 / (c * c * m * m)).sqrt();
    let spatial = alpha + (alpha * alpha + 4.0 * beta * beta * m).sqrt();
    0.5 * c * (m + 1.0) * temporal * spatial
}

/// The upper edge `a` of the support is `min_{m > 0} N_C(m)`: on the real
/// axis to the right of the support, `M_C` increases from `0` at `+∞` to
/// `m*` at the edge, and `N_C` is its inverse on `(0, m*)`.
pub fn upper_edge(params: &ModelParams) -> BulkEdge {
    let f = |log_m: f64| n_composed_real(params, log_m.exp());
    let (lo, hi, count) = (-16.0f64, 16.0f64, 2001);
    let step = (hi - lo) / (count - 1) as f64;
    let mut best: usize = 0;
    let mut best_value = f64::INFINITY;
    for i in 0..count {
        let v = f(lo + step * i as f64);
        if v < best_value {
            best_value = v;
            best = i;
        }
    }
    let mut a = lo + step * best.saturating_sub(1) as f64;
    let mut b = lo + step * (best + 1).min(count - 1) as f64;
    // golden-section refinement in log m
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-13 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    let m_star = (0.5 * (a + b)).exp();
    BulkEdge { edge: n_composed_real(params, m_star), m_star }
}

/// Uniform grid `lo..=hi` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    pub const DEFAULT_COUNT: usize = 2001;

    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        let grid = GridSpec { lo, hi, count };
        grid.validate()?;
        Ok(grid)
    }

    /// `[0, 1.25 a]` where `a` is the upper bulk edge from [`upper_edge`].
    pub fn auto(params: &ModelParams) -> Self {
        let hi = 1.25 * upper_edge(params).edge;
        GridSpec { lo: 0.0, hi, count: Self::DEFAULT_COUNT }
    }

    /// `[0, 4 (α + 2β) (1 + r)/(1 - r) (1 + √c)²]`, a crude a-priori bound on
    /// the support that needs no root finding. With 2001 points it leaves too
    /// few samples under the bulk to integrate the mass to 1e-3.
    pub fn loose(params: &ModelParams) -> Self {
        let r = params.r();
        let hi = 4.0
            * (params.alpha() + 2.0 * params.beta())
            * (1.0 + r)
            / (1.0 - r)
            * (1.0 + params.c().sqrt()).powi(2);
        GridSpec { lo: 0.0, hi, count: Self::DEFAULT_COUNT }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {}", self.count)));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::invalid(format!("grid bounds must satisfy lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.hi } else { self.lo + h * i as f64 })
            .collect()
    }

    /// Midpoints of `count` equal cells covering `[lo, hi]`; never hits an edge.
    pub fn open_points(&self) -> Vec<f64> {
        let h = (self.hi - self.lo) / self.count as f64;
        (0..self.count).map(|i| self.lo + h * (i as f64 + 0.5)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    pub epsilon_schedule: Vec<f64>,
    /// `None` selects [`GridSpec::auto`].
    pub grid: Option<GridSpec>,
    pub density_floor: f64,
    pub residual_tol: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            epsilon_schedule: vec![1e-3, 1e-4, 1e-5],
            grid: None,
            density_floor: 1e-8,
            residual_tol: 1e-8,
        }
    }
}

impl InversionConfig {
    pub fn with_grid(grid: GridSpec) -> Self {
        InversionConfig { grid: Some(grid), ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon_schedule.is_empty() {
            return Err(Error::invalid("epsilon schedule is empty"));
        }
        if self.epsilon_schedule.iter().any(|&y| !(y > 0.0 && y.is_finite())) {
            return Err(Error::invalid("epsilon offsets must be positive"));
        }
        if self.epsilon_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("epsilon schedule must be strictly decreasing"));
        }
        if !(self.density_floor > 0.0 && self.residual_tol > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if let Some(grid) = &self.grid {
            grid.validate()?;
        }
        Ok(())
    }

    fn resolve_grid(&self, params: Option<&ModelParams>) -> Result<GridSpec> {
        match (self.grid, params) {
            (Some(grid), _) => Ok(grid),
            (None, Some(p)) => Ok(GridSpec::auto(p)),
            (None, None) => Err(Error::invalid("a grid is required for this inversion")),
        }
    }
}

/// Lagrange weights that extrapolate values sampled at `ys` to `y = 0`.
pub fn extrapolation_weights(ys: &[f64]) -> Vec<f64> {
    (0..ys.len())
        .map(|k| {
            ys.iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &yj)| yj / (yj - ys[k]))
                .product()
        })
        .collect()
}

/// A sampled density with its detected support and trapezoid mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub xs: Vec<f64>,
    pub density: Vec<f64>,
    pub support: SupportInterval,
    pub mass: f64,
}

impl DensityCurve {
    /// Clamps negative values, detects the support as the span of points with
    /// density at or above `floor`, and integrates by the trapezoid rule.
    pub fn from_samples(xs: Vec<f64>, mut density: Vec<f64>, floor: f64) -> Self {
        for d in density.iter_mut() {
            if !(*d > 0.0) {
                *d = 0.0;
            }
        }
        let first = density.iter().position(|&d| d >= floor);
        let last = density.iter().rposition(|&d| d >= floor);
        let support = match (first, last) {
            (Some(i), Some(j)) => SupportInterval::new(xs[i], xs[j]),
            _ => SupportInterval::new(xs[0], xs[0]),
        };
        let mass = trapezoid(&xs, &density);
        DensityCurve { xs, density, support, mass }
    }

    /// Linear interpolation; zero outside the sampled range.
    pub fn value_at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 0 || x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&v| v <= x);
        if i == 0 {
            return self.density[0];
        }
        if i >= n {
            return self.density[n - 1];
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let t = (x - x0) / (x1 - x0);
        self.density[i - 1] * (1.0 - t) + self.density[i] * t
    }
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

fn ensure_bracketed(curve: DensityCurve) -> Result<DensityCurve> {
    if curve.mass < 0.9 {
        return Err(Error::Grid { mass: curve.mass });
    }
    Ok(curve)
}

/// Stieltjes inversion of an arbitrary Cauchy transform over `cfg`'s grid.
///
/// `cauchy(z, prev)` receives the value found at the previous (larger) offset
/// for the same abscissa.
pub fn invert_cauchy<F>(cauchy: F, cfg: &InversionConfig, grid: GridSpec) -> Result<DensityCurve>
where
    F: Fn(Complex64, Option<Complex64>) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    grid.validate()?;
    let weights = extrapolation_weights(&cfg.epsilon_schedule);
    let xs = grid.points();
    let density = xs
        .par_iter()
        .map(|&x| {
            let mut prev = None;
            let mut acc = 0.0;
            for (&y, &w) in cfg.epsilon_schedule.iter().zip(&weights) {
                let g = cauchy(Complex64::new(x, y), prev)?;
                acc += w * (-g.im / std::f64::consts::PI);
                prev = Some(g);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DensityCurve::from_samples(xs, density, cfg.density_floor))
}

/// LSD of `C` by solving the degree-8 polynomial at every grid point.
pub fn lsd_density(params: &ModelParams, cfg: &InversionConfig) -> Result<DensityCurve> {
    let grid = cfg.resolve_grid(Some(params))?;
    let tol = cfg.residual_tol;
    let curve = invert_cauchy(|z, prev| composed_cauchy(params, z, prev, tol), cfg, grid)?;
    log::debug!(
        "lsd: support [{:.6}, {:.6}], mass {:.6}",
        curve.support.lo,
        curve.support.hi,
        curve.mass
    );
    ensure_bracketed(curve)
}

/// Stieltjes inversion of a closed-form base-model Cauchy transform.
pub fn base_model_density(
    model: &crate::transforms::BaseModel,
    cfg: &InversionConfig,
) -> Result<DensityCurve> {
    let grid = cfg.resolve_grid(None)?;
    let curve = invert_cauchy(|z, _| crate::transforms::cauchy(model, z), cfg, grid)?;
    ensure_bracketed(curve)
}

/// Analytic Toeplitz LSD `1 / (π x √((x - a)(b - x)))` on the midpoints of
/// `grid`, so no sample falls on an integrable edge singularity.
pub fn toeplitz_lsd_density(r: f64, grid: GridSpec) -> Result<DensityCurve> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("Toeplitz decay must lie in (0, 1), got {r}")));
    }
    grid.validate()?;
    let model = crate::transforms::BaseModel::ExponentialToeplitz { r };
    let xs = grid.open_points();
    let density: Vec<f64> = xs.iter().map(|&x| model.density(x)).collect();
    let mut curve = DensityCurve::from_samples(xs, density, 0.0);
    // every positive sample is inside the analytic support
    let first = curve.density.iter().position(|&d| d > 0.0);
    let last = curve.density.iter().rposition(|&d| d > 0.0);
    if let (Some(i), Some(j)) = (first, last) {
        curve.support = SupportInterval::new(curve.xs[i], curve.xs[j]);
    }
    Ok(curve)
}

/// Every root and the selected one along a path of evaluation points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyGridSolution {
    pub zs: Vec<Complex64>,
    pub g: Vec<Complex64>,
    pub residual: Vec<f64>,
    pub all_roots: Vec<Vec<Complex64>>,
}

/// Solves along `zs` in order, continuing from the previous point's root.
pub fn cauchy_grid(params: &ModelParams, zs: &[Complex64], tol: f64) -> Result<CauchyGridSolution> {
    let mut out = CauchyGridSolution {
        zs: zs.to_vec(),
        g: Vec::with_capacity(zs.len()),
        residual: Vec::with_capacity(zs.len()),
        all_roots: Vec::with_capacity(zs.len()),
    };
    let mut prev = None;
    for &z in zs {
        let roots = solve_roots(&p_coefficients(params, z))?;
        let g = select_root(&roots, z, params, prev, tol)?;
        out.residual.push(unsquared_residual(params, z, g));
        out.g.push(g);
        out.all_roots.push(roots);
        prev = Some(g);
    }
    Ok(out)
}
