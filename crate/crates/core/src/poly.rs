//! Complex polynomial roots by Aberth-Ehrlich simultaneous iteration.
//!
//! Coefficients are stored in ascending order, `p[0] + p[1] x + ... + p[n] xⁿ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Leading coefficients smaller than this fraction of the largest one are
/// treated as zero and the degree is reduced.
pub const TRIM_RATIO: f64 = 1e-14;

const MAX_ITERATIONS: usize = 500;

/// Value and derivative of the polynomial at `x` (Horner).
pub fn eval_with_derivative(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &a in p.iter().rev() {
        deriv = deriv * x + value;
        value = value * x + a;
    }
    (value, deriv)
}

pub fn eval(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

/// `Σ |p_i| |x|^i`, the natural scale for judging a residual at `x`.
pub fn eval_scale(p: &[Complex64], x: Complex64) -> f64 {
    let r = x.norm();
    p.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

/// `|p(x)| / Σ |p_i| |x|^i`.
pub fn relative_residual(p: &[Complex64], x: Complex64) -> f64 {
    let scale = eval_scale(p, x);
    if scale == 0.0 {
        0.0
    } else {
        eval(p, x).norm() / scale
    }
}

/// Drops leading coefficients below `TRIM_RATIO * max |p_i|`.
pub fn trim(p: &[Complex64]) -> Result<&[Complex64]> {
    let max = p.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if !max.is_finite() {
        return Err(Error::domain("polynomial has non-finite coefficients"));
    }
    if max == 0.0 {
        return Err(Error::Degenerate);
    }
    let threshold = TRIM_RATIO * max;
    let top = p.iter().rposition(|a| a.norm() >= threshold).ok_or(Error::Degenerate)?;
    Ok(&p[..=top])
}

/// All complex roots of `p`, with multiplicity, after trimming negligible
/// leading coefficients. A nonzero constant has no roots.
///
/// A trimmed coefficient can still matter at large `|x|`, so when anything
/// was dropped the roots are polished against the full polynomial.
pub fn solve_roots(full: &[Complex64]) -> Result<Vec<Complex64>> {
    let p = trim(full)?;
    let mut roots = solve_trimmed(p)?;
    if p.len() < full.len() {
        for root in roots.iter_mut().filter(|r| r.norm() > 0.0) {
            polish(full, root);
        }
    }
    Ok(roots)
}

fn solve_trimmed(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let shift = p.iter().position(|&a| a != zero).unwrap_or(0);
    let mut roots = vec![zero; shift];
    let reduced = &p[shift..];
    let degree = reduced.len() - 1;
    if degree == 0 {
        return Ok(roots);
    }
    let lead = reduced[degree];
    let monic: Vec<Complex64> = reduced.iter().map(|&a| a / lead).collect();
    match degree {
        1 => roots.push(-monic[0]),
        2 => {
            let (b, c) = (monic[1], monic[0]);
            let disc = (b * b - 4.0 * c).sqrt();
            // choose the sign that avoids cancellation, then use the product
            let q = if (b.conj() * disc).re >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
            if q == zero {
                roots.extend([zero, zero]);
            } else {
                roots.extend([q, c / q]);
            }
        }
        _ => roots.extend(aberth(&monic)),
    }
    Ok(roots)
}

fn initial_guesses(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    // Fujiwara's bound on the root moduli.
    let mut bound: f64 = 0.0;
    for k in 1..=n {
        let mut a = monic[n - k].norm();
        if k == n {
            a *= 0.5;
        }
        bound = bound.max(a.powf(1.0 / k as f64));
    }
    let radius = (2.0 * bound).max(f64::MIN_POSITIVE);
    (0..n)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn aberth(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let mut z = initial_guesses(monic);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut moved = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (value, deriv) = eval_with_derivative(monic, z[i]);
            if value.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = value / deriv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        1.0 / d
                    }
                })
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    for root in z.iter_mut() {
        polish(monic, root);
    }
    z
}

/// A couple of Newton steps, kept only while they reduce `|p|`.
fn polish(p: &[Complex64], root: &mut Complex64) {
    let mut best = eval(p, *root).norm();
    for _ in 0..3 {
        let (value, deriv) = eval_with_derivative(p, *root);
        if deriv.norm() == 0.0 {
            return;
        }
        let candidate = *root - value / deriv;
        let r = eval(p, candidate).norm();
        if !(r < best) {
            return;
        }
        best = r;
        *root = candidate;
    }
}
