use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{integrate, Quadrature};
use crate::error::{Error, Result};
use crate::params::{SystemParams, AMPLITUDE_NORM_TOLERANCE};

/// Upper limit of the arrival-time integrals, in units of `1/κ`.
pub const DECAY_HORIZON: f64 = 40.0;
pub const QUADRATURE_ABS_TOL: f64 = 1e-12;

fn alpha_beta_sq(alpha: Complex64, beta: Complex64) -> Result<f64> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if !((norm - 1.0).abs() <= AMPLITUDE_NORM_TOLERANCE) {
        return Err(Error::NotNormalized(norm));
    }
    Ok((alpha * beta).norm_sqr())
}

/// Dark-port herald probability `2|αβ|² sin²(g t / 2)`.
pub fn success_probability(alpha: Complex64, beta: Complex64, g: f64, t: f64) -> Result<f64> {
    let ab = alpha_beta_sq(alpha, beta)?;
    Ok(2.0 * ab * (0.5 * g * t).sin().powi(2))
}

/// `2|αβ|²`, reached at every [`optimal_time`].
pub fn max_success_probability(alpha: Complex64, beta: Complex64) -> Result<f64> {
    Ok(2.0 * alpha_beta_sq(alpha, beta)?)
}

/// The `n`-th interaction time `(2n+1)π/g` maximizing the herald probability.
pub fn optimal_time(g: f64, n: u32) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::NoOptimum);
    }
    Ok((2 * n + 1) as f64 * PI / g)
}

/// `g²/(g²+κ²)`: the total herald probability per unit `|αβ|²` when the
/// photon leaks out at rate κ.
pub fn p_tot_coefficient(g: f64, kappa: f64) -> Result<f64> {
    if !(g > 0.0) || !(kappa > 0.0) {
        return Err(Error::DegenerateParams(format!(
            "need g > 0 and kappa > 0 (g = {g}, kappa = {kappa})"
        )));
    }
    let r = g / kappa;
    Ok(r * r / (1.0 + r * r))
}

/// Closed-form `P_tot = |αβ|² g²/(g²+κ²)`.
pub fn total_probability(alpha: Complex64, beta: Complex64, g: f64, kappa: f64) -> Result<f64> {
    let ab = alpha_beta_sq(alpha, beta)?;
    Ok(ab * p_tot_coefficient(g, kappa)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalProbabilityCheck {
    pub closed_form: f64,
    pub quadrature: Quadrature,
    /// Upper bound on the integral beyond the horizon.
    pub tail_bound: f64,
    pub relative_error: f64,
}

/// Evaluates `2|αβ|² κ ∫₀^∞ sin²(g t/2) e^{−κt} dt` numerically (in the
/// variable `s = κt`, truncated at [`DECAY_HORIZON`]) next to the closed form.
pub fn total_probability_check(
    alpha: Complex64,
    beta: Complex64,
    g: f64,
    kappa: f64,
) -> Result<TotalProbabilityCheck> {
    let closed_form = total_probability(alpha, beta, g, kappa)?;
    let ab = alpha_beta_sq(alpha, beta)?;
    let r = g / kappa;
    let quadrature = integrate(
        |s| 2.0 * ab * (0.5 * r * s).sin().powi(2) * (-s).exp(),
        0.0,
        DECAY_HORIZON,
        QUADRATURE_ABS_TOL,
        0.0,
        20_000,
    );
    let tail_bound = 2.0 * ab * (-DECAY_HORIZON).exp();
    let relative_error = if closed_form > 0.0 {
        (quadrature.value - closed_form).abs() / closed_form
    } else {
        quadrature.value.abs()
    };
    Ok(TotalProbabilityCheck {
        closed_form,
        quadrature,
        tail_bound,
        relative_error,
    })
}

/// Detector feasibility numbers for a heralding window of `1/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// `P_tot / |αβ|²`.
    pub p_tot_coefficient: f64,
    /// Heralding window in seconds.
    pub window: f64,
    /// Largest tolerable dark-count rate for the params' `|αβ|²`, in Hz.
    pub max_dark_rate: f64,
    /// Smallest `|αβ|²` that keeps true heralds above dark counts.
    pub min_alpha_beta_sq: f64,
}

/// Compares the herald rate `coefficient·|αβ|²·κ` with the dark-count rate,
/// treating κ as an event rate in s⁻¹.
pub fn dark_count_threshold(params: &SystemParams) -> Result<FeasibilityReport> {
    if !(params.dark_rate >= 0.0) {
        return Err(Error::DegenerateParams("dark rate must be >= 0".into()));
    }
    let coefficient = p_tot_coefficient(params.g, params.kappa)?;
    Ok(FeasibilityReport {
        p_tot_coefficient: coefficient,
        window: 1.0 / params.kappa,
        max_dark_rate: coefficient * params.alpha_beta_sq() * params.kappa,
        min_alpha_beta_sq: params.dark_rate / (coefficient * params.kappa),
    })
}
