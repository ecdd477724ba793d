use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::CrossKerrParams;

/// Tolerance on `|α|² + |β|² = 1`.
pub const AMPLITUDE_NORM_TOLERANCE: f64 = 1e-12;

/// Physical constants of a run. Every rate is an angular frequency in
/// rad/s except `dark_rate`, which counts detector events per second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mechanical frequency ω_m.
    pub omega_m: f64,
    /// Effective cavity detuning Δ.
    pub delta: f64,
    /// Cross-Kerr coupling g.
    pub g: f64,
    /// Cavity decay rate κ.
    pub kappa: f64,
    /// Linearized anti-Stokes/Stokes coupling G.
    #[serde(rename = "G")]
    pub coupling_as: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
    /// Stokes scattering probability of the weak pump.
    pub p_p: f64,
    /// Detector dark-count rate in Hz.
    pub dark_rate: f64,
}

impl Default for SystemParams {
    /// The resolved-sideband device used for the feasibility numbers:
    /// ω_m = 2π GHz, g = 3.33×10⁻² ω_m, κ = ω_m/90, a 2 Hz detector and a
    /// maximally entangled input.
    fn default() -> Self {
        let omega_m = 2.0 * PI * 1e9;
        let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        SystemParams {
            omega_m,
            delta: 0.0,
            g: 3.33e-2 * omega_m,
            kappa: omega_m / 90.0,
            coupling_as: 2.0 * PI * 1e6,
            alpha: half,
            beta: half,
            p_p: 1e-3,
            dark_rate: 2.0,
        }
    }
}

impl SystemParams {
    /// Replaces the input amplitudes, checking normalization.
    pub fn with_amplitudes(mut self, alpha: Complex64, beta: Complex64) -> Result<Self> {
        self.alpha = alpha;
        self.beta = beta;
        self.validate()?;
        Ok(self)
    }

    /// Real amplitudes `α = √(|α|²)`, `β = √(1 − |α|²)`.
    pub fn with_alpha_sq(self, alpha_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_sq) {
            return Err(Error::InvalidParams(format!("|alpha|^2 = {alpha_sq} outside [0, 1]")));
        }
        self.with_amplitudes(
            Complex64::new(alpha_sq.sqrt(), 0.0),
            Complex64::new((1.0 - alpha_sq).sqrt(), 0.0),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if !((norm - 1.0).abs() <= AMPLITUDE_NORM_TOLERANCE) {
            return Err(Error::NotNormalized(norm));
        }
        for (name, v) in [
            ("omega_m", self.omega_m),
            ("g", self.g),
            ("kappa", self.kappa),
            ("G", self.coupling_as),
            ("dark_rate", self.dark_rate),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParams("delta must be finite".into()));
        }
        if !(0.0..1.0).contains(&self.p_p) {
            return Err(Error::InvalidParams(format!("p_p = {} outside [0, 1)", self.p_p)));
        }
        Ok(())
    }

    /// `|αβ|²`.
    pub fn alpha_beta_sq(&self) -> f64 {
        (self.alpha * self.beta).norm_sqr()
    }

    /// Interaction time giving the dimensionless phase `g t = gt`.
    pub fn time_from_gt(&self, gt: f64) -> Result<f64> {
        if !(self.g > 0.0) {
            return Err(Error::InvalidParams("g must be > 0 to convert g t into a time".into()));
        }
        Ok(gt / self.g)
    }

    pub fn kerr(&self, t: f64) -> CrossKerrParams {
        CrossKerrParams {
            delta: self.delta,
            omega_m: self.omega_m,
            g: self.g,
            t,
        }
    }
}
