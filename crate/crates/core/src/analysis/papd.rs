use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::closed_form::{total_probability, DECAY_HORIZON, QUADRATURE_ABS_TOL};
use super::quadrature::{integrate, Quadrature};
use crate::error::{Error, Result};
use crate::params::SystemParams;

pub const CSV_HEADER: [&str; 4] = ["ratio", "t_p", "papd_per_s", "papd_dimensionless"];

/// Photon arrival probability density (s⁻¹) at time `t` after release,
/// conditioned on a successful dark-port herald.
pub fn papd(t: f64, params: &SystemParams) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidParams(format!("arrival time {t} < 0")));
    }
    let p_tot = checked_p_tot(params)?;
    let ab = params.alpha_beta_sq();
    let kappa = params.kappa;
    Ok(2.0 * ab * (0.5 * params.g * t).sin().powi(2) * kappa * (-kappa * t).exp() / p_tot)
}

fn checked_p_tot(params: &SystemParams) -> Result<f64> {
    if !(params.g > 0.0) || params.alpha_beta_sq() == 0.0 {
        return Err(Error::DegenerateParams(
            "arrival density needs g > 0 and |alpha beta| > 0".into(),
        ));
    }
    total_probability(params.alpha, params.beta, params.g, params.kappa)
}

/// `∫₀^∞ papd dt`, integrated on `[0, 40/κ]`.
pub fn papd_integral(params: &SystemParams) -> Result<Quadrature> {
    checked_p_tot(params)?;
    let horizon = DECAY_HORIZON / params.kappa;
    // evaluate in units of 1/κ to keep the integrand O(1)
    let kappa = params.kappa;
    Ok(integrate(
        |s| papd(s / kappa, params).unwrap_or(f64::NAN) / kappa,
        0.0,
        horizon * kappa,
        QUADRATURE_ABS_TOL,
        0.0,
        20_000,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PapdPoint {
    /// `g t / 2π`.
    pub t_p: f64,
    pub papd_per_s: f64,
    /// `papd / κ`.
    pub papd_dimensionless: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PapdCurve {
    /// `ω_m / κ`.
    pub ratio: f64,
    pub points: Vec<PapdPoint>,
    pub params_used: SystemParams,
    /// Height of the second local maximum relative to the first, read off
    /// the grid. `None` when the grid holds fewer than two peaks.
    pub second_peak_ratio: Option<f64>,
}

impl PapdCurve {
    /// Local maxima of the sampled curve as `(t_p, papd_per_s)`.
    pub fn peaks(&self) -> Vec<(f64, f64)> {
        self.points
            .windows(3)
            .filter(|w| w[1].papd_per_s > w[0].papd_per_s && w[1].papd_per_s >= w[2].papd_per_s)
            .map(|w| (w[1].t_p, w[1].papd_per_s))
            .collect()
    }

    /// Local minima of the sampled curve as `(t_p, papd_per_s)`.
    pub fn troughs(&self) -> Vec<(f64, f64)> {
        self.points
            .windows(3)
            .filter(|w| w[1].papd_per_s < w[0].papd_per_s && w[1].papd_per_s <= w[2].papd_per_s)
            .map(|w| (w[1].t_p, w[1].papd_per_s))
            .collect()
    }

    /// Decay of the envelope over one oscillation period, `e^{−2πκ/g}`.
    pub fn envelope_ratio(&self) -> f64 {
        (-2.0 * PI * self.params_used.kappa / self.params_used.g).exp()
    }
}

/// Uniform grid `0, step, 2·step, …` up to and including `end`.
pub fn t_p_grid(end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end >= 0.0) {
        return Err(Error::InvalidParams(format!("bad grid end={end} step={step}")));
    }
    let n = (end / step).round() as usize;
    Ok((0..=n).map(|i| i as f64 * step).collect())
}

/// One curve with `κ = ω_m / ratio`; `g` and the amplitudes come from `base`.
pub fn papd_curve(ratio: f64, grid: &[f64], base: &SystemParams) -> Result<PapdCurve> {
    if !(ratio > 0.0) {
        return Err(Error::InvalidParams(format!("ratio {ratio} must be > 0")));
    }
    if grid.iter().any(|t| *t < 0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("t_p grid must be nonnegative and increasing".into()));
    }
    let params = SystemParams {
        kappa: base.omega_m / ratio,
        ..*base
    };
    let points = grid
        .iter()
        .map(|&t_p| {
            let t = 2.0 * PI * t_p / params.g;
            let v = papd(t, &params)?;
            Ok(PapdPoint {
                t_p,
                papd_per_s: v,
                papd_dimensionless: v / params.kappa,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut curve = PapdCurve {
        ratio,
        points,
        params_used: params,
        second_peak_ratio: None,
    };
    let peaks = curve.peaks();
    if peaks.len() >= 2 {
        curve.second_peak_ratio = Some(peaks[1].1 / peaks[0].1);
    }
    Ok(curve)
}

/// One curve per ratio, in the order given.
pub fn papd_sweep(ratios: &[f64], grid: &[f64], base: &SystemParams) -> Result<Vec<PapdCurve>> {
    ratios
        .par_iter()
        .map(|&r| papd_curve(r, grid, base))
        .collect()
}

/// Writes curves as CSV: `ratio,t_p,papd_per_s,papd_dimensionless`.
pub fn write_curves_csv<W: Write>(curves: &[PapdCurve], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for c in curves {
        for p in &c.points {
            w.write_record([
                format!("{:?}", c.ratio),
                format!("{:?}", p.t_p),
                format!("{:?}", p.papd_per_s),
                format!("{:?}", p.papd_dimensionless),
            ])?;
        }
    }
    w.flush()
}
