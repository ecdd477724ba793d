use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::ecp::EcpRun;
use super::layout::{EcpLayout, Pipeline};
use crate::error::Result;
use crate::params::SystemParams;

pub const SWEEP_CSV_HEADER: [&str; 5] = ["alpha_sq", "gt", "simulated", "analytic", "abs_error"];

/// Simulated against closed-form herald probability at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha_sq: f64,
    pub gt: f64,
    pub simulated: f64,
    pub analytic: f64,
    pub abs_error: f64,
}

/// Herald probability over every `(|α|², g t)` pair, `alpha_sq` outermost.
/// Amplitudes are real; everything else comes from `base`.
pub fn herald_probability_sweep(
    pipeline: Pipeline,
    base: &SystemParams,
    alpha_sq: &[f64],
    gt: &[f64],
) -> Result<Vec<SweepPoint>> {
    let grid: Vec<(f64, f64)> = alpha_sq
        .iter()
        .flat_map(|&a| gt.iter().map(move |&x| (a, x)))
        .collect();
    grid.par_iter()
        .map(|&(a, x)| {
            let params = base.with_alpha_sq(a)?;
            let run = EcpRun::new(EcpLayout::for_pipeline(pipeline), params, params.time_from_gt(x)?)?;
            let simulated = run.herald(&run.prepare()?)?.probability;
            let analytic = run.analytic_probability();
            Ok(SweepPoint {
                alpha_sq: a,
                gt: x,
                simulated,
                analytic,
                abs_error: (simulated - analytic).abs(),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SWEEP_CSV_HEADER)?;
    for p in points {
        w.write_record([
            format!("{:?}", p.alpha_sq),
            format!("{:?}", p.gt),
            format!("{:?}", p.simulated),
            format!("{:?}", p.analytic),
            format!("{:?}", p.abs_error),
        ])?;
    }
    w.flush()
}
