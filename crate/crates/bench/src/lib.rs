//! Shared fixtures for the benchmarks.

use ecp_core::protocol::{EcpLayout, EcpRun, Pipeline};
use ecp_core::SystemParams;

/// A run at the first probability maximum with `|α|² = 0.8`.
pub fn run_at_peak(pipeline: Pipeline) -> EcpRun {
    let params = SystemParams::default()
        .with_alpha_sq(0.8)
        .expect("valid amplitude");
    let t = std::f64::consts::PI / params.g;
    EcpRun::new(EcpLayout::for_pipeline(pipeline), params, t).expect("valid run")
}
