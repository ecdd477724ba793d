//! Concentration pipelines, remote pair generation and their statistics.

mod ecp;
mod layout;
mod montecarlo;
mod remote;
mod sweep;

pub use crate::params::SystemParams;
pub use ecp::{
    run_bell_ecp, run_ghz_ecp, EcpResult, EcpRun, ExhaustiveReport, OutcomeStrategy,
    ProtocolReport,
};
pub use layout::{EcpLayout, Parity, Pipeline};
pub use montecarlo::{
    monte_carlo, trial_rng, MonteCarloStats, NoiseModel, OutcomeFrequency, STATS_CSV_HEADER,
};
pub use remote::{
    generate_remote_bell, remote_pair_state, remote_target, sample_remote_bell, Detector,
    RemoteBellHerald, RemoteBranch, MAX_SCATTERING_PROBABILITY,
};
pub use sweep::{herald_probability_sweep, write_sweep_csv, SweepPoint, SWEEP_CSV_HEADER};
