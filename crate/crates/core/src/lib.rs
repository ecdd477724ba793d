//! Fock-space simulation of phononic entanglement concentration.
//!
//! The crate is split into four layers:
//!
//! - [`fock`]: sparse state vectors over named optical and mechanical modes.
//! - [`ops`]: the physical primitives (cross-Kerr phases, beam splitters,
//!   Hadamard, anti-Stokes transfer, π-phase, weak two-mode squeezing).
//! - [`protocol`]: the Bell and GHZ concentration pipelines, remote Bell-pair
//!   generation and Monte Carlo runs with detector dark counts.
//! - [`analysis`]: closed-form probabilities, quadrature cross-checks,
//!   dark-count feasibility and arrival-time density curves.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod fock;
pub mod ops;
pub mod params;
pub mod protocol;

pub use error::{Error, Result};
pub use fock::{make_state, FockVector, HeraldResult, ModeKind, ModeLabel, ModeRegistry, Owner};
pub use num_complex::Complex64;
pub use params::SystemParams;
