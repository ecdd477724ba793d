//! Sparse multimode Fock-space states.

mod mode;
mod serial;
mod state;

pub use mode::{ModeKind, ModeLabel, ModeRegistry, Owner};
pub use state::{
    make_state, FockVector, HeraldResult, Occupation, Term, DEFAULT_CUTOFF, NORM_TOLERANCE,
    PRUNE_EPSILON,
};
pub(crate) use state::AmplitudeMap;
