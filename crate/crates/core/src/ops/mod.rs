//! Physical primitives acting on [`FockVector`]s.
//!
//! All operations address modes by name and check their kind. Unitary
//! operations return states with the norm of their input; postselections
//! return a [`HeraldResult`](crate::fock::HeraldResult).

mod kerr;
mod optics;
mod squeeze;
mod transfer;

pub use kerr::{cross_kerr_evolve, CrossKerrParams};
pub use optics::{beam_splitter, dark_port_postselect, dark_port_state, hadamard_photon};
pub use squeeze::two_mode_squeeze_weak;
pub use transfer::{anti_stokes_transfer, pi_phase, TransferMode};

use crate::error::{Error, Result};
use crate::fock::{FockVector, ModeKind};

pub(crate) fn mode_of_kind(state: &FockVector, name: &str, kind: ModeKind) -> Result<usize> {
    let idx = state.index_of(name)?;
    if state.modes()[idx].kind() != kind {
        return Err(Error::KindMismatch {
            mode: name.to_string(),
            expected: kind.as_str(),
        });
    }
    Ok(idx)
}
