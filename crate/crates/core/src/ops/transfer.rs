use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::mode_of_kind;
use crate::error::{Error, Result};
use crate::fock::{AmplitudeMap, FockVector, ModeKind};

/// How a phonon is mapped onto a cavity photon by the anti-Stokes drive.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TransferMode {
    /// `|1⟩_m|0⟩_c → |0⟩_m|1⟩_c` with unit amplitude.
    #[default]
    IdealMap,
    /// Evolution under `G (c v† + c† v)` for `duration` seconds, restricted
    /// to the one-excitation sector.
    Unitary { coupling: f64, duration: f64 },
}

impl TransferMode {
    /// Unitary transfer with `G t = π/2`.
    pub fn complete_unitary(coupling: f64) -> Self {
        TransferMode::Unitary {
            coupling,
            duration: FRAC_PI_2 / coupling,
        }
    }
}

/// Maps the phonon of `mech` onto the empty cavity `cav`.
pub fn anti_stokes_transfer(
    state: &FockVector,
    mech: &str,
    cav: &str,
    mode: TransferMode,
) -> Result<FockVector> {
    let im = mode_of_kind(state, mech, ModeKind::Mechanical)?;
    let ic = mode_of_kind(state, cav, ModeKind::Optical)?;
    let (stay, hop) = match mode {
        TransferMode::IdealMap => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        TransferMode::Unitary { coupling, duration } => {
            let angle = coupling * duration;
            if (angle - FRAC_PI_2).abs() > 1e-9 {
                log::warn!("anti-Stokes transfer with G t = {angle}, incomplete (needs π/2)");
            }
            (
                Complex64::new(angle.cos(), 0.0),
                Complex64::new(0.0, -angle.sin()),
            )
        }
    };
    let mut map = AmplitudeMap::new();
    for (occ, amp) in state.iter() {
        if occ[ic] != 0 {
            return Err(Error::CavityNotEmpty(cav.to_string()));
        }
        match occ[im] {
            0 => {
                *map.entry(occ.clone()).or_insert(Complex64::new(0.0, 0.0)) += amp;
            }
            1 => {
                let mut moved = occ.clone();
                moved[im] = 0;
                moved[ic] = 1;
                *map.entry(moved).or_insert(Complex64::new(0.0, 0.0)) += amp * hop;
                *map.entry(occ.clone()).or_insert(Complex64::new(0.0, 0.0)) += amp * stay;
            }
            _ => return Err(Error::QubitViolation(mech.to_string())),
        }
    }
    Ok(FockVector::from_unitary_image(
        state.modes().to_vec(),
        state.cutoff(),
        map,
    ))
}

/// Flips the sign of every component with odd occupation on `mode`.
pub fn pi_phase(state: &FockVector, mode: &str) -> Result<FockVector> {
    let idx = state.index_of(mode)?;
    let map = state
        .iter()
        .map(|(occ, a)| {
            let a = if occ[idx] % 2 == 1 { -a } else { *a };
            (occ.clone(), a)
        })
        .collect();
    Ok(FockVector::from_unitary_image(
        state.modes().to_vec(),
        state.cutoff(),
        map,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_state, ModeLabel, ModeRegistry, Owner};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn reg() -> ModeRegistry {
        ModeRegistry::from_labels([
            ModeLabel::mechanical("v", Owner::Bob),
            ModeLabel::optical("c", Owner::Bob),
        ])
        .unwrap()
    }

    #[test]
    fn ideal_map_moves_the_excitation() {
        let s = FockVector::basis(&reg(), &[1, 0]).unwrap();
        let out = anti_stokes_transfer(&s, "v", "c", TransferMode::IdealMap).unwrap();
        assert_eq!(out.amplitude(&[0, 1]), Complex64::new(1.0, 0.0));
        let vac = FockVector::vacuum(&reg());
        assert_eq!(
            anti_stokes_transfer(&vac, "v", "c", TransferMode::IdealMap).unwrap(),
            vac
        );
    }

    #[test]
    fn quarter_transfer_amplitudes() {
        // one-excitation block of G(c v† + h.c.) is G σx: exp(-iGtσx) = cos − i sin σx
        let s = FockVector::basis(&reg(), &[1, 0]).unwrap();
        let mode = TransferMode::Unitary {
            coupling: 2.0,
            duration: FRAC_PI_4 / 2.0,
        };
        let out = anti_stokes_transfer(&s, "v", "c", mode).unwrap();
        assert!((out.amplitude(&[1, 0]) - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(&[0, 1]) - Complex64::new(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn complete_unitary_is_ideal_times_minus_i() {
        let s = FockVector::basis(&reg(), &[1, 0]).unwrap();
        let out = anti_stokes_transfer(&s, "v", "c", TransferMode::complete_unitary(3.0e6)).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out.amplitude(&[0, 1]) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn preconditions() {
        let full = FockVector::basis(&reg(), &[0, 1]).unwrap();
        assert_eq!(
            anti_stokes_transfer(&full, "v", "c", TransferMode::IdealMap),
            Err(Error::CavityNotEmpty("c".into()))
        );
        let two = FockVector::basis(&reg(), &[2, 0]).unwrap();
        assert_eq!(
            anti_stokes_transfer(&two, "v", "c", TransferMode::IdealMap),
            Err(Error::QubitViolation("v".into()))
        );
    }

    #[test]
    fn ideal_transfer_conserves_excitations() {
        let s = make_state(&reg(), [([1u8, 0], 0.6), ([0, 0], 0.8)]).unwrap();
        let out = anti_stokes_transfer(&s, "v", "c", TransferMode::IdealMap).unwrap();
        for (occ, _) in out.iter() {
            assert!(s.iter().any(|(o, _)| o[0] + o[1] == occ[0] + occ[1]));
        }
    }

    #[test]
    fn pi_phase_is_an_involution() {
        let s = make_state(&reg(), [([1u8, 0], 0.6), ([0, 1], 0.8)]).unwrap();
        let once = pi_phase(&s, "v").unwrap();
        assert_eq!(once.amplitude(&[1, 0]).re, -0.6);
        assert_eq!(once.amplitude(&[0, 1]).re, s.amplitude(&[0, 1]).re);
        assert_eq!(pi_phase(&once, "v").unwrap(), s);
    }
}
