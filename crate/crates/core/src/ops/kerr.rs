use num_complex::Complex64;

use super::mode_of_kind;
use crate::error::{Error, Result};
use crate::fock::{AmplitudeMap, FockVector, ModeKind};

/// Parameters of the cavity/resonator cross-Kerr evolution. Rates in rad/s,
/// time in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossKerrParams {
    /// Effective cavity detuning Δ; any sign.
    pub delta: f64,
    /// Mechanical frequency ω_m.
    pub omega_m: f64,
    /// Cross-Kerr coupling g.
    pub g: f64,
    /// Interaction time.
    pub t: f64,
}

impl CrossKerrParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_m > 0.0) || !(self.g >= 0.0) || !(self.t >= 0.0) || !self.delta.is_finite()
        {
            return Err(Error::InvalidParams(format!(
                "cross-Kerr needs omega_m > 0, g >= 0, t >= 0 (got {self:?})"
            )));
        }
        Ok(())
    }

    /// Phase angle accumulated by `|n_c⟩|n_b⟩`; the amplitude picks up
    /// `exp(-i angle)`.
    pub fn phase_angle(&self, n_c: u8, n_b: u8) -> f64 {
        let (n_c, n_b) = (n_c as f64, n_b as f64);
        (self.delta * n_c + self.omega_m * n_b - self.g * n_c * n_b) * self.t
    }
}

/// Evolves under `Δ c†c + ω_m b†b − g c†c b†b` for time `p.t`. Diagonal in
/// the Fock basis; modes other than `cavity` and `mech` are untouched.
pub fn cross_kerr_evolve(
    state: &FockVector,
    cavity: &str,
    mech: &str,
    p: &CrossKerrParams,
) -> Result<FockVector> {
    p.validate()?;
    let ic = mode_of_kind(state, cavity, ModeKind::Optical)?;
    let ib = mode_of_kind(state, mech, ModeKind::Mechanical)?;
    let map: AmplitudeMap = state
        .iter()
        .map(|(occ, a)| {
            let phase = Complex64::from_polar(1.0, -p.phase_angle(occ[ic], occ[ib]));
            (occ.clone(), a * phase)
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
    use proptest::prelude::*;

    fn params(t: f64) -> CrossKerrParams {
        CrossKerrParams {
            delta: 0.37,
            omega_m: 2.1,
            g: 0.45,
            t,
        }
    }

    fn pair() -> ModeRegistry {
        ModeRegistry::from_labels([
            ModeLabel::optical("c", Owner::Bob),
            ModeLabel::mechanical("b", Owner::Bob),
        ])
        .unwrap()
    }

    #[test]
    fn basis_phases_follow_the_hamiltonian() {
        let p = params(1.3);
        let cases = [
            ([0u8, 0], 0.0),
            ([0, 1], p.omega_m * p.t),
            ([1, 0], p.delta * p.t),
            ([1, 1], (p.omega_m + p.delta - p.g) * p.t),
        ];
        for (occ, theta) in cases {
            let s = make_state(&pair(), [(occ, 1.0)]).unwrap();
            let out = cross_kerr_evolve(&s, "c", "b", &p).unwrap();
            let want = Complex64::from_polar(1.0, -theta);
            assert!((out.amplitude(&occ) - want).norm() < 1e-15, "{occ:?}");
        }
    }

    #[test]
    fn kinds_are_checked() {
        let s = make_state(&pair(), [([1u8, 1], 1.0)]).unwrap();
        assert!(matches!(
            cross_kerr_evolve(&s, "b", "c", &params(1.0)),
            Err(Error::KindMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn diagonal_and_additive(
            amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
            t1 in 0.0f64..10.0,
            t2 in 0.0f64..10.0,
        ) {
            let terms: Vec<_> = amps.iter().enumerate().map(|(i, &(re, im))| {
                ([(i / 3) as u8, (i % 3) as u8], Complex64::new(re, im))
            }).collect();
            let s = match make_state(&pair(), terms) { Ok(s) => s, Err(_) => return Ok(()) };
            let once = cross_kerr_evolve(&s, "c", "b", &params(t1 + t2)).unwrap();
            let twice = cross_kerr_evolve(
                &cross_kerr_evolve(&s, "c", "b", &params(t1)).unwrap(), "c", "b", &params(t2),
            ).unwrap();
            for (occ, a) in once.iter() {
                prop_assert!((twice.amplitude(occ) - a).norm() < 1e-12);
            }
            for mode in ["c", "b"] {
                let before = s.occupation_distribution(mode).unwrap();
                let after = once.occupation_distribution(mode).unwrap();
                for (x, y) in before.iter().zip(&after) {
                    prop_assert!((x - y).abs() < 1e-15);
                }
            }
            prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
