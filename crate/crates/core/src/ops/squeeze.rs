use num_complex::Complex64;

use super::mode_of_kind;
use crate::error::{Error, Result};
use crate::fock::{AmplitudeMap, FockVector, ModeKind};

/// Weak Stokes (two-mode squeezing) pulse on an empty cavity/resonator
/// pair: `|0,0⟩ → |0,0⟩ + √p_p |1,1⟩ (+ p_p |2,2⟩ with `second_order`)`,
/// renormalized.
pub fn two_mode_squeeze_weak(
    state: &FockVector,
    cav: &str,
    mech: &str,
    p_p: f64,
    second_order: bool,
) -> Result<FockVector> {
    if !(0.0..1.0).contains(&p_p) {
        return Err(Error::InvalidParams(format!(
            "scattering probability p_p = {p_p} outside [0, 1)"
        )));
    }
    if p_p > 0.1 {
        log::warn!("p_p = {p_p} is not small; the weak-pump expansion is unreliable");
    }
    let ic = mode_of_kind(state, cav, ModeKind::Optical)?;
    let ib = mode_of_kind(state, mech, ModeKind::Mechanical)?;
    if state.iter().any(|(occ, _)| occ[ic] != 0 || occ[ib] != 0) {
        return Err(Error::ModesNotVacuum(format!("{cav},{mech}")));
    }
    let max_n = if second_order { 2 } else { 1 };
    if p_p > 0.0 && state.cutoff() < max_n {
        return Err(Error::CutoffOverflow(format!("{cav},{mech}"), state.cutoff()));
    }
    let weights = [1.0, p_p.sqrt(), p_p];
    let mut map = AmplitudeMap::new();
    for (occ, amp) in state.iter() {
        for (n, w) in weights.iter().enumerate().take(max_n as usize + 1) {
            let mut out = occ.clone();
            out[ic] = n as u8;
            out[ib] = n as u8;
            *map.entry(out).or_insert(Complex64::new(0.0, 0.0)) += amp * *w;
        }
    }
    let (_, out) = FockVector::from_unnormalized(state.modes().to_vec(), state.cutoff(), map);
    out.ok_or(Error::ZeroVector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeLabel, ModeRegistry, Owner};

    fn reg() -> ModeRegistry {
        ModeRegistry::from_labels([
            ModeLabel::optical("c1", Owner::Alice),
            ModeLabel::mechanical("b1", Owner::Alice),
        ])
        .unwrap()
    }

    #[test]
    fn zero_pump_leaves_state_alone() {
        let vac = FockVector::vacuum(&reg());
        assert_eq!(two_mode_squeeze_weak(&vac, "c1", "b1", 0.0, false).unwrap(), vac);
    }

    #[test]
    fn first_and_second_order_weights() {
        let vac = FockVector::vacuum(&reg());
        let p = 0.01;
        let s = two_mode_squeeze_weak(&vac, "c1", "b1", p, false).unwrap();
        let n = (1.0 + p).sqrt();
        assert!((s.amplitude(&[0, 0]).re - 1.0 / n).abs() < 1e-15);
        assert!((s.amplitude(&[1, 1]).re - p.sqrt() / n).abs() < 1e-15);
        let s = two_mode_squeeze_weak(&vac, "c1", "b1", p, true).unwrap();
        let n = (1.0 + p + p * p).sqrt();
        assert!((s.amplitude(&[2, 2]).re - p / n).abs() < 1e-15);
    }

    #[test]
    fn occupied_modes_are_rejected() {
        let s = FockVector::basis(&reg(), &[0, 1]).unwrap();
        assert!(matches!(
            two_mode_squeeze_weak(&s, "c1", "b1", 0.01, false),
            Err(Error::ModesNotVacuum(_))
        ));
        let vac = FockVector::vacuum(&reg());
        assert!(matches!(
            two_mode_squeeze_weak(&vac, "c1", "b1", 1.0, false),
            Err(Error::InvalidParams(_))
        ));
    }
}
