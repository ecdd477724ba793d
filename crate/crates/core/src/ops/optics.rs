use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::mode_of_kind;
use crate::error::{Error, Result};
use crate::fock::{AmplitudeMap, FockVector, HeraldResult, ModeKind, ModeLabel, ModeRegistry};

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Image of `|na, nb⟩` under `a† → (a†+b†)/√2`, `b† → (a†−b†)/√2`, as
/// `(j, k, coefficient)` triples.
fn split_fock(na: u32, nb: u32) -> Vec<(u32, u32, f64)> {
    let n = na + nb;
    // integer weights of a†^j b†^(n-j)
    let mut weights = vec![0i64; n as usize + 1];
    for p in 0..=na {
        for q in 0..=nb {
            let sign = if (nb - q).is_multiple_of(2) { 1 } else { -1 };
            weights[(p + q) as usize] += sign * binomial(na, p) * binomial(nb, q);
        }
    }
    let norm = 2f64.powi(n as i32).sqrt() * (factorial(na) * factorial(nb)).sqrt();
    weights
        .into_iter()
        .enumerate()
        .filter(|(_, w)| *w != 0)
        .map(|(j, w)| {
            let j = j as u32;
            let k = n - j;
            let c = w as f64 * (factorial(j) * factorial(k)).sqrt() / norm;
            (j, k, c)
        })
        .collect()
}

/// 50:50 beam splitter on optical modes `a`, `b` with
/// `a† → (a†+b†)/√2`, `b† → (a†−b†)/√2`. The transformation is its own
/// inverse.
pub fn beam_splitter(state: &FockVector, a: &str, b: &str) -> Result<FockVector> {
    let ia = mode_of_kind(state, a, ModeKind::Optical)?;
    let ib = mode_of_kind(state, b, ModeKind::Optical)?;
    if ia == ib {
        return Err(Error::ModeMismatch(format!("beam splitter needs two modes, got `{a}` twice")));
    }
    let cutoff = state.cutoff() as u32;
    let mut map = AmplitudeMap::new();
    for (occ, amp) in state.iter() {
        for (j, k, c) in split_fock(occ[ia] as u32, occ[ib] as u32) {
            if j > cutoff || k > cutoff {
                return Err(Error::CutoffOverflow(format!("{a},{b}"), state.cutoff()));
            }
            let mut out = occ.clone();
            out[ia] = j as u8;
            out[ib] = k as u8;
            *map.entry(out).or_insert(Complex64::new(0.0, 0.0)) += amp * c;
        }
    }
    Ok(FockVector::from_unitary_image(
        state.modes().to_vec(),
        state.cutoff(),
        map,
    ))
}

/// Hadamard gate on the `{|0⟩, |1⟩}` occupation of one optical mode.
pub fn hadamard_photon(state: &FockVector, mode: &str) -> Result<FockVector> {
    let idx = mode_of_kind(state, mode, ModeKind::Optical)?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut map = AmplitudeMap::new();
    for (occ, amp) in state.iter() {
        let n = occ[idx];
        if n > 1 {
            return Err(Error::QubitViolation(mode.to_string()));
        }
        let mut zero = occ.clone();
        zero[idx] = 0;
        let mut one = occ.clone();
        one[idx] = 1;
        let sign = if n == 0 { 1.0 } else { -1.0 };
        *map.entry(zero).or_insert(Complex64::new(0.0, 0.0)) += amp * h;
        *map.entry(one).or_insert(Complex64::new(0.0, 0.0)) += amp * h * sign;
    }
    Ok(FockVector::from_unitary_image(
        state.modes().to_vec(),
        state.cutoff(),
        map,
    ))
}

/// `(|10⟩ − |01⟩)/√2` on the two given optical modes.
pub fn dark_port_state(a: &ModeLabel, b: &ModeLabel) -> Result<FockVector> {
    let reg = ModeRegistry::from_labels([a.clone(), b.clone()])?;
    crate::fock::make_state(&reg, [([1u8, 0], 1.0), ([0, 1], -1.0)])
}

/// Postselects a click at the dark port of the interferometer closed on
/// `a`, `b`, i.e. projects those modes on `(|10⟩ − |01⟩)/√2`. The photonic
/// modes are removed from the returned state.
pub fn dark_port_postselect(state: &FockVector, a: &str, b: &str) -> Result<HeraldResult> {
    let ia = mode_of_kind(state, a, ModeKind::Optical)?;
    let ib = mode_of_kind(state, b, ModeKind::Optical)?;
    let target = dark_port_state(&state.modes()[ia], &state.modes()[ib])?;
    state.project(&target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_state, Owner};
    use proptest::prelude::*;

    fn reg(names: &[&str]) -> ModeRegistry {
        ModeRegistry::from_labels(names.iter().map(|n| ModeLabel::optical(n, Owner::Bob))).unwrap()
    }

    #[test]
    fn single_photon_sector() {
        let r = reg(&["D", "E"]);
        let out = beam_splitter(&FockVector::basis(&r, &[1, 0]).unwrap(), "D", "E").unwrap();
        let want = make_state(&r, [([1u8, 0], 1.0), ([0, 1], 1.0)]).unwrap();
        assert!((out.inner(&want).unwrap().re - 1.0).abs() < 1e-15);
        let out = beam_splitter(&FockVector::basis(&r, &[0, 1]).unwrap(), "D", "E").unwrap();
        let want = make_state(&r, [([1u8, 0], 1.0), ([0, 1], -1.0)]).unwrap();
        assert!((out.inner(&want).unwrap().re - 1.0).abs() < 1e-15);
        let vac = FockVector::vacuum(&r);
        assert_eq!(beam_splitter(&vac, "D", "E").unwrap(), vac);
    }

    #[test]
    fn two_photon_interference() {
        // |11⟩ → (|20⟩ − |02⟩)/√2
        let r = reg(&["a", "b"]);
        let out = beam_splitter(&FockVector::basis(&r, &[1, 1]).unwrap(), "a", "b").unwrap();
        assert_eq!(out.len(), 2);
        assert!((out.amplitude(&[2, 0]).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.amplitude(&[0, 2]).re + FRAC_1_SQRT_2).abs() < 1e-15);
        // |20⟩ → (|20⟩ + √2|11⟩ + |02⟩)/2
        let out = beam_splitter(&FockVector::basis(&r, &[2, 0]).unwrap(), "a", "b").unwrap();
        assert!((out.amplitude(&[2, 0]).re - 0.5).abs() < 1e-15);
        assert!((out.amplitude(&[1, 1]).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.amplitude(&[0, 2]).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn overflow_is_reported() {
        let r = reg(&["a", "b"]);
        let s = FockVector::basis(&r, &[2, 1]).unwrap();
        assert!(matches!(
            beam_splitter(&s, "a", "b"),
            Err(Error::CutoffOverflow(..))
        ));
        assert!(beam_splitter(&s.with_raised_cutoff(3), "a", "b").is_ok());
    }

    #[test]
    fn hadamard_rejects_multiphoton_components() {
        let r = reg(&["c"]);
        let s = FockVector::basis(&r, &[2]).unwrap();
        assert_eq!(hadamard_photon(&s, "c"), Err(Error::QubitViolation("c".into())));
    }

    #[test]
    fn dark_port_on_bright_input_is_dark() {
        let r = reg(&["A", "B"]);
        let bright = make_state(&r, [([1u8, 0], 1.0), ([0, 1], 1.0)]).unwrap();
        let h = dark_port_postselect(&bright, "A", "B").unwrap();
        assert_eq!(h.probability, 0.0);
        let h = dark_port_postselect(&FockVector::basis(&r, &[1, 0]).unwrap(), "A", "B").unwrap();
        assert!((h.probability - 0.5).abs() < 1e-15);
        assert!(h.state().unwrap().modes().is_empty());
    }

    fn arb_two_mode_state(max_total: u8) -> impl Strategy<Value = FockVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9).prop_filter_map("nonzero", move |amps| {
            let terms: Vec<_> = amps
                .into_iter()
                .enumerate()
                .map(|(i, (re, im))| ([(i / 3) as u8, (i % 3) as u8], Complex64::new(re, im)))
                .filter(|(o, _)| o[0] + o[1] <= max_total)
                .collect();
            make_state(&reg(&["a", "b"]), terms).ok()
        })
    }

    proptest! {
        #[test]
        fn beam_splitter_is_unitary_involution(s in arb_two_mode_state(2)) {
            let once = beam_splitter(&s, "a", "b").unwrap();
            prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
            let twice = beam_splitter(&once, "a", "b").unwrap();
            prop_assert!((twice.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
            prop_assert!((twice.inner(&s).unwrap().re - 1.0).abs() < 1e-12);
        }

        #[test]
        fn hadamard_is_unitary_involution(s in arb_two_mode_state(2)) {
            let qubit: Vec<_> = s.iter().filter(|(o, _)| o[0] <= 1).map(|(o, a)| (o.clone(), *a)).collect();
            let Ok(s) = make_state(&reg(&["a", "b"]), qubit) else { return Ok(()) };
            let once = hadamard_photon(&s, "a").unwrap();
            prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
            let twice = hadamard_photon(&once, "a").unwrap();
            prop_assert!((twice.inner(&s).unwrap().re - 1.0).abs() < 1e-12);
        }
    }
}
