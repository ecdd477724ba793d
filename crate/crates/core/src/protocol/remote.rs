use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{make_state, FockVector, HeraldResult, ModeLabel, ModeRegistry, Owner};
use crate::ops::{beam_splitter, two_mode_squeeze_weak};
use crate::params::SystemParams;

/// Largest scattering probability accepted for remote-pair generation.
pub const MAX_SCATTERING_PROBABILITY: f64 = 0.1;

/// Photodetectors behind the combining beam splitter: `D6` watches
/// `(c₁+c₂)/√2`, `D7` watches `(c₁−c₂)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Detector {
    D6,
    D7,
}

impl Detector {
    fn sign(self) -> f64 {
        match self {
            Detector::D6 => 1.0,
            Detector::D7 => -1.0,
        }
    }
}

/// Conditional phonon state for one photon count at the unobserved port.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemoteBranch {
    pub other_port_photons: u8,
    /// Joint probability of the herald and this count.
    pub probability: f64,
    pub state: FockVector,
    pub fidelity: f64,
}

/// A single-photon click at one detector, with the other port traced out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemoteBellHerald {
    pub detector: Detector,
    pub second_order: bool,
    pub p_p: f64,
    pub herald_probability: f64,
    /// `(|10⟩ ± |01⟩)/√2` on `b₁b₂`, sign set by the detector.
    pub target: FockVector,
    /// Probability-weighted fidelity of the branches to `target`.
    pub fidelity: Option<f64>,
    pub branches: Vec<RemoteBranch>,
}

impl RemoteBellHerald {
    /// The branch with the other port empty, carrying the full herald
    /// probability.
    pub fn herald(&self) -> HeraldResult {
        HeraldResult {
            probability: self.herald_probability,
            state: self
                .branches
                .iter()
                .find(|b| b.other_port_photons == 0)
                .map(|b| b.state.clone()),
        }
    }
}

fn node(cav: &str, mech: &str, owner: Owner) -> Result<ModeRegistry> {
    ModeRegistry::from_labels([
        ModeLabel::optical(cav, owner),
        ModeLabel::mechanical(mech, owner),
    ])
}

/// `(|10⟩ + sign|01⟩)/√2` on `b₁b₂`.
pub fn remote_target(detector: Detector) -> Result<FockVector> {
    let reg = ModeRegistry::from_labels([
        ModeLabel::mechanical("b1", Owner::Alice),
        ModeLabel::mechanical("b2", Owner::Bob),
    ])?;
    make_state(&reg, [([1u8, 0], 1.0), ([0, 1], detector.sign())])
}

/// Both nodes pumped and their cavity outputs combined; register
/// `c₁ b₁ c₂ b₂` with `c₁` now the D6 port and `c₂` the D7 port.
///
/// Each node is `|0,0⟩ + √p_p|1,1⟩`, plus `p_p|2,2⟩` with `second_order`.
pub fn remote_pair_state(p_p: f64, second_order: bool) -> Result<FockVector> {
    if !(0.0..=MAX_SCATTERING_PROBABILITY).contains(&p_p) {
        return Err(Error::InvalidParams(format!(
            "p_p = {p_p} outside [0, {MAX_SCATTERING_PROBABILITY}]"
        )));
    }
    let a = node("c1", "b1", Owner::Alice)?;
    let b = node("c2", "b2", Owner::Bob)?;
    let left = two_mode_squeeze_weak(&FockVector::vacuum(&a), "c1", "b1", p_p, second_order)?;
    let right = two_mode_squeeze_weak(&FockVector::vacuum(&b), "c2", "b2", p_p, second_order)?;
    let mut state = left.tensor(&right)?;
    if second_order {
        // up to four photons meet at the beam splitter
        state = state.with_raised_cutoff(4);
    }
    beam_splitter(&state, "c1", "c2")
}

/// Heralds a remote phonon Bell pair on a single photon at `detector`.
pub fn generate_remote_bell(
    params: &SystemParams,
    detector: Detector,
    second_order: bool,
) -> Result<RemoteBellHerald> {
    let state = remote_pair_state(params.p_p, second_order)?;
    let (watched, other) = match detector {
        Detector::D6 => ("c1", "c2"),
        Detector::D7 => ("c2", "c1"),
    };
    let target = remote_target(detector)?;
    let mut branches = Vec::new();
    for (outcome, h) in state.measurement_branches(&[watched, other])? {
        if outcome[0] != 1 {
            continue;
        }
        let probability = h.probability;
        let phonons = h.into_state()?;
        let fidelity = target.fidelity(&phonons)?;
        branches.push(RemoteBranch {
            other_port_photons: outcome[1],
            probability,
            state: phonons,
            fidelity,
        });
    }
    let herald_probability: f64 = branches.iter().map(|b| b.probability).sum();
    let fidelity = (herald_probability > 0.0).then(|| {
        branches
            .iter()
            .map(|b| b.probability * b.fidelity)
            .sum::<f64>()
            / herald_probability
    });
    Ok(RemoteBellHerald {
        detector,
        second_order,
        p_p: params.p_p,
        herald_probability,
        target,
        fidelity,
        branches,
    })
}

/// Reads both detectors once. A herald needs exactly one photon at one
/// detector and none at the other; anything else is [`Error::HeraldFailed`].
pub fn sample_remote_bell<R: Rng + ?Sized>(
    params: &SystemParams,
    second_order: bool,
    rng: &mut R,
) -> Result<(Detector, HeraldResult)> {
    let state = remote_pair_state(params.p_p, second_order)?;
    let (outcome, h) = state.sample_measurement(&["c1", "c2"], rng)?;
    let detector = match outcome[..] {
        [1, 0] => Detector::D6,
        [0, 1] => Detector::D7,
        _ => return Err(Error::HeraldFailed),
    };
    Ok((detector, h))
}
