use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockVector, ModeLabel, ModeRegistry, Owner};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Bell,
    Ghz,
}

impl Pipeline {
    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Bell => "bell",
            Pipeline::Ghz => "ghz",
        }
    }
}

/// Classification of a photon-counting outcome. Bell runs compare the two
/// parties' counts; GHZ runs count the parties that saw a photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Different,
    Same,
    Odd,
    Even,
}

impl Parity {
    /// Odd outcomes leave the kept register in the plus state.
    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Different | Parity::Odd)
    }
}

/// Mode assignment of a concentration run.
///
/// Two copies of `α|P⟩ + β|Q⟩` (patterns `P`, `Q` complementary) sit on the
/// `targets` and `ancillas` registers. The photon of the interferometer
/// couples to `targets[kerr_party]` through mode `interferometer[0]` and to
/// `ancillas[kerr_party]` through `interferometer[1]`. After the herald each
/// ancilla is mapped onto the matching entry of `cavities`.
#[derive(Debug, Clone, PartialEq)]
pub struct EcpLayout {
    pub pipeline: Pipeline,
    pub interferometer: [ModeLabel; 2],
    pub targets: Vec<ModeLabel>,
    pub ancillas: Vec<ModeLabel>,
    pub cavities: Vec<ModeLabel>,
    pub patterns: [Vec<u8>; 2],
    pub kerr_party: usize,
}

const PARTIES: [Owner; 3] = [Owner::Alice, Owner::Bob, Owner::Charlie];

impl EcpLayout {
    /// Pairs `u₁u₂` (kept) and `v₁v₂`, interferometer `A`/`B`, transfer
    /// cavities `C` (Alice) and `B` (Bob).
    pub fn bell() -> Self {
        EcpLayout {
            pipeline: Pipeline::Bell,
            interferometer: [
                ModeLabel::optical("A", Owner::Bob),
                ModeLabel::optical("B", Owner::Bob),
            ],
            targets: vec![
                ModeLabel::mechanical("u1", Owner::Alice),
                ModeLabel::mechanical("u2", Owner::Bob),
            ],
            ancillas: vec![
                ModeLabel::mechanical("v1", Owner::Alice),
                ModeLabel::mechanical("v2", Owner::Bob),
            ],
            cavities: vec![
                ModeLabel::optical("C", Owner::Alice),
                ModeLabel::optical("B", Owner::Bob),
            ],
            patterns: [vec![1, 0], vec![0, 1]],
            kerr_party: 1,
        }
    }

    /// Triples `x₁x₂x₃` (kept) and `y₁y₂y₃`, interferometer `D`/`E`,
    /// transfer cavities `F` (Alice), `E` (Bob), `G` (Charlie).
    pub fn ghz() -> Self {
        let mech = |prefix: &str| {
            PARTIES
                .iter()
                .enumerate()
                .map(|(i, &o)| ModeLabel::mechanical(&format!("{prefix}{}", i + 1), o))
                .collect()
        };
        EcpLayout {
            pipeline: Pipeline::Ghz,
            interferometer: [
                ModeLabel::optical("D", Owner::Bob),
                ModeLabel::optical("E", Owner::Bob),
            ],
            targets: mech("x"),
            ancillas: mech("y"),
            cavities: vec![
                ModeLabel::optical("F", Owner::Alice),
                ModeLabel::optical("E", Owner::Bob),
                ModeLabel::optical("G", Owner::Charlie),
            ],
            patterns: [vec![0, 0, 0], vec![1, 1, 1]],
            kerr_party: 1,
        }
    }

    pub fn for_pipeline(pipeline: Pipeline) -> Self {
        match pipeline {
            Pipeline::Bell => Self::bell(),
            Pipeline::Ghz => Self::ghz(),
        }
    }

    pub fn parties(&self) -> usize {
        self.targets.len()
    }

    /// The same layout with one party's modes removed.
    pub fn without_party(&self, party: usize) -> Result<Self> {
        if party >= self.parties() || party == self.kerr_party || self.parties() <= 2 {
            return Err(Error::InvalidParams(format!(
                "cannot remove party {party} from a {}-party layout",
                self.parties()
            )));
        }
        let mut out = self.clone();
        out.targets.remove(party);
        out.ancillas.remove(party);
        out.cavities.remove(party);
        for p in &mut out.patterns {
            p.remove(party);
        }
        if party < out.kerr_party {
            out.kerr_party -= 1;
        }
        Ok(out)
    }

    pub fn target_names(&self) -> Vec<&str> {
        self.targets.iter().map(|m| m.name()).collect()
    }

    pub fn ancilla_names(&self) -> Vec<&str> {
        self.ancillas.iter().map(|m| m.name()).collect()
    }

    pub fn cavity_names(&self) -> Vec<&str> {
        self.cavities.iter().map(|m| m.name()).collect()
    }

    fn two_term(&self, modes: &[ModeLabel], a: num_complex::Complex64, b: num_complex::Complex64) -> Result<FockVector> {
        let reg = ModeRegistry::from_labels(modes.iter().cloned())?;
        crate::fock::make_state(
            &reg,
            [(&self.patterns[0], a), (&self.patterns[1], b)],
        )
    }

    /// `α|P⟩ + β|Q⟩` on the kept register.
    pub fn input_on_targets(&self, params: &SystemParams) -> Result<FockVector> {
        self.two_term(&self.targets, params.alpha, params.beta)
    }

    /// `α|P⟩ + β|Q⟩` on the ancilla register.
    pub fn input_on_ancillas(&self, params: &SystemParams) -> Result<FockVector> {
        self.two_term(&self.ancillas, params.alpha, params.beta)
    }

    /// `(|P⟩ + |Q⟩)/√2` on the kept register.
    pub fn target_state(&self) -> FockVector {
        let h = num_complex::Complex64::new(FRAC_1_SQRT_2, 0.0);
        self.two_term(&self.targets, h, h).expect("layout patterns are valid")
    }

    /// `(|P⟩ − |Q⟩)/√2` on the kept register.
    pub fn minus_state(&self) -> FockVector {
        let h = num_complex::Complex64::new(FRAC_1_SQRT_2, 0.0);
        self.two_term(&self.targets, h, -h).expect("layout patterns are valid")
    }

    pub fn parity(&self, outcome: &[u8]) -> Parity {
        let ones = outcome.iter().filter(|&&n| n == 1).count();
        let odd = ones % 2 == 1;
        match (self.pipeline, odd) {
            (Pipeline::Bell, true) => Parity::Different,
            (Pipeline::Bell, false) => Parity::Same,
            (Pipeline::Ghz, true) => Parity::Odd,
            (Pipeline::Ghz, false) => Parity::Even,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_parity_labels() {
        let l = EcpLayout::bell();
        assert_eq!(l.parity(&[1, 0]), Parity::Different);
        assert_eq!(l.parity(&[0, 1]), Parity::Different);
        assert_eq!(l.parity(&[0, 0]), Parity::Same);
        assert_eq!(l.parity(&[1, 1]), Parity::Same);
    }

    #[test]
    fn ghz_parity_labels() {
        let l = EcpLayout::ghz();
        assert_eq!(l.parity(&[1, 0, 0]), Parity::Odd);
        assert_eq!(l.parity(&[1, 1, 1]), Parity::Odd);
        assert_eq!(l.parity(&[1, 1, 0]), Parity::Even);
        assert_eq!(l.parity(&[0, 0, 0]), Parity::Even);
    }

    #[test]
    fn removing_charlie() {
        let l = EcpLayout::ghz().without_party(2).unwrap();
        assert_eq!(l.target_names(), ["x1", "x2"]);
        assert_eq!(l.cavity_names(), ["F", "E"]);
        assert_eq!(l.patterns, [vec![0, 0], vec![1, 1]]);
        assert_eq!(l.kerr_party, 1);
        assert!(EcpLayout::ghz().without_party(1).is_err());
        assert!(EcpLayout::bell().without_party(0).is_err());
    }
}
