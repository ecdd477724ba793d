use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::layout::{EcpLayout, Parity, Pipeline};
use crate::analysis::success_probability;
use crate::error::{Error, Result};
use crate::fock::{FockVector, HeraldResult, ModeRegistry};
use crate::ops::{
    anti_stokes_transfer, beam_splitter, cross_kerr_evolve, dark_port_postselect,
    hadamard_photon, pi_phase, TransferMode,
};
use crate::params::SystemParams;

/// How the photon-counting outcomes of a run are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeStrategy {
    /// Enumerate every outcome with its exact probability.
    Exhaustive,
    /// Draw heralds and outcomes from the Born rule with a seeded stream.
    Sampled { seed: u64 },
}

/// One photon-counting branch of a heralded run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub pipeline: Pipeline,
    /// Probability of the dark-port herald, from the simulation.
    pub herald_probability: f64,
    /// `2|αβ|² sin²(g t/2)`.
    pub analytic_probability: f64,
    pub detector_outcomes: Vec<u8>,
    /// Probability of `detector_outcomes` given the herald.
    pub outcome_probability: f64,
    pub parity: Parity,
    pub correction_applied: bool,
    pub pre_correction_state: FockVector,
    pub final_state: FockVector,
    pub target_fidelity: f64,
    pub seed: Option<u64>,
}

/// Every outcome of a heralded run with exact probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustiveReport {
    pub pipeline: Pipeline,
    pub herald_probability: f64,
    pub analytic_probability: f64,
    /// Probability that the photon leaves through the bright port.
    pub failure_probability: f64,
    /// Kept and ancilla registers right after the herald.
    pub heralded_state: FockVector,
    pub outcomes: Vec<ProtocolReport>,
}

impl ExhaustiveReport {
    /// Herald failure plus every heralded outcome; 1 for a complete
    /// enumeration.
    pub fn total_probability(&self) -> f64 {
        self.failure_probability
            + self
                .outcomes
                .iter()
                .map(|o| self.herald_probability * o.outcome_probability)
                .sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EcpResult {
    Exhaustive(ExhaustiveReport),
    Single(ProtocolReport),
}

/// A configured concentration run: layout, physical parameters and the
/// cross-Kerr interaction time in seconds.
#[derive(Debug, Clone)]
pub struct EcpRun {
    layout: EcpLayout,
    params: SystemParams,
    t: f64,
    transfer: TransferMode,
}

impl EcpRun {
    pub fn new(layout: EcpLayout, params: SystemParams, t: f64) -> Result<Self> {
        params.validate()?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParams(format!("interaction time {t} must be >= 0")));
        }
        Ok(EcpRun {
            layout,
            params,
            t,
            transfer: TransferMode::IdealMap,
        })
    }

    pub fn with_transfer(mut self, transfer: TransferMode) -> Self {
        self.transfer = transfer;
        self
    }

    pub fn layout(&self) -> &EcpLayout {
        &self.layout
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn analytic_probability(&self) -> f64 {
        success_probability(self.params.alpha, self.params.beta, self.params.g, self.t)
            .expect("params validated at construction")
    }

    /// Photon through the first beam splitter, both registers prepared, and
    /// the two cross-Kerr interactions applied. Register order:
    /// interferometer, targets, ancillas.
    pub fn prepare(&self) -> Result<FockVector> {
        let l = &self.layout;
        let [a, b] = &l.interferometer;
        let photon_reg = ModeRegistry::from_labels([a.clone(), b.clone()])?;
        let photon = beam_splitter(&FockVector::basis(&photon_reg, &[1, 0])?, a.name(), b.name())?;
        let state = photon
            .tensor(&l.input_on_targets(&self.params)?)?
            .tensor(&l.input_on_ancillas(&self.params)?)?;
        let kerr = self.params.kerr(self.t);
        let state = cross_kerr_evolve(&state, a.name(), l.targets[l.kerr_party].name(), &kerr)?;
        cross_kerr_evolve(&state, b.name(), l.ancillas[l.kerr_party].name(), &kerr)
    }

    /// Projects the interferometer on its dark-port state.
    pub fn herald(&self, prepared: &FockVector) -> Result<HeraldResult> {
        let [a, b] = &self.layout.interferometer;
        dark_port_postselect(prepared, a.name(), b.name())
    }

    /// Closes the interferometer and counts photons at both outputs. Returns
    /// the herald probability and the collapsed registers when the photon
    /// left through the dark port.
    pub fn herald_sampled<R: Rng + ?Sized>(
        &self,
        prepared: &FockVector,
        rng: &mut R,
    ) -> Result<(f64, Option<FockVector>)> {
        let [a, b] = &self.layout.interferometer;
        let closed = beam_splitter(prepared, a.name(), b.name())?;
        let branches = closed.measurement_branches(&[a.name(), b.name()])?;
        let dark = branches
            .iter()
            .find(|(o, _)| o[..] == [0, 1])
            .map(|(_, h)| h.probability)
            .unwrap_or(0.0);
        let (outcome, h) = closed.sample_measurement(&[a.name(), b.name()], rng)?;
        if outcome[..] == [0, 1] {
            Ok((dark, h.state))
        } else {
            Ok((dark, None))
        }
    }

    /// Maps every ancilla onto its cavity and applies a Hadamard to each
    /// cavity photon. Register order: targets, cavities.
    pub fn to_photons(&self, heralded: &FockVector) -> Result<FockVector> {
        let l = &self.layout;
        let cav_reg = ModeRegistry::from_labels(l.cavities.iter().cloned())?;
        let mut state = heralded.tensor(&FockVector::vacuum(&cav_reg))?;
        for (mech, cav) in l.ancillas.iter().zip(&l.cavities) {
            state = anti_stokes_transfer(&state, mech.name(), cav.name(), self.transfer)?;
        }
        state = state.discard_vacuum(&l.ancilla_names())?;
        for cav in &l.cavities {
            state = hadamard_photon(&state, cav.name())?;
        }
        Ok(state)
    }

    fn finish(
        &self,
        herald_probability: f64,
        outcome: Vec<u8>,
        branch: HeraldResult,
        seed: Option<u64>,
    ) -> Result<ProtocolReport> {
        let parity = self.layout.parity(&outcome);
        let outcome_probability = branch.probability;
        let pre = branch.into_state()?;
        let correction_applied = !parity.is_odd();
        let final_state = if correction_applied {
            pi_phase(&pre, self.layout.targets[0].name())?
        } else {
            pre.clone()
        };
        let target_fidelity = self.layout.target_state().fidelity(&final_state)?;
        Ok(ProtocolReport {
            pipeline: self.layout.pipeline,
            herald_probability,
            analytic_probability: self.analytic_probability(),
            detector_outcomes: outcome,
            outcome_probability,
            parity,
            correction_applied,
            pre_correction_state: pre,
            final_state,
            target_fidelity,
            seed,
        })
    }

    pub fn exhaustive(&self) -> Result<ExhaustiveReport> {
        let herald = self.herald(&self.prepare()?)?;
        let herald_probability = herald.probability;
        let heralded = herald.into_state()?;
        let photons = self.to_photons(&heralded)?;
        let outcomes = photons
            .measurement_branches(&self.layout.cavity_names())?
            .into_iter()
            .map(|(o, h)| self.finish(herald_probability, o, h, None))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExhaustiveReport {
            pipeline: self.layout.pipeline,
            herald_probability,
            analytic_probability: self.analytic_probability(),
            failure_probability: (1.0 - herald_probability).max(0.0),
            heralded_state: heralded,
            outcomes,
        })
    }

    /// One stochastic run from an already prepared state.
    pub fn sample_from<R: Rng + ?Sized>(
        &self,
        prepared: &FockVector,
        rng: &mut R,
        seed: Option<u64>,
    ) -> Result<ProtocolReport> {
        let (herald_probability, heralded) = self.herald_sampled(prepared, rng)?;
        let heralded = heralded.ok_or(Error::HeraldFailed)?;
        let photons = self.to_photons(&heralded)?;
        let (outcome, branch) = photons.sample_measurement(&self.layout.cavity_names(), rng)?;
        self.finish(herald_probability, outcome, branch, seed)
    }

    pub fn sample(&self, seed: u64) -> Result<ProtocolReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_from(&self.prepare()?, &mut rng, Some(seed))
    }

    pub fn run(&self, strategy: OutcomeStrategy) -> Result<EcpResult> {
        match strategy {
            OutcomeStrategy::Exhaustive => self.exhaustive().map(EcpResult::Exhaustive),
            OutcomeStrategy::Sampled { seed } => self.sample(seed).map(EcpResult::Single),
        }
    }
}

/// Bell-pair concentration on `u₁u₂` with the auxiliary pair `v₁v₂`.
pub fn run_bell_ecp(params: &SystemParams, t: f64, strategy: OutcomeStrategy) -> Result<EcpResult> {
    EcpRun::new(EcpLayout::bell(), *params, t)?.run(strategy)
}

/// GHZ concentration on `x₁x₂x₃` with the auxiliary triple `y₁y₂y₃`.
pub fn run_ghz_ecp(params: &SystemParams, t: f64, strategy: OutcomeStrategy) -> Result<EcpResult> {
    EcpRun::new(EcpLayout::ghz(), *params, t)?.run(strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_state, ModeLabel, Owner};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn params(alpha_sq: f64) -> SystemParams {
        SystemParams {
            delta: 0.31 * SystemParams::default().omega_m,
            ..SystemParams::default()
        }
        .with_alpha_sq(alpha_sq)
        .unwrap()
    }

    fn run(layout: EcpLayout, alpha_sq: f64, gt: f64) -> EcpRun {
        let p = params(alpha_sq);
        let t = p.time_from_gt(gt).unwrap();
        EcpRun::new(layout, p, t).unwrap()
    }

    /// Brute-force expansion of the two branches of the interferometer,
    /// written directly from the phase rules, then projected by hand.
    fn residual_by_hand(p: &SystemParams, t: f64) -> (Complex64, Complex64) {
        let ph = |theta: f64| Complex64::from_polar(1.0, -theta * t);
        let (a, b) = (p.alpha, p.beta);
        let th10 = p.delta;
        let th01 = p.omega_m;
        let th11 = p.omega_m + p.delta - p.g;
        // photon in A: u gets (th10, th11), v gets (1, th01)
        let u_a = [a * ph(th10), b * ph(th11)];
        let v_a = [a, b * ph(th01)];
        let u_b = [a, b * ph(th01)];
        let v_b = [a * ph(th10), b * ph(th11)];
        // ⟨ψ_f| = (⟨10| − ⟨01|)/√2 on the (1/√2)-weighted branches
        let c1001 = 0.5 * (u_a[0] * v_a[1] - u_b[0] * v_b[1]);
        let c0110 = 0.5 * (u_a[1] * v_a[0] - u_b[1] * v_b[0]);
        (c1001, c0110)
    }

    #[test]
    fn dark_port_residual_matches_expansion() {
        let r = run(EcpLayout::bell(), 0.3, 1.1);
        let h = r.herald(&r.prepare().unwrap()).unwrap();
        let (c1001, c0110) = residual_by_hand(&r.params, r.t);
        let xi = Complex64::from_polar(1.0, -(r.params.omega_m + r.params.delta) * r.t)
            * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, r.params.g * r.t));
        let ab = r.params.alpha * r.params.beta;
        assert!((c1001 - 0.5 * ab * xi).norm() < 1e-12);
        assert!((c0110 + 0.5 * ab * xi).norm() < 1e-12);
        let prob = c1001.norm_sqr() + c0110.norm_sqr();
        assert!((h.probability - prob).abs() < 1e-12);
        let s = h.state().unwrap();
        let scale = 1.0 / prob.sqrt();
        assert!((s.amplitude(&[1, 0, 0, 1]) - c1001 * scale).norm() < 1e-12);
        assert!((s.amplitude(&[0, 1, 1, 0]) - c0110 * scale).norm() < 1e-12);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn projection_and_physical_port_agree() {
        let r = run(EcpLayout::bell(), 0.7, 2.3);
        let prepared = r.prepare().unwrap();
        let exact = r.herald(&prepared).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (p, state) = r.herald_sampled(&prepared, &mut rng).unwrap();
            assert!((p - exact.probability).abs() < 1e-12);
            if let Some(s) = state {
                assert!((s.fidelity(exact.state().unwrap()).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_branches_follow_photon_counting_rule() {
        let r = run(EcpLayout::bell(), 0.8, PI);
        let rep = r.exhaustive().unwrap();
        assert!((rep.herald_probability - 0.32).abs() < 1e-12);
        assert_eq!(rep.outcomes.len(), 4);
        let l = EcpLayout::bell();
        for o in &rep.outcomes {
            assert!((o.outcome_probability - 0.25).abs() < 1e-12);
            let want = if o.parity == Parity::Different {
                l.target_state()
            } else {
                l.minus_state()
            };
            assert!((o.pre_correction_state.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(o.correction_applied, o.parity == Parity::Same);
            assert!((o.target_fidelity - 1.0).abs() < 1e-12);
        }
        assert!((rep.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transferred_state_before_hadamards() {
        let r = run(EcpLayout::bell(), 0.5, PI);
        let heralded = r.herald(&r.prepare().unwrap()).unwrap().into_state().unwrap();
        let reg = ModeRegistry::from_labels(
            r.layout
                .targets
                .iter()
                .chain(&r.layout.cavities)
                .cloned(),
        )
        .unwrap();
        // |10⟩_{u}|01⟩_{CB} − |01⟩_{u}|10⟩_{CB}
        let want = make_state(&reg, [([1u8, 0, 0, 1], 1.0), ([0, 1, 1, 0], -1.0)]).unwrap();
        for transfer in [
            TransferMode::IdealMap,
            TransferMode::complete_unitary(r.params.coupling_as),
        ] {
            let cav = ModeRegistry::from_labels(r.layout.cavities.iter().cloned()).unwrap();
            let mut s = heralded.tensor(&FockVector::vacuum(&cav)).unwrap();
            for (m, c) in r.layout.ancillas.iter().zip(&r.layout.cavities) {
                s = anti_stokes_transfer(&s, m.name(), c.name(), transfer).unwrap();
            }
            let s = s.discard_vacuum(&r.layout.ancilla_names()).unwrap();
            assert!((s.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hadamards_give_four_equal_branches() {
        // 1/(2√2)[(|10⟩−|01⟩)(|00⟩−|11⟩) + (|10⟩+|01⟩)(|10⟩−|01⟩)] on u1 u2 C B
        let r = run(EcpLayout::bell(), 0.5, PI);
        let heralded = r.herald(&r.prepare().unwrap()).unwrap().into_state().unwrap();
        let got = r.to_photons(&heralded).unwrap();
        let reg = got.registry();
        let mut terms = Vec::new();
        for (u, us) in [([1u8, 0], 1.0), ([0, 1], -1.0)] {
            for (c, cs) in [([0u8, 0], 1.0), ([1, 1], -1.0)] {
                terms.push(([u[0], u[1], c[0], c[1]], us * cs));
            }
        }
        for (u, us) in [([1u8, 0], 1.0), ([0, 1], 1.0)] {
            for (c, cs) in [([1u8, 0], 1.0), ([0, 1], -1.0)] {
                terms.push(([u[0], u[1], c[0], c[1]], us * cs));
            }
        }
        let want = make_state(&reg, terms).unwrap();
        assert!((got.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_entanglement_no_herald() {
        let r = run(EcpLayout::bell(), 1.0, PI);
        assert_eq!(r.exhaustive().unwrap_err(), Error::HeraldFailed);
        let r = run(EcpLayout::bell(), 0.5, 2.0 * PI);
        assert_eq!(r.exhaustive().unwrap_err(), Error::HeraldFailed);
    }

    #[test]
    fn ghz_branches() {
        let r = run(EcpLayout::ghz(), 0.3, PI);
        let rep = r.exhaustive().unwrap();
        assert!((rep.herald_probability - 2.0 * 0.3 * 0.7).abs() < 1e-12);
        assert_eq!(rep.outcomes.len(), 8);
        let l = EcpLayout::ghz();
        for o in &rep.outcomes {
            assert!((o.outcome_probability - 0.125).abs() < 1e-12);
            let want = if o.parity.is_odd() {
                l.target_state()
            } else {
                l.minus_state()
            };
            assert!((o.pre_correction_state.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
            assert!((o.target_fidelity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_without_charlie_behaves_like_bell() {
        let bell = run(EcpLayout::bell(), 0.35, 1.7).exhaustive().unwrap();
        let reduced = run(EcpLayout::ghz().without_party(2).unwrap(), 0.35, 1.7)
            .exhaustive()
            .unwrap();
        assert!((bell.herald_probability - reduced.herald_probability).abs() < 1e-12);
        assert_eq!(bell.outcomes.len(), reduced.outcomes.len());
        for (b, g) in bell.outcomes.iter().zip(&reduced.outcomes) {
            assert_eq!(b.detector_outcomes, g.detector_outcomes);
            assert_eq!(b.parity.is_odd(), g.parity.is_odd());
            assert_eq!(b.correction_applied, g.correction_applied);
            assert!((b.outcome_probability - g.outcome_probability).abs() < 1e-12);
            assert!((g.target_fidelity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unitary_transfer_phase_is_global_for_bell_only() {
        let p = params(0.5);
        let t = p.time_from_gt(PI).unwrap();
        let unitary = TransferMode::complete_unitary(p.coupling_as);
        let bell = EcpRun::new(EcpLayout::bell(), p, t)
            .unwrap()
            .with_transfer(unitary)
            .exhaustive()
            .unwrap();
        assert!(bell.outcomes.iter().all(|o| (o.target_fidelity - 1.0).abs() < 1e-12));
        // |000111⟩ picks up (−i)³ and |111000⟩ nothing: relative phase i
        let ghz = EcpRun::new(EcpLayout::ghz(), p, t)
            .unwrap()
            .with_transfer(unitary)
            .exhaustive()
            .unwrap();
        assert!(ghz.outcomes.iter().all(|o| (o.target_fidelity - 0.5).abs() < 1e-12));
    }

    #[test]
    fn sampled_runs_are_reproducible() {
        let r = run(EcpLayout::ghz(), 0.5, PI);
        let mut reports = Vec::new();
        for seed in 0..50 {
            match r.sample(seed) {
                Ok(rep) => {
                    assert_eq!(r.sample(seed).unwrap(), rep);
                    assert!((rep.target_fidelity - 1.0).abs() < 1e-12);
                    assert!((rep.herald_probability - rep.analytic_probability).abs() < 1e-9);
                    reports.push(rep);
                }
                Err(e) => assert_eq!(e, Error::HeraldFailed),
            }
        }
        assert!(!reports.is_empty());
    }

    #[test]
    fn photon_modes_keep_their_owners() {
        let l = EcpLayout::ghz();
        assert_eq!(l.cavities[0], ModeLabel::optical("F", Owner::Alice));
        assert_eq!(l.cavities[2].owner(), Owner::Charlie);
    }
}
