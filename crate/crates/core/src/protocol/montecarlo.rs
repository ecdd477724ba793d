use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ecp::EcpRun;
use super::layout::{EcpLayout, Parity, Pipeline};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Dark counts at the heralding detector.
///
/// In every heralding window a false click occurs with probability
/// `p_dark = dark_rate × window`, independently of the photon. It only
/// matters when the photon left through the bright port; the kept register
/// is then the unconcentrated input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub enabled: bool,
    /// Hz.
    pub dark_rate: f64,
    /// Seconds; `None` means `1/κ`.
    pub window: Option<f64>,
}

impl NoiseModel {
    pub fn off() -> Self {
        NoiseModel {
            enabled: false,
            dark_rate: 0.0,
            window: None,
        }
    }

    pub fn dark_counts(dark_rate: f64) -> Self {
        NoiseModel {
            enabled: true,
            dark_rate,
            window: None,
        }
    }

    pub fn window_for(&self, kappa: f64) -> f64 {
        self.window.unwrap_or(1.0 / kappa)
    }

    /// Probability of a false click per window, clamped to `[0, 1]`.
    pub fn p_dark(&self, kappa: f64) -> f64 {
        if !self.enabled {
            return 0.0;
        }
        (self.dark_rate * self.window_for(kappa)).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeFrequency {
    pub outcome: Vec<u8>,
    pub parity: Parity,
    pub count: u64,
    /// Fraction of true heralds.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloStats {
    pub pipeline: Pipeline,
    pub trials: u64,
    pub seed: u64,
    pub noise: NoiseModel,
    pub p_dark: f64,
    pub analytic_probability: f64,
    pub true_heralds: u64,
    pub false_heralds: u64,
    /// All heralds (true and false) per trial.
    pub herald_rate: f64,
    pub herald_rate_stderr: f64,
    pub outcome_frequencies: Vec<OutcomeFrequency>,
    pub corrections_applied: u64,
    /// Mean final fidelity over true heralds.
    pub mean_final_fidelity: Option<f64>,
    pub min_final_fidelity: Option<f64>,
    /// Mean final fidelity over every herald, false ones included.
    pub effective_heralded_fidelity: Option<f64>,
}

pub const STATS_CSV_HEADER: [&str; 12] = [
    "pipeline",
    "trials",
    "seed",
    "p_dark",
    "analytic_probability",
    "true_heralds",
    "false_heralds",
    "herald_rate",
    "herald_rate_stderr",
    "corrections_applied",
    "mean_final_fidelity",
    "effective_heralded_fidelity",
];

impl MonteCarloStats {
    /// One header row and one data row. Missing fidelities are empty fields.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(STATS_CSV_HEADER)?;
        w.write_record([
            self.pipeline.as_str().to_string(),
            self.trials.to_string(),
            self.seed.to_string(),
            format!("{:?}", self.p_dark),
            format!("{:?}", self.analytic_probability),
            self.true_heralds.to_string(),
            self.false_heralds.to_string(),
            format!("{:?}", self.herald_rate),
            format!("{:?}", self.herald_rate_stderr),
            self.corrections_applied.to_string(),
            opt(self.mean_final_fidelity),
            opt(self.effective_heralded_fidelity),
        ])?;
        w.flush()
    }
}

enum Trial {
    Heralded {
        outcome: Vec<u8>,
        parity: Parity,
        corrected: bool,
        fidelity: f64,
    },
    FalseHerald,
    Failed,
}

/// RNG for trial `index`: the master seed picks the key, the trial index
/// picks the stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Repeats a pipeline `trials` times. The branches of the run are
/// enumerated once; every trial then draws the herald and the detector
/// outcome from their Born probabilities.
pub fn monte_carlo(
    pipeline: Pipeline,
    params: &SystemParams,
    t: f64,
    trials: u64,
    seed: u64,
    noise: NoiseModel,
) -> Result<MonteCarloStats> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let layout = EcpLayout::for_pipeline(pipeline);
    let run = EcpRun::new(layout, *params, t)?;
    let (herald_probability, outcomes) = match run.exhaustive() {
        Ok(r) => (r.herald_probability, r.outcomes),
        Err(Error::HeraldFailed) => (0.0, Vec::new()),
        Err(e) => return Err(e),
    };
    let p_dark = noise.p_dark(params.kappa);
    // fidelity of the kept register when nothing was concentrated
    let unconcentrated = run
        .layout()
        .target_state()
        .fidelity(&run.layout().input_on_targets(params)?)?;

    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            if rng.random::<f64>() < herald_probability {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                let picked = outcomes
                    .iter()
                    .find(|o| {
                        acc += o.outcome_probability;
                        u < acc
                    })
                    .or(outcomes.last())
                    .expect("a heralded run has outcomes");
                Trial::Heralded {
                    outcome: picked.detector_outcomes.clone(),
                    parity: picked.parity,
                    corrected: picked.correction_applied,
                    fidelity: picked.target_fidelity,
                }
            } else if p_dark > 0.0 && rng.random::<f64>() < p_dark {
                Trial::FalseHerald
            } else {
                Trial::Failed
            }
        })
        .collect();

    let mut true_heralds = 0u64;
    let mut false_heralds = 0u64;
    let mut corrections = 0u64;
    let mut fid_sum = 0.0;
    let mut fid_min = f64::INFINITY;
    let mut counts: BTreeMap<Vec<u8>, (Parity, u64)> = BTreeMap::new();
    for trial in results {
        match trial {
            Trial::Heralded {
                outcome,
                parity,
                corrected,
                fidelity,
            } => {
                true_heralds += 1;
                corrections += corrected as u64;
                fid_sum += fidelity;
                fid_min = fid_min.min(fidelity);
                counts.entry(outcome).or_insert((parity, 0)).1 += 1;
            }
            Trial::FalseHerald => false_heralds += 1,
            Trial::Failed => {}
        }
    }
    let heralds = true_heralds + false_heralds;
    let n = trials as f64;
    let rate = heralds as f64 / n;
    let outcome_frequencies = counts
        .into_iter()
        .map(|(outcome, (parity, count))| OutcomeFrequency {
            outcome,
            parity,
            count,
            frequency: count as f64 / true_heralds as f64,
        })
        .collect();
    Ok(MonteCarloStats {
        pipeline,
        trials,
        seed,
        noise,
        p_dark,
        analytic_probability: run.analytic_probability(),
        true_heralds,
        false_heralds,
        herald_rate: rate,
        herald_rate_stderr: (rate * (1.0 - rate) / n).sqrt(),
        outcome_frequencies,
        corrections_applied: corrections,
        mean_final_fidelity: (true_heralds > 0).then(|| fid_sum / true_heralds as f64),
        min_final_fidelity: (true_heralds > 0).then_some(fid_min),
        effective_heralded_fidelity: (heralds > 0)
            .then(|| (fid_sum + false_heralds as f64 * unconcentrated) / heralds as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params() -> SystemParams {
        SystemParams::default().with_alpha_sq(0.8).unwrap()
    }

    #[test]
    fn zero_trials_is_an_error() {
        let p = params();
        let t = p.time_from_gt(PI).unwrap();
        assert!(monte_carlo(Pipeline::Ghz, &p, t, 0, 1, NoiseModel::off()).is_err());
    }

    #[test]
    fn single_trial_is_reproducible() {
        let p = params();
        let t = p.time_from_gt(PI).unwrap();
        let a = monte_carlo(Pipeline::Bell, &p, t, 1, 99, NoiseModel::off()).unwrap();
        let b = monte_carlo(Pipeline::Bell, &p, t, 1, 99, NoiseModel::off()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ghz_outcomes_are_uniform_and_corrected() {
        let p = params();
        let t = p.time_from_gt(PI).unwrap();
        let s = monte_carlo(Pipeline::Ghz, &p, t, 4000, 7, NoiseModel::off()).unwrap();
        assert_eq!(s.outcome_frequencies.len(), 8);
        assert!((s.mean_final_fidelity.unwrap() - 1.0).abs() < 1e-12);
        let n = s.true_heralds as f64;
        for f in &s.outcome_frequencies {
            let sigma = (0.125 * 0.875 / n).sqrt();
            assert!((f.frequency - 0.125).abs() < 4.0 * sigma, "{f:?}");
        }
        assert_eq!(s.false_heralds, 0);
    }

    #[test]
    fn dark_counts_degrade_heralded_fidelity() {
        let p = params();
        let t = p.time_from_gt(PI).unwrap();
        let noise = NoiseModel {
            enabled: true,
            dark_rate: 0.3 * p.kappa,
            window: None,
        };
        assert!((noise.p_dark(p.kappa) - 0.3).abs() < 1e-12);
        let s = monte_carlo(Pipeline::Bell, &p, t, 4000, 3, noise).unwrap();
        assert!(s.false_heralds > 0);
        let eff = s.effective_heralded_fidelity.unwrap();
        assert!(eff < 1.0);
        // unconcentrated input (√0.8|10⟩ + √0.2|01⟩) has fidelity 0.9 to the target
        let frac = s.false_heralds as f64 / (s.true_heralds + s.false_heralds) as f64;
        assert!((eff - (1.0 - 0.1 * frac)).abs() < 1e-12);
    }

    #[test]
    fn p_dark_is_clamped() {
        let n = NoiseModel {
            enabled: true,
            dark_rate: 1e12,
            window: Some(1.0),
        };
        assert_eq!(n.p_dark(1.0), 1.0);
        assert_eq!(NoiseModel::off().p_dark(1.0), 0.0);
    }
}
