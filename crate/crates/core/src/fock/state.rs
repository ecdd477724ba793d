use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use super::mode::{ModeLabel, ModeRegistry};
use crate::error::{Error, Result};

/// Default per-mode occupation cutoff.
pub const DEFAULT_CUTOFF: u8 = 2;
/// Amplitudes with a smaller modulus are dropped from the map.
pub const PRUNE_EPSILON: f64 = 1e-14;
/// Tolerance on the squared norm of every state handed out.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Occupation numbers, one per mode, in register order.
pub type Occupation = Vec<u8>;

pub(crate) type AmplitudeMap = BTreeMap<Occupation, Complex64>;

/// A normalized pure state over a small set of bosonic modes, stored as a
/// sparse map from occupation tuples to amplitudes.
///
/// Values are immutable; every operation returns a new vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    modes: Vec<ModeLabel>,
    cutoff: u8,
    amplitudes: AmplitudeMap,
}

/// Outcome of a postselection: the probability of the branch and, when it
/// is nonzero, the renormalized post-collapse state.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldResult {
    pub probability: f64,
    pub state: Option<FockVector>,
}

impl HeraldResult {
    pub(crate) fn failed() -> Self {
        HeraldResult {
            probability: 0.0,
            state: None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.state.is_some()
    }

    pub fn state(&self) -> Option<&FockVector> {
        self.state.as_ref()
    }

    pub fn into_state(self) -> Result<FockVector> {
        self.state.ok_or(Error::HeraldFailed)
    }
}

/// Builds a normalized state on `registry` with the default cutoff.
pub fn make_state<T>(registry: &ModeRegistry, terms: T) -> Result<FockVector>
where
    T: IntoIterator,
    T::Item: Into<Term>,
{
    FockVector::with_cutoff(registry, DEFAULT_CUTOFF, terms)
}

/// One `(occupation, amplitude)` pair fed to the state constructors.
pub struct Term(pub Occupation, pub Complex64);

impl<O: AsRef<[u8]>> From<(O, Complex64)> for Term {
    fn from((occ, amp): (O, Complex64)) -> Self {
        Term(occ.as_ref().to_vec(), amp)
    }
}

impl<O: AsRef<[u8]>> From<(O, f64)> for Term {
    fn from((occ, amp): (O, f64)) -> Self {
        Term(occ.as_ref().to_vec(), Complex64::new(amp, 0.0))
    }
}

impl FockVector {
    pub fn with_cutoff<T>(registry: &ModeRegistry, cutoff: u8, terms: T) -> Result<Self>
    where
        T: IntoIterator,
        T::Item: Into<Term>,
    {
        let modes = registry.labels().to_vec();
        let mut map = AmplitudeMap::new();
        for term in terms {
            let Term(occ, amp) = term.into();
            validate_occupation(&occ, modes.len(), cutoff)?;
            *map.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        let (_, state) = Self::from_unnormalized(modes, cutoff, map);
        state.ok_or(Error::ZeroVector)
    }

    /// The all-vacuum state of `registry`.
    pub fn vacuum(registry: &ModeRegistry) -> Self {
        let occ = vec![0; registry.len()];
        Self::with_cutoff(registry, DEFAULT_CUTOFF, [(occ, 1.0)])
            .expect("vacuum is a valid basis state")
    }

    /// A single basis state `|occ⟩`.
    pub fn basis(registry: &ModeRegistry, occ: &[u8]) -> Result<Self> {
        Self::with_cutoff(registry, DEFAULT_CUTOFF, [(occ, 1.0)])
    }

    /// Prunes and renormalizes `map`. Returns the squared norm of the pruned
    /// map and the normalized state, or `None` when nothing survives.
    pub(crate) fn from_unnormalized(
        modes: Vec<ModeLabel>,
        cutoff: u8,
        mut map: AmplitudeMap,
    ) -> (f64, Option<Self>) {
        map.retain(|_, a| a.norm() >= PRUNE_EPSILON);
        let norm_sqr: f64 = map.values().map(|a| a.norm_sqr()).sum();
        if map.is_empty() || norm_sqr == 0.0 {
            return (0.0, None);
        }
        let scale = 1.0 / norm_sqr.sqrt();
        for amp in map.values_mut() {
            *amp *= scale;
        }
        map.retain(|_, a| a.norm() >= PRUNE_EPSILON);
        let state = FockVector {
            modes,
            cutoff,
            amplitudes: map,
        };
        (norm_sqr, Some(state))
    }

    /// Wraps the image of a norm-preserving map. Only prunes.
    pub(crate) fn from_unitary_image(
        modes: Vec<ModeLabel>,
        cutoff: u8,
        mut map: AmplitudeMap,
    ) -> Self {
        map.retain(|_, a| a.norm() >= PRUNE_EPSILON);
        FockVector {
            modes,
            cutoff,
            amplitudes: map,
        }
    }

    /// Assembles a state that has already been validated and normalized.
    pub(crate) fn from_checked_parts(
        modes: Vec<ModeLabel>,
        cutoff: u8,
        amplitudes: AmplitudeMap,
    ) -> Self {
        FockVector {
            modes,
            cutoff,
            amplitudes,
        }
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn mode_names(&self) -> Vec<&str> {
        self.modes.iter().map(|m| m.name()).collect()
    }

    pub fn registry(&self) -> ModeRegistry {
        ModeRegistry::from_labels(self.modes.iter().cloned())
            .expect("state modes are unique")
    }

    pub fn cutoff(&self) -> u8 {
        self.cutoff
    }

    /// Number of stored (nonzero) components.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn amplitude(&self, occ: &[u8]) -> Complex64 {
        self.amplitudes
            .get(occ)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.name() == name)
            .ok_or_else(|| Error::ModeMismatch(format!("mode `{name}` is not in the register")))
    }

    pub fn label(&self, name: &str) -> Result<&ModeLabel> {
        self.index_of(name).map(|i| &self.modes[i])
    }

    /// Resolves distinct mode names to register indices.
    pub fn indices_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.index_of(name)?;
            if out.contains(&idx) {
                return Err(Error::ModeMismatch(format!("mode `{name}` listed twice")));
            }
            out.push(idx);
        }
        Ok(out)
    }

    /// Occupation-number distribution of one mode, indexed by occupation.
    pub fn occupation_distribution(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.index_of(name)?;
        let mut dist = vec![0.0; self.cutoff as usize + 1];
        for (occ, amp) in &self.amplitudes {
            dist[occ[idx] as usize] += amp.norm_sqr();
        }
        Ok(dist)
    }

    /// Multiplies every amplitude by `e^{i phi}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let phase = Complex64::from_polar(1.0, phi);
        let mut out = self.clone();
        for amp in out.amplitudes.values_mut() {
            *amp *= phase;
        }
        out
    }

    /// Same amplitudes on a register with a raised cutoff.
    pub fn with_raised_cutoff(&self, cutoff: u8) -> Self {
        let mut out = self.clone();
        out.cutoff = out.cutoff.max(cutoff);
        out
    }

    /// Tensor product `self ⊗ other`; the register is the concatenation.
    pub fn tensor(&self, other: &FockVector) -> Result<FockVector> {
        for m in &other.modes {
            if self.modes.iter().any(|n| n.name() == m.name()) {
                return Err(Error::ModeCollision(m.name().to_string()));
            }
        }
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        let mut map = AmplitudeMap::new();
        for (oa, a) in &self.amplitudes {
            for (ob, b) in &other.amplitudes {
                let mut occ = Vec::with_capacity(oa.len() + ob.len());
                occ.extend_from_slice(oa);
                occ.extend_from_slice(ob);
                map.insert(occ, a * b);
            }
        }
        Ok(Self::from_unitary_image(
            modes,
            self.cutoff.max(other.cutoff),
            map,
        ))
    }

    fn check_same_register(&self, other: &FockVector) -> Result<()> {
        if self.modes.len() != other.modes.len()
            || self
                .modes
                .iter()
                .zip(&other.modes)
                .any(|(a, b)| a.name() != b.name() || a.kind() != b.kind())
        {
            return Err(Error::ModeMismatch(format!(
                "registers differ: {:?} vs {:?}",
                self.mode_names(),
                other.mode_names()
            )));
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        self.check_same_register(other)?;
        let (small, large, conj_small) = if self.len() <= other.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (occ, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(occ) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// `|⟨self|other⟩|²`, clamped to `[0, 1]`.
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Projects the modes of `target` onto `target`, removing them from the
    /// register. The residual lives on the complementary modes, in order.
    pub fn project(&self, target: &FockVector) -> Result<HeraldResult> {
        let mut picked = Vec::with_capacity(target.modes.len());
        for m in &target.modes {
            let idx = self.index_of(m.name())?;
            if self.modes[idx].kind() != m.kind() {
                return Err(Error::ModeMismatch(format!(
                    "mode `{}` is {} in the state but {} in the target",
                    m.name(),
                    self.modes[idx].kind().as_str(),
                    m.kind().as_str()
                )));
            }
            picked.push(idx);
        }
        let rest = complement(self.modes.len(), &picked);
        let mut map = AmplitudeMap::new();
        for (occ, amp) in &self.amplitudes {
            let sub: Occupation = picked.iter().map(|&i| occ[i]).collect();
            if let Some(t) = target.amplitudes.get(&sub) {
                let key: Occupation = rest.iter().map(|&i| occ[i]).collect();
                *map.entry(key).or_insert(Complex64::new(0.0, 0.0)) += t.conj() * amp;
            }
        }
        let modes = rest.iter().map(|&i| self.modes[i].clone()).collect();
        Ok(herald_from(modes, self.cutoff, map))
    }

    /// Every outcome of a number measurement on `names`, in ascending
    /// outcome order, with its Born probability and collapsed state. The
    /// measured modes are removed from the returned states.
    pub fn measurement_branches(&self, names: &[&str]) -> Result<Vec<(Occupation, HeraldResult)>> {
        if names.is_empty() {
            return Err(Error::ModeMismatch("no modes to measure".into()));
        }
        let picked = self.indices_of(names)?;
        let rest = complement(self.modes.len(), &picked);
        let mut groups: BTreeMap<Occupation, AmplitudeMap> = BTreeMap::new();
        for (occ, amp) in &self.amplitudes {
            let sub: Occupation = picked.iter().map(|&i| occ[i]).collect();
            let key: Occupation = rest.iter().map(|&i| occ[i]).collect();
            *groups
                .entry(sub)
                .or_default()
                .entry(key)
                .or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        let modes: Vec<ModeLabel> = rest.iter().map(|&i| self.modes[i].clone()).collect();
        Ok(groups
            .into_iter()
            .map(|(outcome, map)| (outcome, herald_from(modes.clone(), self.cutoff, map)))
            .filter(|(_, h)| h.is_success())
            .collect())
    }

    /// Draws one outcome of a number measurement on `names` from the Born
    /// distribution. Deterministic for a given RNG state.
    pub fn sample_measurement<R: Rng + ?Sized>(
        &self,
        names: &[&str],
        rng: &mut R,
    ) -> Result<(Occupation, HeraldResult)> {
        let mut branches = self.measurement_branches(names)?;
        let total: f64 = branches.iter().map(|(_, h)| h.probability).sum();
        let draw = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let last = branches.len() - 1;
        let pick = branches
            .iter()
            .position(|(_, h)| {
                acc += h.probability;
                draw < acc
            })
            .unwrap_or(last);
        Ok(branches.swap_remove(pick))
    }

    /// Removes modes that are in vacuum on every component.
    pub fn discard_vacuum(&self, names: &[&str]) -> Result<FockVector> {
        let picked = self.indices_of(names)?;
        if self
            .amplitudes
            .keys()
            .any(|occ| picked.iter().any(|&i| occ[i] != 0))
        {
            return Err(Error::ModesNotVacuum(names.join(",")));
        }
        let rest = complement(self.modes.len(), &picked);
        let map = self
            .amplitudes
            .iter()
            .map(|(occ, a)| (rest.iter().map(|&i| occ[i]).collect(), *a))
            .collect();
        let modes = rest.iter().map(|&i| self.modes[i].clone()).collect();
        Ok(FockVector::from_checked_parts(modes, self.cutoff, map))
    }
}

fn herald_from(modes: Vec<ModeLabel>, cutoff: u8, map: AmplitudeMap) -> HeraldResult {
    match FockVector::from_unnormalized(modes, cutoff, map) {
        (p, Some(state)) => HeraldResult {
            probability: p.min(1.0),
            state: Some(state),
        },
        (_, None) => HeraldResult::failed(),
    }
}

fn complement(len: usize, picked: &[usize]) -> Vec<usize> {
    (0..len).filter(|i| !picked.contains(i)).collect()
}

pub(crate) fn validate_occupation(occ: &[u8], modes: usize, cutoff: u8) -> Result<()> {
    if occ.len() != modes {
        return Err(Error::BadOccupation {
            tuple: occ.to_vec(),
            reason: format!("expected {modes} entries"),
        });
    }
    if let Some(n) = occ.iter().find(|&&n| n > cutoff) {
        return Err(Error::BadOccupation {
            tuple: occ.to_vec(),
            reason: format!("occupation {n} exceeds cutoff {cutoff}"),
        });
    }
    Ok(())
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.mode_names().join(",");
        for (i, (occ, amp)) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let digits: String = occ.iter().map(|n| n.to_string()).collect();
            write!(f, "({:.6}{:+.6}i)|{}⟩", amp.re, amp.im, digits)?;
        }
        write!(f, "_{{{names}}}")
    }
}
