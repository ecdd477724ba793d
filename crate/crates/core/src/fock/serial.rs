//! Text and JSON forms of [`FockVector`].
//!
//! Both forms list the mode names in register order followed by one record
//! per stored component: the occupation tuple and the real and imaginary
//! parts of its amplitude. Floats are written in shortest round-trip form,
//! so reading a written state gives back the identical bits.
//!
//! Text form:
//!
//! ```text
//! cutoff 2
//! mode u1 mechanical Alice
//! mode u2 mechanical Bob
//! 1 0 0.7071067811865476 0.0
//! 0 1 0.7071067811865475 0.0
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mode::{ModeKind, ModeLabel, Owner};
use super::state::{validate_occupation, AmplitudeMap, FockVector, NORM_TOLERANCE};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ModeRecord {
    name: String,
    kind: ModeKind,
    owner: Owner,
}

#[derive(Serialize, Deserialize)]
struct Component {
    occupation: Vec<u8>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    cutoff: u8,
    modes: Vec<ModeRecord>,
    amplitudes: Vec<Component>,
}

impl From<&FockVector> for StateRecord {
    fn from(state: &FockVector) -> Self {
        StateRecord {
            cutoff: state.cutoff(),
            modes: state
                .modes()
                .iter()
                .map(|m| ModeRecord {
                    name: m.name().to_string(),
                    kind: m.kind(),
                    owner: m.owner(),
                })
                .collect(),
            amplitudes: state
                .iter()
                .map(|(occ, a)| Component {
                    occupation: occ.clone(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

fn assemble(
    modes: Vec<ModeLabel>,
    cutoff: u8,
    components: impl IntoIterator<Item = (Vec<u8>, Complex64, usize)>,
) -> Result<FockVector> {
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].iter().any(|n| n.name() == m.name()) {
            return Err(Error::DuplicateMode(m.name().to_string()));
        }
    }
    let mut map = AmplitudeMap::new();
    for (occ, amp, line) in components {
        validate_occupation(&occ, modes.len(), cutoff).map_err(|e| Error::Parse {
            line,
            reason: e.to_string(),
        })?;
        if map.insert(occ, amp).is_some() {
            return Err(Error::Parse {
                line,
                reason: "repeated occupation tuple".into(),
            });
        }
    }
    let norm: f64 = map.values().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Parse {
            line: 0,
            reason: format!("state is not normalized (norm^2 = {norm})"),
        });
    }
    Ok(FockVector::from_checked_parts(modes, cutoff, map))
}

impl TryFrom<StateRecord> for FockVector {
    type Error = Error;

    fn try_from(rec: StateRecord) -> Result<Self> {
        let modes = rec
            .modes
            .into_iter()
            .map(|m| ModeLabel::new(&m.name, m.kind, m.owner))
            .collect();
        assemble(
            modes,
            rec.cutoff,
            rec.amplitudes
                .into_iter()
                .enumerate()
                .map(|(i, c)| (c.occupation, Complex64::new(c.re, c.im), i + 1)),
        )
    }
}

impl Serialize for FockVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = StateRecord::deserialize(d)?;
        FockVector::try_from(rec).map_err(serde::de::Error::custom)
    }
}

impl FockVector {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<FockVector> {
        let rec: StateRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            reason: e.to_string(),
        })?;
        FockVector::try_from(rec)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("cutoff {}\n", self.cutoff());
        for m in self.modes() {
            out.push_str(&format!(
                "mode {} {} {}\n",
                m.name(),
                m.kind().as_str(),
                m.owner().as_str()
            ));
        }
        for (occ, a) in self.iter() {
            for n in occ {
                out.push_str(&format!("{n} "));
            }
            out.push_str(&format!("{:?} {:?}\n", a.re, a.im));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<FockVector> {
        let mut cutoff = None;
        let mut modes = Vec::new();
        let mut components = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: &str| Error::Parse {
                line,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = raw.split_whitespace().collect();
            match fields.first() {
                None => continue,
                Some(&"cutoff") => {
                    let v = fields
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err("expected `cutoff N`"))?;
                    cutoff = Some(v);
                }
                Some(&"mode") => {
                    if !components.is_empty() {
                        return Err(err("mode declared after amplitudes"));
                    }
                    let [_, name, kind, owner] = fields[..] else {
                        return Err(err("expected `mode NAME KIND OWNER`"));
                    };
                    let kind = match kind {
                        "optical" => ModeKind::Optical,
                        "mechanical" => ModeKind::Mechanical,
                        _ => return Err(err("unknown mode kind")),
                    };
                    let owner = Owner::parse(owner).ok_or_else(|| err("unknown owner"))?;
                    modes.push(ModeLabel::new(name, kind, owner));
                }
                Some(_) => {
                    if fields.len() != modes.len() + 2 {
                        return Err(err("wrong number of fields in amplitude line"));
                    }
                    let (occ, amp) = fields.split_at(modes.len());
                    let occ = occ
                        .iter()
                        .map(|s| s.parse::<u8>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| err("bad occupation number"))?;
                    let re: f64 = amp[0].parse().map_err(|_| err("bad real part"))?;
                    let im: f64 = amp[1].parse().map_err(|_| err("bad imaginary part"))?;
                    components.push((occ, Complex64::new(re, im), line));
                }
            }
        }
        let cutoff = cutoff.ok_or(Error::Parse {
            line: 0,
            reason: "missing cutoff line".into(),
        })?;
        assemble(modes, cutoff, components)
    }
}
