use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Optical,
    Mechanical,
}

impl ModeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeKind::Optical => "optical",
            ModeKind::Mechanical => "mechanical",
        }
    }
}

/// The party holding a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Owner {
    Alice,
    Bob,
    Charlie,
    #[serde(rename = "None")]
    Unowned,
}

impl Owner {
    pub fn as_str(self) -> &'static str {
        match self {
            Owner::Alice => "Alice",
            Owner::Bob => "Bob",
            Owner::Charlie => "Charlie",
            Owner::Unowned => "None",
        }
    }

    pub fn parse(s: &str) -> Option<Owner> {
        match s {
            "Alice" => Some(Owner::Alice),
            "Bob" => Some(Owner::Bob),
            "Charlie" => Some(Owner::Charlie),
            "None" => Some(Owner::Unowned),
            _ => None,
        }
    }
}

/// A named bosonic mode. Cloning is cheap; the name is shared.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeLabel {
    name: Arc<str>,
    kind: ModeKind,
    owner: Owner,
}

impl ModeLabel {
    pub fn new(name: &str, kind: ModeKind, owner: Owner) -> Self {
        ModeLabel {
            name: Arc::from(name),
            kind,
            owner,
        }
    }

    pub fn optical(name: &str, owner: Owner) -> Self {
        Self::new(name, ModeKind::Optical, owner)
    }

    pub fn mechanical(name: &str, owner: Owner) -> Self {
        Self::new(name, ModeKind::Mechanical, owner)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn owner(&self) -> Owner {
        self.owner
    }

    pub fn is_optical(&self) -> bool {
        self.kind == ModeKind::Optical
    }

    pub fn is_mechanical(&self) -> bool {
        self.kind == ModeKind::Mechanical
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An ordered set of uniquely named modes. Insertion order is the order of
/// occupation tuples everywhere.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeRegistry {
    modes: Vec<ModeLabel>,
}

impl ModeRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels(labels: impl IntoIterator<Item = ModeLabel>) -> Result<Self> {
        let mut registry = Self::new();
        for label in labels {
            registry.register(label)?;
        }
        Ok(registry)
    }

    pub fn register(&mut self, label: ModeLabel) -> Result<usize> {
        if self.position(label.name()).is_some() {
            return Err(Error::DuplicateMode(label.name().to_string()));
        }
        self.modes.push(label);
        Ok(self.modes.len() - 1)
    }

    pub fn with(mut self, label: ModeLabel) -> Result<Self> {
        self.register(label)?;
        Ok(self)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.modes.iter().position(|m| m.name() == name)
    }

    pub fn get(&self, name: &str) -> Option<&ModeLabel> {
        self.modes.iter().find(|m| m.name() == name)
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn into_labels(self) -> Vec<ModeLabel> {
        self.modes
    }
}
