use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source of the per-l phase shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Coulomb phases from ln Γ, spatial shifts from the digamma function.
    CoulombExact,
    /// Leading Stirling forms for both the phases and the shifts.
    CoulombAsymptotic,
    /// Tabulated phases of a finite-range potential.
    ShortRange,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::CoulombExact => "coulomb-exact",
            ModelKind::CoulombAsymptotic => "coulomb-asym",
            ModelKind::ShortRange => "square-well",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "coulomb-exact" => Ok(ModelKind::CoulombExact),
            "coulomb-asym" | "coulomb-asymptotic" => Ok(ModelKind::CoulombAsymptotic),
            "square-well" | "short-range" => Ok(ModelKind::ShortRange),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

/// Per-l phase shifts `δ_l` and their momentum derivatives `dδ_l/dk` for a
/// short-range potential at one momentum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortRangeTable {
    delta: Vec<f64>,
    ddelta_dk: Vec<f64>,
}

impl ShortRangeTable {
    pub fn new(delta: Vec<f64>, ddelta_dk: Vec<f64>) -> Result<Self> {
        if delta.is_empty() || delta.len() != ddelta_dk.len() {
            return Err(Error::InvalidParameter {
                name: "short-range table length",
                value: delta.len() as f64,
                reason: "phase and derivative arrays must be non-empty and of equal length",
            });
        }
        if let Some(bad) = delta.iter().chain(&ddelta_dk).find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "short-range table entry",
                value: *bad,
                reason: "must be finite",
            });
        }
        Ok(Self { delta, ddelta_dk })
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn ddelta_dk(&self) -> &[f64] {
        &self.ddelta_dk
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PhaseShiftModel {
    CoulombExact,
    CoulombAsymptotic,
    ShortRange(ShortRangeTable),
}

impl PhaseShiftModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            PhaseShiftModel::CoulombExact => ModelKind::CoulombExact,
            PhaseShiftModel::CoulombAsymptotic => ModelKind::CoulombAsymptotic,
            PhaseShiftModel::ShortRange(_) => ModelKind::ShortRange,
        }
    }
}
