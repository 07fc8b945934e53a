use serde::{Deserialize, Serialize};

use super::table::{ProbTable, Variable};
use crate::error::{Error, Result};
use crate::LogBase;

/// Energy levels at inverse temperature `beta` (k = 1), with an optional
/// observable taking value `observable[i]` in level `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsSpec {
    pub levels: Vec<f64>,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GibbsResult {
    /// Single variable `E` over the levels.
    pub table: ProbTable,
    pub partition: f64,
    /// `ln Z`; stays finite where `Z` itself under- or overflows.
    pub log_partition: f64,
    /// `-ln Z / beta` in energy units; `None` at `beta = 0`.
    pub free_energy: Option<f64>,
    pub mean_energy: f64,
    /// `beta (<E> - F)`, expressed in the requested base.
    pub entropy: f64,
}

impl GibbsSpec {
    pub fn new(levels: Vec<f64>, beta: f64) -> Self {
        GibbsSpec {
            levels,
            beta,
            observable: None,
        }
    }

    pub fn with_observable(mut self, values: Vec<f64>) -> Self {
        self.observable = Some(values);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::invalid("Gibbs spec needs at least one level"));
        }
        if self.levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("energy levels must be finite"));
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::invalid(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if let Some(a) = &self.observable {
            if a.len() != self.levels.len() {
                return Err(Error::invalid(format!(
                    "observable has {} values for {} levels",
                    a.len(),
                    self.levels.len()
                )));
            }
        }
        Ok(())
    }

    /// Normalized Boltzmann weights and `ln Z`, shifted by the ground energy
    /// so that large `beta` does not underflow.
    fn weights(&self) -> (Vec<f64>, f64) {
        let ground = self.levels.iter().copied().fold(f64::INFINITY, f64::min);
        let raw: Vec<f64> = self
            .levels
            .iter()
            .map(|e| (-self.beta * (e - ground)).exp())
            .collect();
        let shifted_z: f64 = raw.iter().sum();
        let log_z = shifted_z.ln() - self.beta * ground;
        (raw.into_iter().map(|w| w / shifted_z).collect(), log_z)
    }
}

/// Gibbs distribution with partition function, free energy and entropy.
pub fn gibbs_table(spec: &GibbsSpec, base: LogBase) -> Result<GibbsResult> {
    spec.validate()?;
    let (p, log_z) = spec.weights();
    let mean_energy: f64 = p.iter().zip(&spec.levels).map(|(p, e)| p * e).sum();
    let (free_energy, entropy_nats) = if spec.beta > 0.0 {
        let f = -log_z / spec.beta;
        (Some(f), spec.beta * (mean_energy - f))
    } else {
        (None, log_z)
    };
    let table = ProbTable::new(vec![Variable::new("E", p.len())], p)?;
    Ok(GibbsResult {
        table,
        partition: log_z.exp(),
        log_partition: log_z,
        free_energy,
        mean_energy,
        entropy: base.from_nats(entropy_nats),
    })
}

/// Thermal average `Z^-1 Σ A_i e^{-beta E_i}`.
pub fn thermo_average(spec: &GibbsSpec) -> Result<f64> {
    spec.validate()?;
    let a = spec
        .observable
        .as_ref()
        .ok_or_else(|| Error::usage("thermal average needs observable values"))?;
    let (p, _) = spec.weights();
    Ok(p.iter().zip(a).map(|(p, a)| p * a).sum())
}
