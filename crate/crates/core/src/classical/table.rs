use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{EntropyDiagram, LogBase};

/// Largest number of joint configurations a dense table may hold.
pub const MAX_CELLS: usize = 1 << 20;

/// Weights summing to within this distance of 1 are renormalized; anything
/// further off is rejected.
pub const NORMALIZATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub label: String,
    pub size: usize,
}

impl Variable {
    pub fn new(label: impl Into<String>, size: usize) -> Self {
        Variable {
            label: label.into(),
            size,
        }
    }
}

/// Dense joint distribution over labeled finite-alphabet variables.
///
/// Weights are stored row-major over the variable order: the last variable
/// varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct ProbTable {
    variables: Vec<Variable>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    variables: Vec<Variable>,
    weights: Vec<f64>,
}

impl TryFrom<RawTable> for ProbTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        ProbTable::new(raw.variables, raw.weights)
    }
}

impl From<ProbTable> for RawTable {
    fn from(t: ProbTable) -> Self {
        RawTable {
            variables: t.variables,
            weights: t.weights,
        }
    }
}

impl ProbTable {
    pub fn new(variables: Vec<Variable>, mut weights: Vec<f64>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::invalid("a table needs at least one variable"));
        }
        let mut cells: usize = 1;
        for (i, v) in variables.iter().enumerate() {
            if v.size == 0 {
                return Err(Error::invalid(format!(
                    "variable `{}` has alphabet size 0",
                    v.label
                )));
            }
            if variables[..i].iter().any(|w| w.label == v.label) {
                return Err(Error::invalid(format!(
                    "duplicate variable label `{}`",
                    v.label
                )));
            }
            cells = cells
                .checked_mul(v.size)
                .filter(|&c| c <= MAX_CELLS)
                .ok_or_else(|| Error::invalid(format!("table exceeds {MAX_CELLS} cells")))?;
        }
        if weights.len() != cells {
            return Err(Error::invalid(format!(
                "product of alphabet sizes is {cells} but {} weights were given",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::invalid(format!(
                "weights must be finite and non-negative, found {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_SLACK {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        if total != 1.0 {
            weights.iter_mut().for_each(|w| *w /= total);
        }
        Ok(ProbTable { variables, weights })
    }

    /// Product distribution of independent single-variable marginals.
    pub fn product(factors: &[(&str, &[f64])]) -> Result<Self> {
        let variables = factors
            .iter()
            .map(|(l, p)| Variable::new(*l, p.len()))
            .collect();
        let mut weights = vec![1.0];
        for (_, p) in factors {
            weights = weights
                .iter()
                .flat_map(|w| p.iter().map(move |q| w * q))
                .collect();
        }
        ProbTable::new(variables, weights)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.variables.iter().map(|v| v.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Per-variable coordinates of a flat configuration index.
    pub fn coordinates(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.variables.len()];
        for (c, v) in coords.iter_mut().zip(&self.variables).rev() {
            *c = index % v.size;
            index /= v.size;
        }
        coords
    }

    fn resolve(&self, labels: &[&str]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(Error::usage("label subset must not be empty"));
        }
        let idx = labels
            .iter()
            .map(|l| self.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        for (i, a) in idx.iter().enumerate() {
            if idx[..i].contains(a) {
                return Err(Error::usage(format!("label `{}` listed twice", labels[i])));
            }
        }
        Ok(idx)
    }

    /// Marginal distribution over `labels`, in the order given.
    pub fn marginal(&self, labels: &[&str]) -> Result<ProbTable> {
        let idx = self.resolve(labels)?;
        let variables: Vec<Variable> = idx.iter().map(|&i| self.variables[i].clone()).collect();
        let size: usize = variables.iter().map(|v| v.size).product();
        let mut weights = vec![0.0; size];
        for (flat, &w) in self.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let coords = self.coordinates(flat);
            let target = idx
                .iter()
                .fold(0, |acc, &i| acc * self.variables[i].size + coords[i]);
            weights[target] += w;
        }
        Ok(ProbTable { variables, weights })
    }

    /// Shannon entropy of the marginal over `labels`.
    pub fn entropy(&self, labels: &[&str], base: LogBase) -> Result<f64> {
        let m = self.marginal(labels)?;
        Ok(shannon(&m.weights, base))
    }

    /// Entropy of the full joint distribution.
    pub fn joint_entropy(&self, base: LogBase) -> f64 {
        shannon(&self.weights, base)
    }

    /// Average conditional entropy `H(target | given) = -Σ p(t,g) log p(t|g)`.
    pub fn conditional_entropy(
        &self,
        target: &[&str],
        given: &[&str],
        base: LogBase,
    ) -> Result<f64> {
        disjoint(target, given)?;
        let both: Vec<&str> = target.iter().chain(given).copied().collect();
        let joint = self.marginal(&both)?;
        let cond = self.marginal(given)?;
        // In `joint` the given variables are the trailing block, so the
        // conditioning configuration is the flat index modulo their size.
        let given_size = cond.weights.len();
        let h = joint
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, &p)| -p * base.log(p / cond.weights[i % given_size]))
            .sum::<f64>();
        Ok(h.max(0.0))
    }

    /// Shared entropy `H(X:Y) = H(X) - H(X|Y)`.
    pub fn mutual_entropy(&self, x: &[&str], y: &[&str], base: LogBase) -> Result<f64> {
        Ok(self.entropy(x, base)? - self.conditional_entropy(x, y, base)?)
    }

    /// `Σ_i H(A_i) - H(A_1 ... A_n)` over every variable of the table.
    pub fn correlation_entropy(&self, base: LogBase) -> Result<f64> {
        if self.variables.len() < 2 {
            return Err(Error::usage(
                "correlation entropy needs at least two variables",
            ));
        }
        let sum: f64 = self
            .labels()
            .map(|l| self.entropy(&[l], base))
            .sum::<Result<f64>>()?;
        Ok(sum - self.joint_entropy(base))
    }

    /// Venn diagram for two or three disjoint groups of variables.
    pub fn venn(&self, parties: &[&[&str]], base: LogBase) -> Result<EntropyDiagram> {
        check_parties(parties)?;
        for p in parties {
            self.resolve(p)?;
        }
        let labels = parties.iter().map(|p| p.concat()).collect();
        EntropyDiagram::from_subset_entropies(labels, base, |mask| {
            let subset: Vec<&str> = parties
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .flat_map(|(_, p)| p.iter().copied())
                .collect();
            self.entropy(&subset, base)
        })
    }
}

/// Shannon entropy of a weight vector, `0 log 0 = 0`.
pub(crate) fn shannon(weights: &[f64], base: LogBase) -> f64 {
    -weights.iter().map(|&p| base.xlogx(p)).sum::<f64>()
}

fn disjoint(a: &[&str], b: &[&str]) -> Result<()> {
    if let Some(l) = a.iter().find(|l| b.contains(l)) {
        return Err(Error::usage(format!("label `{l}` appears on both sides")));
    }
    Ok(())
}

pub(crate) fn check_parties(parties: &[&[&str]]) -> Result<()> {
    if !(2..=3).contains(&parties.len()) {
        return Err(Error::usage(format!(
            "need 2 or 3 parties, got {}",
            parties.len()
        )));
    }
    for (i, p) in parties.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::usage("parties must not be empty"));
        }
        for q in &parties[..i] {
            disjoint(q, p)?;
        }
    }
    Ok(())
}
