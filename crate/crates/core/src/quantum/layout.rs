//! Labeled tensor-factor structure of a Hilbert space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

impl Factor {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Factor {
            label: label.into(),
            dim,
        }
    }
}

/// Ordered tensor factors; the first factor is the most significant digit
/// of a flat basis index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Factor>", into = "Vec<Factor>")]
pub struct SubsystemLayout {
    factors: Vec<Factor>,
}

impl TryFrom<Vec<Factor>> for SubsystemLayout {
    type Error = Error;

    fn try_from(factors: Vec<Factor>) -> Result<Self> {
        SubsystemLayout::new(factors)
    }
}

impl From<SubsystemLayout> for Vec<Factor> {
    fn from(l: SubsystemLayout) -> Self {
        l.factors
    }
}

impl SubsystemLayout {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("layout needs at least one factor"));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(Error::invalid(format!(
                    "factor `{}` has dimension 0",
                    f.label
                )));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(Error::invalid(format!(
                    "duplicate factor label `{}`",
                    f.label
                )));
            }
        }
        Ok(SubsystemLayout { factors })
    }

    /// Convenience constructor from `(label, dim)` pairs.
    pub fn of(factors: &[(&str, usize)]) -> Result<Self> {
        SubsystemLayout::new(factors.iter().map(|&(l, d)| Factor::new(l, d)).collect())
    }

    /// `n` qubits labeled by `labels`.
    pub fn qubits(labels: &[&str]) -> Result<Self> {
        SubsystemLayout::new(labels.iter().map(|l| Factor::new(*l, 2)).collect())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.label.as_str())
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|f| f.label == label)
    }

    /// Layout of `self ⊗ other`.
    pub fn concat(&self, other: &SubsystemLayout) -> Result<Self> {
        if let Some(l) = other.labels().find(|l| self.contains(l)) {
            return Err(Error::usage(format!("label `{l}` appears in both factors")));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(SubsystemLayout { factors })
    }

    /// Positions of `labels`, sorted into layout order. Rejects unknown,
    /// repeated or empty label lists.
    pub fn select(&self, labels: &[&str]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(Error::usage("label list must not be empty"));
        }
        let mut pos = labels
            .iter()
            .map(|l| self.position(l))
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        if pos.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::usage("label listed twice"));
        }
        Ok(pos)
    }

    /// Layout made of the factors at `positions` (in the given order).
    pub fn sublayout(&self, positions: &[usize]) -> SubsystemLayout {
        SubsystemLayout {
            factors: positions.iter().map(|&p| self.factors[p].clone()).collect(),
        }
    }

    /// Per-factor digits of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut d = vec![0; self.factors.len()];
        for (x, f) in d.iter_mut().zip(&self.factors).rev() {
            *x = index % f.dim;
            index /= f.dim;
        }
        d
    }

    /// For every flat index, its index within the factors at `positions`
    /// and within the remaining factors (both in layout order).
    pub(crate) fn split_indices(&self, positions: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let n = self.dim();
        let mut kept = Vec::with_capacity(n);
        let mut rest = Vec::with_capacity(n);
        for i in 0..n {
            let d = self.digits(i);
            let (mut k, mut r) = (0, 0);
            for (p, f) in self.factors.iter().enumerate() {
                if positions.contains(&p) {
                    k = k * f.dim + d[p];
                } else {
                    r = r * f.dim + d[p];
                }
            }
            kept.push(k);
            rest.push(r);
        }
        (kept, rest)
    }

    /// Positions not in `positions`.
    pub(crate) fn complement(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.factors.len())
            .filter(|p| !positions.contains(p))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SubsystemLayout::of(&[("A", 2), ("A", 3)]).is_err());
        assert!(SubsystemLayout::of(&[("A", 0)]).is_err());
        assert!(SubsystemLayout::of(&[]).is_err());
        let l = SubsystemLayout::of(&[("A", 2), ("B", 3)]).unwrap();
        assert_eq!(l.dim(), 6);
        assert_eq!(l.position("C"), Err(Error::UnknownLabel("C".into())));
    }

    #[test]
    fn digits_and_splits() {
        let l = SubsystemLayout::of(&[("A", 2), ("B", 3), ("C", 2)]).unwrap();
        assert_eq!(l.digits(0), vec![0, 0, 0]);
        assert_eq!(l.digits(11), vec![1, 2, 1]);
        let (kept, rest) = l.split_indices(&[0, 2]);
        assert_eq!(kept[11], 3);
        assert_eq!(rest[11], 2);
    }

    #[test]
    fn concat_rejects_collision() {
        let a = SubsystemLayout::qubits(&["A"]).unwrap();
        assert!(matches!(a.concat(&a), Err(Error::Usage(_))));
        let b = SubsystemLayout::qubits(&["B"]).unwrap();
        assert_eq!(a.concat(&b).unwrap().dim(), 4);
    }

    #[test]
    fn json_is_a_list() {
        let l = SubsystemLayout::of(&[("A", 2)]).unwrap();
        assert_eq!(
            serde_json::to_string(&l).unwrap(),
            r#"[{"label":"A","dim":2}]"#
        );
    }
}
