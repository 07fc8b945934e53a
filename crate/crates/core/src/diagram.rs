//! Entropy Venn diagrams.
//!
//! A bipartite diagram has three cells `{X|Y, X:Y, Y|X}`. A tripartite
//! diagram has seven: the three fully conditioned singles `A|BC`, `B|AC`,
//! `C|AB`, the three conditional mutual cells `A:B|C`, `A:C|B`, `B:C|A`,
//! and the ternary center `A:B:C`. All cells follow from the marginal
//! entropies by inclusion-exclusion, so the same construction serves the
//! classical (Shannon) and quantum (von Neumann) cases. Quantum cells may be
//! negative.

use std::collections::HashMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::LogBase;

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyDiagram {
    labels: Vec<String>,
    cells: Vec<f64>,
    log_base: LogBase,
}

impl EntropyDiagram {
    /// Builds a diagram from a function returning the joint entropy of any
    /// non-empty subset of parties. Subsets are passed as bitmasks over the
    /// party order (bit 0 = first party).
    pub fn from_subset_entropies<F>(
        labels: Vec<String>,
        log_base: LogBase,
        mut entropy: F,
    ) -> Result<Self>
    where
        F: FnMut(u8) -> Result<f64>,
    {
        let cells = match labels.len() {
            2 => {
                let a = entropy(0b01)?;
                let b = entropy(0b10)?;
                let ab = entropy(0b11)?;
                vec![ab - b, a + b - ab, ab - a]
            }
            3 => {
                let a = entropy(0b001)?;
                let b = entropy(0b010)?;
                let c = entropy(0b100)?;
                let ab = entropy(0b011)?;
                let ac = entropy(0b101)?;
                let bc = entropy(0b110)?;
                let abc = entropy(0b111)?;
                let center = a + b + c - ab - ac - bc + abc;
                vec![
                    abc - bc,
                    abc - ac,
                    abc - ab,
                    (a + b - ab) - center,
                    (a + c - ac) - center,
                    (b + c - bc) - center,
                    center,
                ]
            }
            n => {
                return Err(Error::usage(format!(
                    "entropy diagrams need 2 or 3 parties, got {n}"
                )))
            }
        };
        Ok(EntropyDiagram {
            labels,
            cells,
            log_base,
        })
    }

    /// Bipartite diagram from explicit cell values `{X|Y, X:Y, Y|X}`.
    pub fn bipartite(labels: [String; 2], cells: [f64; 3], log_base: LogBase) -> Self {
        EntropyDiagram {
            labels: labels.to_vec(),
            cells: cells.to_vec(),
            log_base,
        }
    }

    pub fn arity(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base
    }

    /// Cell values in canonical order (see [`cell_names`](Self::cell_names)).
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    /// Cell names in canonical order, built from the party labels.
    pub fn cell_names(&self) -> Vec<String> {
        cell_names(&self.labels)
    }

    pub fn cell(&self, name: &str) -> Option<f64> {
        self.cell_names()
            .iter()
            .position(|n| n == name)
            .map(|i| self.cells[i])
    }

    /// Sum of all cells, i.e. the joint entropy of every party.
    pub fn joint(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// Reconstructs the marginal entropy of party `i` from its cells.
    pub fn marginal(&self, i: usize) -> f64 {
        let c = &self.cells;
        match (self.arity(), i) {
            (2, 0) => c[0] + c[1],
            (2, 1) => c[1] + c[2],
            (3, 0) => c[0] + c[3] + c[4] + c[6],
            (3, 1) => c[1] + c[3] + c[5] + c[6],
            (3, 2) => c[2] + c[4] + c[5] + c[6],
            _ => panic!("party index {i} out of range for arity {}", self.arity()),
        }
    }

    /// True when every cell of `other` matches this diagram within `tol`.
    pub fn approx_eq(&self, other: &EntropyDiagram, tol: f64) -> bool {
        self.labels == other.labels
            && self.log_base == other.log_base
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

fn cell_names(labels: &[String]) -> Vec<String> {
    match labels {
        [a, b] => vec![format!("{a}|{b}"), format!("{a}:{b}"), format!("{b}|{a}")],
        [a, b, c] => vec![
            format!("{a}|{b}{c}"),
            format!("{b}|{a}{c}"),
            format!("{c}|{a}{b}"),
            format!("{a}:{b}|{c}"),
            format!("{a}:{c}|{b}"),
            format!("{b}:{c}|{a}"),
            format!("{a}:{b}:{c}"),
        ],
        _ => Vec::new(),
    }
}

struct CellMap<'a>(&'a EntropyDiagram);

impl Serialize for CellMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let names = self.0.cell_names();
        let mut map = serializer.serialize_map(Some(names.len()))?;
        for (name, value) in names.iter().zip(&self.0.cells) {
            map.serialize_entry(name, value)?;
        }
        map.end()
    }
}

impl Serialize for EntropyDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("arity", &self.arity())?;
        map.serialize_entry("labels", &self.labels)?;
        map.serialize_entry("cells", &CellMap(self))?;
        map.serialize_entry("log_base", &self.log_base)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for EntropyDiagram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;

        #[derive(Deserialize)]
        struct Raw {
            arity: usize,
            labels: Vec<String>,
            cells: HashMap<String, f64>,
            log_base: LogBase,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.arity != raw.labels.len() || !(2..=3).contains(&raw.arity) {
            return Err(D::Error::custom(format!(
                "arity {} does not match {} labels",
                raw.arity,
                raw.labels.len()
            )));
        }
        let names = cell_names(&raw.labels);
        if raw.cells.len() != names.len() {
            return Err(D::Error::custom(format!(
                "expected {} cells, found {}",
                names.len(),
                raw.cells.len()
            )));
        }
        let cells = names
            .iter()
            .map(|n| {
                raw.cells
                    .get(n)
                    .copied()
                    .ok_or_else(|| D::Error::custom(format!("missing cell `{n}`")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(EntropyDiagram {
            labels: raw.labels,
            cells,
            log_base: raw.log_base,
        })
    }
}
