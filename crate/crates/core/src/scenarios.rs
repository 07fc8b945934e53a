//! Measurement of an EPR pair by two ancilla devices.
//!
//! A measurement is modeled as a unitary premeasurement without collapse:
//! the device starts in `|0⟩` and a controlled shift copies the target's
//! component in the chosen basis, `|b_k⟩|j⟩ → |b_k⟩|j + k mod d⟩`. The
//! closed system therefore stays pure and its joint entropy stays zero.

use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::{embed_operator, CMatrix, PureState, SubsystemLayout, UNITARY_TOL};
use crate::quantum_entropy::{marginal_entropy, mutual_entropy_q, venn_quantum, Cut};
use crate::{EntropyDiagram, LogBase};

pub const QUBIT_1: &str = "Q1";
pub const QUBIT_2: &str = "Q2";
pub const DEVICE_1: &str = "A1";
pub const DEVICE_2: &str = "A2";

/// Measurement basis; the columns of the unitary are the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    Z,
    X,
    Custom(CMatrix),
}

impl Basis {
    pub fn vectors(&self, dim: usize) -> Result<CMatrix> {
        let u = match self {
            Basis::Z => CMatrix::identity(dim),
            Basis::X if dim == 2 => CMatrix::from_real(&[
                &[FRAC_1_SQRT_2, FRAC_1_SQRT_2],
                &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
            ]),
            Basis::X => return Err(Error::usage("the x basis is defined for qubits only")),
            Basis::Custom(u) => u.clone(),
        };
        if u.dim() != dim {
            return Err(Error::usage(format!(
                "basis has dimension {}, target has {dim}",
                u.dim()
            )));
        }
        let defect = u.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::invalid(format!(
                "measurement basis is not orthonormal ({defect:e})"
            )));
        }
        Ok(u)
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" => Ok(Basis::Z),
            "x" => Ok(Basis::X),
            other => Err(Error::usage(format!(
                "basis must be `z` or `x`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSpec {
    pub target: String,
    pub basis: Basis,
    pub ancilla: String,
}

impl MeasurementSpec {
    pub fn new(target: &str, basis: Basis, ancilla: &str) -> Self {
        MeasurementSpec {
            target: target.to_string(),
            basis,
            ancilla: ancilla.to_string(),
        }
    }
}

/// `(|↑↑⟩ − |↓↓⟩)/√2` on `Q1 ⊗ Q2`.
pub fn epr_state() -> PureState {
    let c = |x: f64| Complex64::new(x, 0.0);
    PureState::new(
        SubsystemLayout::qubits(&[QUBIT_1, QUBIT_2]).expect("static layout"),
        vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(-FRAC_1_SQRT_2)],
    )
    .expect("unit norm")
}

/// Appends a device in `|0⟩` and entangles it with `spec.target` by a
/// controlled copy in `spec.basis`.
pub fn attach_ancilla(psi: &PureState, spec: &MeasurementSpec) -> Result<PureState> {
    let target = psi.layout().position(&spec.target)?;
    let dim = psi.layout().factors()[target].dim;
    let basis = spec.basis.vectors(dim)?;
    let device = PureState::basis(SubsystemLayout::of(&[(spec.ancilla.as_str(), dim)])?, 0)?;
    let enlarged = psi.tensor(&device)?;

    // Σ_k |b_k⟩⟨b_k| ⊗ Σ_j |j + k⟩⟨j| on (target, ancilla).
    let mut copy = CMatrix::zeros(dim * dim);
    for k in 0..dim {
        let proj = CMatrix::outer(&basis.column(k));
        let shift = CMatrix::from_fn(dim, |row, col| {
            if row == (col + k) % dim {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        copy = &copy + &proj.kron(&shift);
    }
    let ancilla = enlarged.layout().factors().len() - 1;
    let full = embed_operator(&copy, &[target, ancilla], enlarged.layout())?;
    enlarged.evolve(&full)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EprExperiment {
    /// Over `(Q1Q2, A1, A2)`.
    pub full_diagram: EntropyDiagram,
    /// Over `(A1, A2)` after tracing out both spins.
    pub device_diagram: EntropyDiagram,
    /// `S(Q1Q2 : A1A2)`.
    pub system_device_mutual: f64,
    /// Closed four-party state on `Q1, Q2, A1, A2`.
    pub state: PureState,
}

impl EprExperiment {
    /// Entropy of every non-empty subset of the four parties, for inspecting
    /// the ungrouped four-party structure.
    pub fn subset_entropies(&self, base: LogBase) -> Result<Vec<(String, f64)>> {
        let rho = self.state.density();
        let labels: Vec<&str> = rho.layout().labels().collect();
        (1u32..1 << labels.len())
            .map(|mask| {
                let subset: Vec<&str> = labels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, l)| *l)
                    .collect();
                Ok((subset.concat(), marginal_entropy(&rho, &subset, base)?))
            })
            .collect()
    }
}

/// Measures `Q1` in `basis_1` with device `A1` and `Q2` in `basis_2` with `A2`.
pub fn epr_experiment(basis_1: Basis, basis_2: Basis, base: LogBase) -> Result<EprExperiment> {
    let psi = attach_ancilla(
        &epr_state(),
        &MeasurementSpec::new(QUBIT_1, basis_1, DEVICE_1),
    )?;
    let psi = attach_ancilla(&psi, &MeasurementSpec::new(QUBIT_2, basis_2, DEVICE_2))?;
    let rho = psi.density();
    let full_diagram = venn_quantum(&rho, &[&[QUBIT_1, QUBIT_2], &[DEVICE_1], &[DEVICE_2]], base)?;
    let device_diagram = venn_quantum(&rho, &[&[DEVICE_1], &[DEVICE_2]], base)?;
    let system_device_mutual = mutual_entropy_q(
        &rho,
        &Cut::new(&[QUBIT_1, QUBIT_2], &[DEVICE_1, DEVICE_2]),
        base,
    )?;
    Ok(EprExperiment {
        full_diagram,
        device_diagram,
        system_device_mutual,
        state: psi,
    })
}
