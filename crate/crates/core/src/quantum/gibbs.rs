use super::eig::hermitian_eig;
use super::layout::SubsystemLayout;
use super::matrix::CMatrix;
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Thermal state `e^{-βH} / Z` with its thermodynamic potentials (k = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsState {
    pub state: DensityMatrix,
    pub log_partition: f64,
    /// `-ln Z / β`; `None` at `β = 0`.
    pub free_energy: Option<f64>,
    /// `U = Tr ρH`.
    pub internal_energy: f64,
}

pub fn gibbs_state(
    layout: SubsystemLayout,
    hamiltonian: &CMatrix,
    beta: f64,
) -> Result<GibbsState> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::invalid(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    if layout.dim() != hamiltonian.dim() {
        return Err(Error::usage(
            "Hamiltonian dimension does not match the layout",
        ));
    }
    let d = hermitian_eig(hamiltonian)?;
    // Shift by the ground energy so large beta stays finite.
    let ground = *d.eigenvalues.last().expect("non-empty spectrum");
    let weights: Vec<f64> = d
        .eigenvalues
        .iter()
        .map(|e| (-beta * (e - ground)).exp())
        .collect();
    let shifted_z: f64 = weights.iter().sum();
    let log_partition = shifted_z.ln() - beta * ground;
    let p: Vec<f64> = weights.iter().map(|w| w / shifted_z).collect();
    let internal_energy = p.iter().zip(&d.eigenvalues).map(|(p, e)| p * e).sum();
    let rho = d.map(|e| (-beta * (e - ground)).exp() / shifted_z);
    Ok(GibbsState {
        state: DensityMatrix::trusted(layout, rho.hermitian_part()),
        log_partition,
        free_energy: (beta > 0.0).then(|| -log_partition / beta),
        internal_energy,
    })
}
