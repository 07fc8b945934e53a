//! Density-matrix algebra.

mod eig;
mod functions;
mod gibbs;
mod layout;
mod matrix;
pub mod sampling;
mod state;

pub use eig::{hermitian_eig, SpectralDecomp, HERMITIAN_TOL, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use functions::{matrix_exp, matrix_log_on_support, PSD_TOL, SUPPORT_EPS};
pub use gibbs::{gibbs_state, GibbsState};
pub use layout::{Factor, SubsystemLayout};
pub use matrix::CMatrix;
pub use state::{
    DensityMatrix, PureState, SchmidtDecomposition, SchmidtTerm, STATE_TOL, UNITARY_TOL,
};

pub(crate) use functions::log_on_support;
pub(crate) use state::embed_operator;
