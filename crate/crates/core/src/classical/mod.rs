//! Classical information theory over finite joint distributions.
//!
//! Everything here is exact brute-force enumeration over a dense table, so
//! tables are capped at [`MAX_CELLS`] configurations.

mod equilibration;
mod gibbs;
mod measurement;
pub(crate) mod table;

pub use equilibration::{
    equilibration_demo, EquilibrationParams, EquilibrationPoint, ParityShift, PermutationRule,
    ReversibleRule,
};
pub use gibbs::{gibbs_table, thermo_average, GibbsResult, GibbsSpec};
pub use measurement::{measurement_demo, MeasurementDiagrams, DEVICE_LABEL};
pub use table::{ProbTable, Variable, MAX_CELLS, NORMALIZATION_SLACK};
