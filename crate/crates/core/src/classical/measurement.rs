use super::table::{ProbTable, Variable};
use crate::error::{Error, Result};
use crate::{EntropyDiagram, LogBase};

/// Label given to the measurement device variable.
pub const DEVICE_LABEL: &str = "M";

/// Entropy diagrams of system and device before and after a measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDiagrams {
    pub before: EntropyDiagram,
    pub after: EntropyDiagram,
}

/// Couples a device `M` to `system` through a deterministic readout.
///
/// `readout[c]` is the pointer value recorded for system configuration `c`
/// (flat row-major index). Before the coupling the device sits in pointer
/// state 0; afterwards the joint is `p(s) δ(m, readout(s))`. The marginal
/// entropy of the system is unchanged and only redistributes between
/// `H(S|M)` and `H(S:M)`.
pub fn measurement_demo(
    system: &ProbTable,
    readout: &[usize],
    base: LogBase,
) -> Result<MeasurementDiagrams> {
    let configs = system.weights().len();
    if readout.len() != configs {
        return Err(Error::usage(format!(
            "readout covers {} of {configs} system configurations",
            readout.len()
        )));
    }
    if system.labels().any(|l| l == DEVICE_LABEL) {
        return Err(Error::usage(format!(
            "system already has a variable `{DEVICE_LABEL}`"
        )));
    }
    let pointer_states = readout.iter().max().map_or(1, |m| m + 1);
    let couple = |pointer: &dyn Fn(usize) -> usize| -> Result<ProbTable> {
        let mut variables = system.variables().to_vec();
        variables.push(Variable::new(DEVICE_LABEL, pointer_states));
        let mut weights = vec![0.0; configs * pointer_states];
        for (c, &p) in system.weights().iter().enumerate() {
            weights[c * pointer_states + pointer(c)] = p;
        }
        ProbTable::new(variables, weights)
    };
    let before = couple(&|_| 0)?;
    let after = couple(&|c| readout[c])?;

    let sys_labels: Vec<&str> = system.labels().collect();
    let parties: [&[&str]; 2] = [&sys_labels, &[DEVICE_LABEL]];
    let before_d = before.venn(&parties, base)?;
    let after_d = after.venn(&parties, base)?;

    let h_before = before_d.marginal(0);
    let h_after = after_d.marginal(0);
    let h_sys = system.joint_entropy(base);
    if (h_before - h_sys).abs() > 1e-12 || (h_after - h_sys).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "system entropy not conserved: {h_sys} -> {h_before} / {h_after}"
        )));
    }
    Ok(MeasurementDiagrams {
        before: before_d,
        after: after_d,
    })
}
