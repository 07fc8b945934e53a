//! Reversible lattice-gas equilibration.
//!
//! `n` labeled particles each occupy one of `V` cells. They start
//! independently and uniformly spread over the first `v` cells and are
//! then moved by a bijection on joint configurations. The joint entropy is
//! invariant under any bijection; the per-particle entropies grow and the
//! difference shows up as correlation entropy.

use super::table::{ProbTable, Variable};
use crate::error::{Error, Result};
use crate::LogBase;

pub const MAX_PARTICLES: usize = 4;
pub const MAX_CELLS_PER_PARTICLE: usize = 16;

/// A deterministic update of the joint configuration.
///
/// Implementations must be bijective on `cells^particles` configurations;
/// [`equilibration_demo`] checks this before running.
pub trait ReversibleRule {
    /// Image of the flat configuration `index` (particle 0 most significant).
    fn apply(&self, index: usize, particles: usize, cells: usize) -> usize;
}

/// Parity-conditioned cyclic shift.
///
/// Particles are updated in order; particle `i` advances by one cell, or by
/// two when its right neighbour `(i + 1) mod n` sits on an odd cell. Each
/// sub-update is a shift of one coordinate with the others fixed, so the
/// whole sweep is invertible. A single particle simply advances one cell.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParityShift;

impl ReversibleRule for ParityShift {
    fn apply(&self, index: usize, particles: usize, cells: usize) -> usize {
        let mut x = decode(index, particles, cells);
        if particles == 1 {
            x[0] = (x[0] + 1) % cells;
        } else {
            for i in 0..particles {
                let partner = x[(i + 1) % particles];
                x[i] = (x[i] + 1 + partner % 2) % cells;
            }
        }
        encode(&x, cells)
    }
}

/// Explicit permutation of the flat configuration space.
#[derive(Debug, Clone)]
pub struct PermutationRule {
    image: Vec<usize>,
}

impl PermutationRule {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        check_bijective(&image)?;
        Ok(PermutationRule { image })
    }
}

impl ReversibleRule for PermutationRule {
    fn apply(&self, index: usize, _particles: usize, _cells: usize) -> usize {
        self.image[index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquilibrationParams {
    pub particles: usize,
    /// Cells occupied before expansion (`v`).
    pub initial_cells: usize,
    /// Total cells after expansion (`V`).
    pub total_cells: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibrationPoint {
    pub step: usize,
    /// `Σ_i H(A_i)`, the extensive (standard) entropy.
    pub marginal_sum: f64,
    pub joint: f64,
    pub correlation: f64,
}

/// Runs `params.steps` updates of `rule` and reports the entropy budget at
/// every step, including step 0.
pub fn equilibration_demo(
    params: EquilibrationParams,
    rule: &dyn ReversibleRule,
    base: LogBase,
) -> Result<Vec<EquilibrationPoint>> {
    let EquilibrationParams {
        particles: n,
        initial_cells: v,
        total_cells: cap,
        steps,
    } = params;
    if n == 0 || n > MAX_PARTICLES {
        return Err(Error::usage(format!(
            "particle count must be in 1..={MAX_PARTICLES}, got {n}"
        )));
    }
    if cap == 0 || cap > MAX_CELLS_PER_PARTICLE {
        return Err(Error::usage(format!(
            "cell count must be in 1..={MAX_CELLS_PER_PARTICLE}, got {cap}"
        )));
    }
    if v == 0 || v > cap {
        return Err(Error::usage(format!(
            "initial cells {v} must be in 1..={cap}"
        )));
    }
    let configs = cap.pow(n as u32);
    let image: Vec<usize> = (0..configs).map(|c| rule.apply(c, n, cap)).collect();
    check_bijective(&image)?;

    let variables: Vec<Variable> = (0..n)
        .map(|i| Variable::new(format!("A{}", i + 1), cap))
        .collect();
    let mut one = vec![0.0; cap];
    one[..v].iter_mut().for_each(|p| *p = 1.0 / v as f64);
    let mut weights = vec![1.0];
    for _ in 0..n {
        weights = weights
            .iter()
            .flat_map(|w| one.iter().map(move |q| w * q))
            .collect();
    }

    let mut out = Vec::with_capacity(steps + 1);
    let mut table = ProbTable::new(variables.clone(), weights)?;
    for step in 0..=steps {
        let joint = table.joint_entropy(base);
        let marginal_sum = table
            .labels()
            .map(|l| table.entropy(&[l], base))
            .sum::<Result<f64>>()?;
        out.push(EquilibrationPoint {
            step,
            marginal_sum,
            joint,
            correlation: marginal_sum - joint,
        });
        if step < steps {
            let mut next = vec![0.0; configs];
            for (c, &p) in table.weights().iter().enumerate() {
                next[image[c]] = p;
            }
            table = ProbTable::new(variables.clone(), next)?;
        }
    }
    Ok(out)
}

fn check_bijective(image: &[usize]) -> Result<()> {
    let mut seen = vec![false; image.len()];
    for &i in image {
        if i >= image.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::invalid(
                "dynamics is not a bijection on joint configurations",
            ));
        }
    }
    Ok(())
}

fn decode(mut index: usize, particles: usize, cells: usize) -> Vec<usize> {
    let mut x = vec![0; particles];
    for xi in x.iter_mut().rev() {
        *xi = index % cells;
        index /= cells;
    }
    x
}

fn encode(x: &[usize], cells: usize) -> usize {
    x.iter().fold(0, |acc, &xi| acc * cells + xi)
}
