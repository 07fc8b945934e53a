//! Random states and unitaries for property checks.
//!
//! Mixed states are drawn as `G G† / Tr(G G†)` with `G` complex Ginibre, which
//! is full rank with probability one. Unitaries come from Gram-Schmidt on a
//! Ginibre matrix.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::layout::SubsystemLayout;
use super::matrix::CMatrix;
use super::state::{DensityMatrix, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_density_matrix<R: Rng + ?Sized>(
    layout: SubsystemLayout,
    rng: &mut R,
) -> DensityMatrix {
    let d = layout.dim();
    let g = CMatrix::from_fn(d, |_, _| gaussian(rng));
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::trusted(layout, w.scale(1.0 / tr).hermitian_part())
}

pub fn random_pure_state<R: Rng + ?Sized>(layout: SubsystemLayout, rng: &mut R) -> PureState {
    let mut v: Vec<Complex64> = (0..layout.dim()).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
    PureState::new(layout, v).expect("normalized by construction")
}

/// Random state diagonal in the computational basis.
pub fn random_diagonal_state<R: Rng + ?Sized>(
    layout: SubsystemLayout,
    rng: &mut R,
) -> DensityMatrix {
    let mut p: Vec<f64> = (0..layout.dim()).map(|_| rng.random::<f64>()).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    DensityMatrix::trusted(layout, CMatrix::diag(&p))
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        // Two passes of modified Gram-Schmidt keep orthogonality at 1e-15.
        for _ in 0..2 {
            for u in &cols {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(x, a)| *x -= proj * a);
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, |_, _| gaussian(rng)).hermitian_part()
}
