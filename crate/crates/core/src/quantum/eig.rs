//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies
//! a real plane rotation that annihilates it. Sweeps run over all pairs
//! `p < q` until the off-diagonal Frobenius mass drops below
//! [`OFF_DIAGONAL_TOL`] (relative to the matrix norm when that exceeds 1).

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Entrywise Hermiticity tolerance, scaled by `max(1, max |a_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Components smaller than this are skipped when fixing eigenvector phases.
const PHASE_TOL: f64 = 1e-12;

/// Eigenvalues in descending order with orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        let n = self.dim();
        let mut out = CMatrix::zeros(n);
        for (k, &w) in fl.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| l)
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; each eigenvector is scaled so that
/// its first non-negligible component is real and positive.
pub fn hermitian_eig(m: &CMatrix) -> Result<SpectralDecomp> {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::invalid(format!(
            "matrix is not Hermitian (deviation {defect:e})"
        )));
    }
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let tol = OFF_DIAGONAL_TOL * a.frobenius().max(1.0);

    let mut converged = off_diagonal_norm(&a) < tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&a),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) < tol;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = CMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let phase = (0..n)
            .map(|i| v[(i, k)])
            .find(|z| z.norm() > PHASE_TOL)
            .map_or(Complex64::new(1.0, 0.0), |z| z.conj() / z.norm());
        for i in 0..n {
            eigenvectors[(i, col)] = v[(i, k)] * phase;
        }
    }
    Ok(SpectralDecomp {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `A <- J† A J`, `V <- V J` with `J` chosen so that `A[p,q] = 0`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase e^{-iφ} turns the pivot real; then a real rotation with
    // tan θ = t, t the smaller root of t² + 2τt - 1 = 0.
    let phase = apq.conj() / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase * -s;
    let j_qq = phase * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_invariants(m: &CMatrix, d: &SpectralDecomp) {
        assert!(d.reconstruct().max_abs_diff(m) <= 1e-9);
        assert!(d.eigenvectors.unitarity_defect() <= 1e-9);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn diagonal_input() {
        let m = CMatrix::diag(&[1.0, 3.0]);
        let d = hermitian_eig(&m).unwrap();
        assert_eq!(d.eigenvalues, vec![3.0, 1.0]);
        check_invariants(&m, &d);
    }

    #[test]
    fn pauli_x() {
        let m = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let d = hermitian_eig(&m).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-14);
        check_invariants(&m, &d);
        // Phase convention: first nonzero component real positive.
        for k in 0..2 {
            let v = d.eigenvector(k);
            assert!(v[0].re > 0.0 && v[0].im.abs() < 1e-15);
        }
    }

    #[test]
    fn identity_multiplicity() {
        let d = hermitian_eig(&CMatrix::identity(5)).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0; 5]);
    }

    #[test]
    fn complex_hermitian() {
        // Pauli Y has eigenvalues ±1.
        let y = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        });
        let d = hermitian_eig(&y).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-14);
        check_invariants(&y, &d);

        let m = CMatrix::from_fn(4, |i, j| {
            let (lo, hi) = (i.min(j) as f64, i.max(j) as f64);
            let im = if i < j {
                0.3 * hi - lo
            } else if i > j {
                -(0.3 * hi - lo)
            } else {
                0.0
            };
            c(1.0 / (1.0 + lo + hi), im)
        });
        let d = hermitian_eig(&m).unwrap();
        check_invariants(&m, &d);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&m), Err(Error::Validation(_))));
    }
}
