//! Quantum entropies: von Neumann, conditional, mutual, Venn diagrams, and
//! the conditional amplitude matrix `ρ_{A|B} = exp[log ρ_AB − log(1_A ⊗ ρ_B)]`.
//!
//! All entropies come from spectra. Conditional entropies may be negative;
//! the conditional amplitude matrix may have eigenvalues above one, which
//! only happens for inseparable states.

use num_complex::Complex64;
use serde::Serialize;

use crate::classical::table::shannon;
use crate::error::{Error, Result};
use crate::quantum::{
    embed_operator, hermitian_eig, log_on_support, CMatrix, DensityMatrix, SUPPORT_EPS,
};
use crate::{EntropyDiagram, LogBase};

/// Tolerance on the Hermiticity and non-negativity of `ρ_{A|B}`.
pub const AMPLITUDE_TOL: f64 = 1e-9;
/// Margin above one before the inseparability witness fires.
pub const WITNESS_MARGIN: f64 = 1e-9;

/// A split of (some of) the factors into two disjoint non-empty groups.
/// Factors in neither group are traced out before any computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

impl Cut {
    pub fn new(a: &[&str], b: &[&str]) -> Self {
        Cut {
            a: a.iter().map(|s| s.to_string()).collect(),
            b: b.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// `a` against every other factor of `rho`.
    pub fn against_rest(rho: &DensityMatrix, a: &[&str]) -> Result<Self> {
        rho.layout().select(a)?;
        let b: Vec<&str> = rho.layout().labels().filter(|l| !a.contains(l)).collect();
        if b.is_empty() {
            return Err(Error::usage("cut leaves the second group empty"));
        }
        Ok(Cut::new(a, &b))
    }

    fn a_refs(&self) -> Vec<&str> {
        self.a.iter().map(String::as_str).collect()
    }

    fn b_refs(&self) -> Vec<&str> {
        self.b.iter().map(String::as_str).collect()
    }

    fn union(&self) -> Vec<&str> {
        self.a.iter().chain(&self.b).map(String::as_str).collect()
    }

    fn validate(&self, rho: &DensityMatrix) -> Result<()> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::usage("both sides of a cut must be non-empty"));
        }
        if let Some(l) = self.a.iter().find(|l| self.b.contains(l)) {
            return Err(Error::usage(format!(
                "label `{l}` is on both sides of the cut"
            )));
        }
        rho.layout().select(&self.union()).map(|_| ())
    }

    /// `ρ` restricted to `A ∪ B`.
    fn reduce(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.validate(rho)?;
        rho.partial_trace(&self.union())
    }
}

/// `S(ρ) = −Tr ρ log ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase) -> Result<f64> {
    let ev = rho.eigenvalues()?;
    Ok(shannon(&ev, base).max(0.0))
}

/// Entropy of the marginal state on `labels`.
pub fn marginal_entropy(rho: &DensityMatrix, labels: &[&str], base: LogBase) -> Result<f64> {
    von_neumann_entropy(&rho.partial_trace(labels)?, base)
}

/// `S(A|B) = S(AB) − S(B)`; may be negative.
pub fn conditional_entropy_q(rho: &DensityMatrix, cut: &Cut, base: LogBase) -> Result<f64> {
    let ab = cut.reduce(rho)?;
    Ok(von_neumann_entropy(&ab, base)? - marginal_entropy(&ab, &cut.b_refs(), base)?)
}

/// `S(A:B) = S(A) + S(B) − S(AB)`.
pub fn mutual_entropy_q(rho: &DensityMatrix, cut: &Cut, base: LogBase) -> Result<f64> {
    let ab = cut.reduce(rho)?;
    let sa = marginal_entropy(&ab, &cut.a_refs(), base)?;
    Ok(sa - conditional_entropy_q(&ab, cut, base)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalAmplitudeMatrix {
    pub cut: Cut,
    /// Operator on the factors of `A ∪ B`, in layout order.
    pub entries: CMatrix,
    /// Eigenvalues, descending.
    pub spectrum: Vec<f64>,
}

impl ConditionalAmplitudeMatrix {
    pub fn max_eigenvalue(&self) -> f64 {
        self.spectrum.first().copied().unwrap_or(0.0)
    }
}

/// Builds `ρ_{A|B}`.
///
/// Both logarithms are taken on their supports. The exponential is applied
/// to the difference compressed onto the support of `ρ_AB`; the kernel of
/// `ρ_AB` maps to zero.
pub fn conditional_amplitude_matrix(
    rho: &DensityMatrix,
    cut: &Cut,
) -> Result<ConditionalAmplitudeMatrix> {
    let ab = cut.reduce(rho)?;
    let b = ab.partial_trace(&cut.b_refs())?;
    let b_pos = ab.layout().select(&cut.b_refs())?;

    let d_ab = ab.spectrum()?;
    let log_ab = log_on_support(&d_ab, LogBase::Nats);
    let log_b = log_on_support(&b.spectrum()?, LogBase::Nats);
    let diff = &log_ab - &embed_operator(&log_b, &b_pos, ab.layout())?;

    let n = ab.dim();
    let support: Vec<Vec<Complex64>> = (0..n)
        .filter(|&k| d_ab.eigenvalues[k] > SUPPORT_EPS)
        .map(|k| d_ab.eigenvector(k))
        .collect();
    let r = support.len();
    // Compression V_s† (diff) V_s onto the support.
    let compressed = CMatrix::from_fn(r, |i, j| {
        let dv = diff.mul_vec(&support[j]);
        support[i].iter().zip(&dv).map(|(a, b)| a.conj() * b).sum()
    });
    let inner = hermitian_eig(&compressed.hermitian_part())?;
    let mut entries = CMatrix::zeros(n);
    for k in 0..r {
        let w = inner.eigenvector(k);
        let x: Vec<Complex64> = (0..n)
            .map(|row| (0..r).map(|s| support[s][row] * w[s]).sum())
            .collect();
        let e = inner.eigenvalues[k].exp();
        for i in 0..n {
            for j in 0..n {
                entries[(i, j)] += x[i] * x[j].conj() * e;
            }
        }
    }
    let entries = entries.hermitian_part();
    let spectrum = hermitian_eig(&entries)?.eigenvalues;
    if let Some(&min) = spectrum.last() {
        if min < -AMPLITUDE_TOL {
            return Err(Error::invalid(format!(
                "conditional amplitude matrix has eigenvalue {min:e}"
            )));
        }
    }
    Ok(ConditionalAmplitudeMatrix {
        cut: cut.clone(),
        entries,
        spectrum,
    })
}

/// Both routes to the conditional entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalDiagnostics {
    /// `S(AB) − S(B)`, the reported value.
    pub canonical: f64,
    /// `−Tr ρ_AB log ρ_{A|B}`.
    pub trace_form: f64,
    pub discrepancy: f64,
}

pub fn conditional_entropy_diagnostics(
    rho: &DensityMatrix,
    cut: &Cut,
    base: LogBase,
) -> Result<ConditionalDiagnostics> {
    let canonical = conditional_entropy_q(rho, cut, base)?;
    let cam = conditional_amplitude_matrix(rho, cut)?;
    let ab = cut.reduce(rho)?;
    let log_cam = log_on_support(&hermitian_eig(&cam.entries)?, base);
    let trace_form = -(ab.matrix() * &log_cam).trace().re;
    Ok(ConditionalDiagnostics {
        canonical,
        trace_form,
        discrepancy: (canonical - trace_form).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub max_eigenvalue: f64,
    /// Sufficient (not necessary) sign of inseparability.
    pub exceeds_unity: bool,
}

/// Largest eigenvalue of `ρ_{A|B}`; above one only for inseparable states.
pub fn inseparability_witness(rho: &DensityMatrix, cut: &Cut) -> Result<Witness> {
    let max = conditional_amplitude_matrix(rho, cut)?.max_eigenvalue();
    Ok(Witness {
        max_eigenvalue: max,
        exceeds_unity: max > 1.0 + WITNESS_MARGIN,
    })
}

/// Venn diagram over two or three disjoint groups of factors. Factors in no
/// group are traced out first.
pub fn venn_quantum(
    rho: &DensityMatrix,
    parties: &[&[&str]],
    base: LogBase,
) -> Result<EntropyDiagram> {
    crate::classical::table::check_parties(parties)?;
    let all: Vec<&str> = parties.iter().flat_map(|p| p.iter().copied()).collect();
    let reduced = rho.partial_trace(&all)?;
    let labels = parties.iter().map(|p| p.concat()).collect();
    EntropyDiagram::from_subset_entropies(labels, base, |mask| {
        let subset: Vec<&str> = parties
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .flat_map(|(_, p)| p.iter().copied())
            .collect();
        marginal_entropy(&reduced, &subset, base)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalBound {
    pub von_neumann: f64,
    /// Shannon entropy of the diagonal of `U†ρU`.
    pub diagonal_shannon: f64,
    /// The state is diagonal in the basis, so both entropies coincide.
    pub diagonal_in_basis: bool,
}

/// Von Neumann entropy against the Shannon entropy of the diagonal in the
/// basis given by the columns of `basis`.
pub fn diagonal_shannon_bound(
    rho: &DensityMatrix,
    basis: &CMatrix,
    base: LogBase,
) -> Result<DiagonalBound> {
    let rotated = rho.evolve(&basis.adjoint())?;
    let m = rotated.matrix();
    let diag: Vec<f64> = (0..m.dim()).map(|i| m[(i, i)].re.max(0.0)).collect();
    let off = (0..m.dim())
        .flat_map(|i| (0..m.dim()).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)].norm())
        .fold(0.0, f64::max);
    let s = von_neumann_entropy(rho, base)?;
    let h = shannon(&diag, base);
    Ok(DiagonalBound {
        von_neumann: s,
        diagonal_shannon: h,
        diagonal_in_basis: off <= 1e-12,
    })
}
