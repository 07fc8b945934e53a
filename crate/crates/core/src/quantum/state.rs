//! Density matrices and pure states over a [`SubsystemLayout`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eig::{hermitian_eig, SpectralDecomp};
use super::functions::{check_psd, SUPPORT_EPS};
use super::layout::SubsystemLayout;
use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Tolerance on Hermiticity, trace and norm of states.
pub const STATE_TOL: f64 = 1e-10;
/// Maximum `|U†U - 1|` accepted for a unitary.
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensity", into = "RawDensity")]
pub struct DensityMatrix {
    layout: SubsystemLayout,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(layout: SubsystemLayout, matrix: CMatrix) -> Result<Self> {
        if layout.dim() != matrix.dim() {
            return Err(Error::invalid(format!(
                "layout dimension {} does not match matrix dimension {}",
                layout.dim(),
                matrix.dim()
            )));
        }
        let herm = matrix.hermitian_defect();
        if herm > STATE_TOL {
            return Err(Error::invalid(format!(
                "density matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::invalid(format!(
                "density matrix trace is {tr}, not 1"
            )));
        }
        check_psd(&hermitian_eig(&matrix)?)?;
        Ok(DensityMatrix { layout, matrix })
    }

    /// Skips validation; for results of operations known to preserve it.
    pub(crate) fn trusted(layout: SubsystemLayout, matrix: CMatrix) -> Self {
        debug_assert_eq!(layout.dim(), matrix.dim());
        DensityMatrix { layout, matrix }
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.dim();
        DensityMatrix::trusted(layout, CMatrix::identity(d).scale(1.0 / d as f64))
    }

    /// State diagonal in the computational basis.
    pub fn diagonal(layout: SubsystemLayout, probabilities: &[f64]) -> Result<Self> {
        if probabilities.len() != layout.dim() {
            return Err(Error::invalid(
                "diagonal length does not match the layout dimension",
            ));
        }
        if probabilities.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::invalid("diagonal entries must be non-negative"));
        }
        DensityMatrix::new(layout, CMatrix::diag(probabilities))
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectrum(&self) -> Result<SpectralDecomp> {
        hermitian_eig(&self.matrix)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.spectrum()?.eigenvalues)
    }

    /// Number of eigenvalues above the support cutoff.
    pub fn rank(&self) -> Result<usize> {
        Ok(self
            .eigenvalues()?
            .iter()
            .filter(|&&l| l > SUPPORT_EPS)
            .count())
    }

    /// `self ⊗ other`; factor labels must be disjoint.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(DensityMatrix::trusted(
            layout,
            self.matrix.kron(&other.matrix),
        ))
    }

    /// Traces out every factor not listed in `keep`. The result keeps the
    /// surviving factors in layout order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let pos = self.layout.select(keep)?;
        if pos.len() == self.layout.factors().len() {
            return Ok(self.clone());
        }
        let sub = self.layout.sublayout(&pos);
        let (kept, rest) = self.layout.split_indices(&pos);
        let n = self.dim();
        let mut out = CMatrix::zeros(sub.dim());
        for i in 0..n {
            for j in 0..n {
                if rest[i] == rest[j] {
                    out[(kept[i], kept[j])] += self.matrix[(i, j)];
                }
            }
        }
        Ok(DensityMatrix::trusted(sub, out))
    }

    /// `U ρ U†` for a unitary on the full space.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        check_unitary(u, self.dim())?;
        Ok(DensityMatrix::trusted(
            self.layout.clone(),
            self.matrix.conjugate_by(u),
        ))
    }

    /// Schmidt purification `Σ_i √p_i |i⟩|i⟩` with a reference factor of
    /// dimension `rank(ρ)` appended under `reference`.
    pub fn purify(&self, reference: &str) -> Result<PureState> {
        if self.layout.contains(reference) {
            return Err(Error::usage(format!(
                "reference label `{reference}` already in use"
            )));
        }
        let d = self.spectrum()?;
        let support: Vec<usize> = (0..d.dim())
            .filter(|&k| d.eigenvalues[k] > SUPPORT_EPS)
            .collect();
        let r = support.len();
        let layout = self
            .layout
            .concat(&SubsystemLayout::of(&[(reference, r)])?)?;
        let mut amps = vec![ZERO; self.dim() * r];
        for (slot, &k) in support.iter().enumerate() {
            let w = d.eigenvalues[k].sqrt();
            for i in 0..self.dim() {
                amps[i * r + slot] = d.eigenvectors[(i, k)] * w;
            }
        }
        normalize(&mut amps);
        Ok(PureState {
            layout,
            amplitudes: amps,
        })
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPure", into = "RawPure")]
pub struct PureState {
    layout: SubsystemLayout,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if layout.dim() != amplitudes.len() {
            return Err(Error::invalid(format!(
                "layout dimension {} does not match {} amplitudes",
                layout.dim(),
                amplitudes.len()
            )));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::invalid(format!(
                "state vector has norm {norm}, not 1"
            )));
        }
        Ok(PureState { layout, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(layout: SubsystemLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(Error::usage(format!("basis index {index} out of range")));
        }
        let mut amplitudes = vec![ZERO; layout.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(PureState { layout, amplitudes })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::trusted(self.layout.clone(), CMatrix::outer(&self.amplitudes))
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(PureState { layout, amplitudes })
    }

    /// Applies a unitary on the full space.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        check_unitary(u, self.layout.dim())?;
        Ok(PureState {
            layout: self.layout.clone(),
            amplitudes: u.mul_vec(&self.amplitudes),
        })
    }

    /// Applies a unitary acting on the factors `labels` (taken in layout order).
    pub fn evolve_local(&self, u: &CMatrix, labels: &[&str]) -> Result<Self> {
        let pos = self.layout.select(labels)?;
        let full = embed_operator(u, &pos, &self.layout)?;
        self.evolve(&full)
    }

    /// Inner product `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Schmidt decomposition across `left | rest`.
    pub fn schmidt(&self, left: &[&str]) -> Result<SchmidtDecomposition> {
        let lpos = self.layout.select(left)?;
        let rpos = self.layout.complement(&lpos);
        if rpos.is_empty() {
            return Err(Error::usage("Schmidt cut leaves the right side empty"));
        }
        let left_layout = self.layout.sublayout(&lpos);
        let right_layout = self.layout.sublayout(&rpos);
        let (dl, dr) = (left_layout.dim(), right_layout.dim());
        let (li, ri) = self.layout.split_indices(&lpos);
        let mut m = vec![ZERO; dl * dr];
        for (k, a) in self.amplitudes.iter().enumerate() {
            m[li[k] * dr + ri[k]] = *a;
        }
        let reduced = CMatrix::from_fn(dl, |i, j| {
            (0..dr).map(|c| m[i * dr + c] * m[j * dr + c].conj()).sum()
        });
        let d = hermitian_eig(&reduced)?;
        let mut terms = Vec::new();
        for k in 0..dl {
            let u = d.eigenvector(k);
            let w: Vec<Complex64> = (0..dr)
                .map(|c| (0..dl).map(|i| u[i].conj() * m[i * dr + c]).sum())
                .collect();
            let s = norm(&w);
            if s > SCHMIDT_EPS {
                terms.push(SchmidtTerm {
                    coefficient: s,
                    left: u,
                    right: w.into_iter().map(|z| z / s).collect(),
                });
            }
        }
        terms.sort_by(|a, b| b.coefficient.total_cmp(&a.coefficient));
        Ok(SchmidtDecomposition {
            left: left_layout,
            right: right_layout,
            terms,
        })
    }
}

/// Schmidt coefficients at or below this are dropped.
const SCHMIDT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtTerm {
    pub coefficient: f64,
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub left: SubsystemLayout,
    pub right: SubsystemLayout,
    /// Descending by coefficient.
    pub terms: Vec<SchmidtTerm>,
}

impl SchmidtDecomposition {
    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient).collect()
    }

    /// `Σ_k s_k |u_k⟩|v_k⟩` on the layout `left ⊗ right`.
    pub fn reconstruct(&self) -> Result<PureState> {
        let layout = self.left.concat(&self.right)?;
        let dr = self.right.dim();
        let mut amplitudes = vec![ZERO; layout.dim()];
        for t in &self.terms {
            for (i, u) in t.left.iter().enumerate() {
                for (j, v) in t.right.iter().enumerate() {
                    amplitudes[i * dr + j] += u * v * t.coefficient;
                }
            }
        }
        PureState::new(layout, amplitudes)
    }
}

/// Lifts `op`, acting on the factors at `positions` (layout order), to
/// `op ⊗ 1` on the full layout.
pub(crate) fn embed_operator(
    op: &CMatrix,
    positions: &[usize],
    layout: &SubsystemLayout,
) -> Result<CMatrix> {
    let sub_dim: usize = positions.iter().map(|&p| layout.factors()[p].dim).product();
    if op.dim() != sub_dim {
        return Err(Error::usage(format!(
            "operator dimension {} does not match subsystem dimension {sub_dim}",
            op.dim()
        )));
    }
    let (kept, rest) = layout.split_indices(positions);
    let n = layout.dim();
    Ok(CMatrix::from_fn(n, |i, j| {
        if rest[i] == rest[j] {
            op[(kept[i], kept[j])]
        } else {
            ZERO
        }
    }))
}

pub(crate) fn check_unitary(u: &CMatrix, dim: usize) -> Result<()> {
    if u.dim() != dim {
        return Err(Error::usage(format!(
            "unitary has dimension {}, expected {dim}",
            u.dim()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::invalid(format!(
            "matrix is not unitary (|U†U - 1| = {defect:e})"
        )));
    }
    Ok(())
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    v.iter_mut().for_each(|z| *z /= n);
}

#[derive(Serialize, Deserialize)]
struct RawDensity {
    layout: SubsystemLayout,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Vec<Vec<f64>>,
}

impl TryFrom<RawDensity> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: RawDensity) -> Result<Self> {
        let n = raw.re.len();
        if raw.re.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("`re` is not a square matrix"));
        }
        if !raw.im.is_empty() && (raw.im.len() != n || raw.im.iter().any(|r| r.len() != n)) {
            return Err(Error::invalid("`im` does not match the shape of `re`"));
        }
        let matrix = CMatrix::from_fn(n, |i, j| {
            let im = raw.im.get(i).map_or(0.0, |r| r[j]);
            Complex64::new(raw.re[i][j], im)
        });
        DensityMatrix::new(raw.layout, matrix)
    }
}

impl From<DensityMatrix> for RawDensity {
    fn from(d: DensityMatrix) -> Self {
        let n = d.dim();
        let rows = |f: fn(Complex64) -> f64| {
            (0..n)
                .map(|i| (0..n).map(|j| f(d.matrix[(i, j)])).collect())
                .collect()
        };
        RawDensity {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
            layout: d.layout,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawPure {
    layout: SubsystemLayout,
    amp_re: Vec<f64>,
    #[serde(default)]
    amp_im: Vec<f64>,
}

impl TryFrom<RawPure> for PureState {
    type Error = Error;

    fn try_from(raw: RawPure) -> Result<Self> {
        if !raw.amp_im.is_empty() && raw.amp_im.len() != raw.amp_re.len() {
            return Err(Error::invalid("`amp_im` length does not match `amp_re`"));
        }
        let amps = raw
            .amp_re
            .iter()
            .enumerate()
            .map(|(i, &re)| Complex64::new(re, raw.amp_im.get(i).copied().unwrap_or(0.0)))
            .collect();
        PureState::new(raw.layout, amps)
    }
}

impl From<PureState> for RawPure {
    fn from(p: PureState) -> Self {
        RawPure {
            amp_re: p.amplitudes.iter().map(|z| z.re).collect(),
            amp_im: p.amplitudes.iter().map(|z| z.im).collect(),
            layout: p.layout,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn epr() -> PureState {
        PureState::new(
            SubsystemLayout::qubits(&["A", "B"]).unwrap(),
            vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(-FRAC_1_SQRT_2)],
        )
        .unwrap()
    }

    fn qubit(label: &str, p: [f64; 2]) -> DensityMatrix {
        DensityMatrix::diagonal(SubsystemLayout::qubits(&[label]).unwrap(), &p).unwrap()
    }

    #[test]
    fn validation_rejects_bad_states() {
        let l = SubsystemLayout::qubits(&["A"]).unwrap();
        assert!(DensityMatrix::new(l.clone(), CMatrix::diag(&[0.6, 0.6])).is_err());
        assert!(DensityMatrix::new(l.clone(), CMatrix::diag(&[1.2, -0.2])).is_err());
        assert!(
            DensityMatrix::new(l.clone(), CMatrix::from_real(&[&[0.5, 0.1], &[0.0, 0.5]])).is_err()
        );
        assert!(DensityMatrix::new(l.clone(), CMatrix::identity(3).scale(1.0 / 3.0)).is_err());
        assert!(PureState::new(l, vec![c(1.0), c(1.0)]).is_err());
    }

    #[test]
    fn tensor_with_trivial_factor() {
        let rho = qubit("A", [0.3, 0.7]);
        let one = DensityMatrix::maximally_mixed(SubsystemLayout::of(&[("T", 1)]).unwrap());
        let t = rho.tensor(&one).unwrap();
        assert_eq!(t.matrix(), rho.matrix());
        assert!(rho.tensor(&rho).is_err());
        let zero = qubit("B", [1.0, 0.0]);
        let zz = qubit("A", [1.0, 0.0]).tensor(&zero).unwrap();
        assert_eq!(zz.matrix(), &CMatrix::diag(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_spectrum_is_pairwise_products() {
        let a = qubit("A", [0.3, 0.7]);
        let b = qubit("B", [0.9, 0.1]);
        let ev = a.tensor(&b).unwrap().eigenvalues().unwrap();
        let mut want = vec![0.27f64, 0.03, 0.63, 0.07];
        want.sort_by(|x, y| y.total_cmp(x));
        assert!(ev.iter().zip(&want).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn partial_trace_of_products_and_epr() {
        let a = qubit("A", [0.3, 0.7]);
        let b = qubit("B", [0.9, 0.1]);
        let ab = a.tensor(&b).unwrap();
        assert!(
            ab.partial_trace(&["A"])
                .unwrap()
                .matrix()
                .max_abs_diff(a.matrix())
                < 1e-15
        );
        assert!(
            ab.partial_trace(&["B"])
                .unwrap()
                .matrix()
                .max_abs_diff(b.matrix())
                < 1e-15
        );

        let rho = epr().density();
        for side in ["A", "B"] {
            let r = rho.partial_trace(&[side]).unwrap();
            assert!(r.matrix().max_abs_diff(&CMatrix::diag(&[0.5, 0.5])) < 1e-15);
        }
        assert!(matches!(
            rho.partial_trace(&["C"]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn ghz_reduction() {
        let mut amps = vec![c(0.0); 8];
        amps[0] = c(FRAC_1_SQRT_2);
        amps[7] = c(FRAC_1_SQRT_2);
        let ghz = PureState::new(SubsystemLayout::qubits(&["A", "B", "C"]).unwrap(), amps).unwrap();
        let r = ghz.density().partial_trace(&["A", "B"]).unwrap();
        let ev = r.eigenvalues().unwrap();
        assert!((ev[0] - 0.5).abs() < 1e-14 && (ev[1] - 0.5).abs() < 1e-14);
        assert!(ev[2].abs() < 1e-14 && ev[3].abs() < 1e-14);
        assert_eq!(r.rank().unwrap(), 2);
    }

    #[test]
    fn purification_examples() {
        let pure = epr().density().partial_trace(&["A", "B"]).unwrap();
        let p = pure.purify("R").unwrap();
        assert_eq!(p.layout().factors().last().unwrap().dim, 1);

        let mixed = qubit("A", [0.5, 0.5]);
        let p = mixed.purify("R").unwrap();
        let s = p.schmidt(&["A"]).unwrap().coefficients();
        assert!((s[0] - FRAC_1_SQRT_2).abs() < 1e-12 && (s[1] - FRAC_1_SQRT_2).abs() < 1e-12);

        let skew = qubit("A", [0.75, 0.25]);
        let p = skew.purify("R").unwrap();
        let s = p.schmidt(&["A"]).unwrap().coefficients();
        assert!((s[0] - 3f64.sqrt() / 2.0).abs() < 1e-12 && (s[1] - 0.5).abs() < 1e-12);
        assert!(
            p.density()
                .partial_trace(&["A"])
                .unwrap()
                .matrix()
                .max_abs_diff(skew.matrix())
                < 1e-12
        );
        assert!(matches!(skew.purify("A"), Err(Error::Usage(_))));
    }

    #[test]
    fn schmidt_examples() {
        let l = SubsystemLayout::qubits(&["A", "B"]).unwrap();
        let product = PureState::basis(l.clone(), 2).unwrap();
        assert_eq!(product.schmidt(&["A"]).unwrap().coefficients().len(), 1);

        let s = epr().schmidt(&["B"]).unwrap();
        assert!(s
            .coefficients()
            .iter()
            .all(|x| (x - FRAC_1_SQRT_2).abs() < 1e-12));

        let skew =
            PureState::new(l, vec![c(0.9f64.sqrt()), c(0.0), c(0.0), c(0.1f64.sqrt())]).unwrap();
        let s = skew.schmidt(&["A"]).unwrap();
        assert!((s.coefficients()[0] - 0.948_683).abs() < 1e-6);
        assert!((s.coefficients()[1] - 0.316_228).abs() < 1e-6);
        let back = s.reconstruct().unwrap();
        assert!((back.overlap(&skew).norm() - 1.0).abs() < 1e-12);

        assert!(matches!(epr().schmidt(&["A", "B"]), Err(Error::Usage(_))));
        assert!(matches!(epr().schmidt(&[]), Err(Error::Usage(_))));
    }

    #[test]
    fn evolve_rejects_non_unitary() {
        let rho = qubit("A", [0.5, 0.5]);
        assert!(matches!(
            rho.evolve(&CMatrix::diag(&[1.0, 2.0])),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            rho.evolve(&CMatrix::identity(3)),
            Err(Error::Usage(_))
        ));
        let x = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(rho.evolve(&x).unwrap(), rho);
    }

    #[test]
    fn json_schemas() {
        let rho = qubit("A", [0.25, 0.75]);
        let s = serde_json::to_string(&rho).unwrap();
        assert_eq!(
            s,
            r#"{"layout":[{"label":"A","dim":2}],"re":[[0.25,0.0],[0.0,0.75]],"im":[[0.0,0.0],[0.0,0.0]]}"#
        );
        assert_eq!(serde_json::from_str::<DensityMatrix>(&s).unwrap(), rho);
        let bad = r#"{"layout":[{"label":"A","dim":2}],"re":[[0.5,0.0],[0.0,0.6]]}"#;
        let err = serde_json::from_str::<DensityMatrix>(bad)
            .unwrap_err()
            .to_string();
        assert!(err.contains("trace"), "{err}");

        let p = epr();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("amp_re") && s.contains("amp_im"));
        assert_eq!(serde_json::from_str::<PureState>(&s).unwrap(), p);
    }
}
