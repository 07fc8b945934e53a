//! Entropy ledger for black-hole formation and evaporation.
//!
//! Natural units ħ = G = c = k = 1; every entropy in this module is in nats.
//!
//! Formation: a proto-black-hole of thermal radiation at temperature `T`
//! (energy `T⁴`, entropy `Σ = 4/3 T³`) condenses into a hole of mass
//! `M = T⁴` and entropy `S_BH = 4πM²`; the deficit `ΔS = Σ − S_BH` leaves as
//! radiation `R′`.
//!
//! Evaporation step of size `dE` at `T_H = 1/(8πM)`:
//!
//! ```text
//! ΔS     = dE / (4 T_H)
//! ΔE     = dE − T_H ΔS = 3/4 dE        (mass loss)
//! dS_BH  = 4π (M² − (M − ΔE)²)
//! dS_rad = dS_BH + ΔS                  (→ 4/3 dS_BH as dE → 0)
//! ```
//!
//! The ledger conserves `S_BH(M) + S_rad − S_corr`: every step moves `ΔS`
//! into the correlation account.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::{EntropyDiagram, LogBase};

/// Largest step accepted, as a fraction of the current mass.
pub const MAX_STEP_FRACTION: f64 = 0.01;

/// `S_BH = 4πM²`.
pub fn bh_entropy(mass: f64) -> Result<f64> {
    check_mass(mass)?;
    Ok(4.0 * PI * mass * mass)
}

/// `T_H = 1/(8πM)`.
pub fn hawking_temperature(mass: f64) -> Result<f64> {
    check_mass(mass)?;
    Ok(1.0 / (8.0 * PI * mass))
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::ModelDomain(format!(
            "black-hole mass must be positive, got {mass}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlackHole {
    mass: f64,
}

impl BlackHole {
    pub fn new(mass: f64) -> Result<Self> {
        check_mass(mass)?;
        Ok(BlackHole { mass })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn entropy(&self) -> f64 {
        4.0 * PI * self.mass * self.mass
    }

    pub fn temperature(&self) -> f64 {
        1.0 / (8.0 * PI * self.mass)
    }
}

/// Thermal radiation about to collapse. Proportionality constants are
/// fixed to `E = T⁴` and `Σ = 4/3 T³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtoBh {
    temperature: f64,
}

impl ProtoBh {
    pub fn new(temperature: f64) -> Result<Self> {
        if temperature > 0.0 && temperature.is_finite() {
            Ok(ProtoBh { temperature })
        } else {
            Err(Error::ModelDomain(format!(
                "temperature must be positive, got {temperature}"
            )))
        }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn energy(&self) -> f64 {
        self.temperature.powi(4)
    }

    pub fn entropy(&self) -> f64 {
        4.0 / 3.0 * self.temperature.powi(3)
    }
}

/// One evaporation step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub mass_before: f64,
    /// Pair energy `dE`.
    pub de: f64,
    /// Mass actually lost, `ΔE`.
    pub de_eff: f64,
    /// Latent entropy `ΔS`.
    pub delta_s: f64,
    pub ds_bh: f64,
    pub ds_rad: f64,
    pub ds_corr: f64,
    pub zurek_ratio: f64,
}

impl StepRecord {
    pub fn mass_after(&self) -> f64 {
        self.mass_before - self.de_eff
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ledger {
    bh: BlackHole,
    /// Initial entropy account: `Σ` of the proto-black-hole, or the
    /// accretion-equivalent `4/3 S_BH` for a ledger opened on a bare hole.
    sigma: f64,
    s_rad: f64,
    s_corr: f64,
    s_joint_target: f64,
    steps: Vec<StepRecord>,
}

impl Ledger {
    /// Opens a ledger on an existing hole formed from a pure state: no
    /// radiation yet, `S_corr = S_BH`, and an entropy account of `4/3 S_BH`
    /// (what thermal accretion would have delivered).
    pub fn from_black_hole(bh: BlackHole) -> Self {
        let s_bh = bh.entropy();
        Ledger {
            bh,
            sigma: 4.0 / 3.0 * s_bh,
            s_rad: 0.0,
            s_corr: s_bh,
            s_joint_target: 0.0,
            steps: Vec::new(),
        }
    }

    /// Re-targets the conserved joint entropy (mixed-state scenarios),
    /// moving the difference into the correlation account.
    pub fn with_joint_target(mut self, target: f64) -> Self {
        self.s_corr += self.s_joint_target - target;
        self.s_joint_target = target;
        self
    }

    pub fn black_hole(&self) -> BlackHole {
        self.bh
    }

    pub fn mass(&self) -> f64 {
        self.bh.mass
    }

    pub fn s_bh(&self) -> f64 {
        self.bh.entropy()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn s_rad(&self) -> f64 {
        self.s_rad
    }

    pub fn s_corr(&self) -> f64 {
        self.s_corr
    }

    pub fn s_joint_target(&self) -> f64 {
        self.s_joint_target
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    /// `S_BH(M) + S_rad − S_corr − S_joint_target`, with `S_BH` recomputed
    /// from the current mass.
    pub fn defect(&self) -> f64 {
        self.s_bh() + self.s_rad - self.s_corr - self.s_joint_target
    }

    /// Computes the step for pair energy `de` without applying it.
    pub fn step(&self, de: f64) -> Result<StepRecord> {
        let m = self.bh.mass;
        let limit = MAX_STEP_FRACTION * m;
        if de.is_nan() || de < 0.0 || de > limit {
            return Err(Error::StepTooLarge { de, limit });
        }
        let t_h = self.bh.temperature();
        let delta_s = de / (4.0 * t_h);
        let de_eff = de - t_h * delta_s;
        let m_after = m - de_eff;
        if m_after <= 0.0 {
            return Err(Error::MassExhausted);
        }
        let ds_bh = 4.0 * PI * (m * m - m_after * m_after);
        let ds_rad = ds_bh + delta_s;
        Ok(StepRecord {
            mass_before: m,
            de,
            de_eff,
            delta_s,
            ds_bh,
            ds_rad,
            ds_corr: ds_rad - ds_bh,
            zurek_ratio: if ds_bh > 0.0 {
                ds_rad / ds_bh
            } else {
                f64::NAN
            },
        })
    }

    /// Applies a record produced by [`step`](Self::step) on this ledger.
    pub fn apply(mut self, record: StepRecord) -> Self {
        debug_assert_eq!(record.mass_before, self.bh.mass);
        if record.de == 0.0 {
            return self;
        }
        self.bh = BlackHole {
            mass: record.mass_after(),
        };
        self.s_rad += record.ds_rad;
        self.s_corr += record.ds_corr;
        self.steps.push(record);
        self
    }
}

/// One evaporation step of pair energy `de` (`0 ≤ de ≤ 0.01 M`).
/// `de = 0` returns the ledger unchanged.
pub fn evaporation_step(ledger: &Ledger, de: f64) -> Result<Ledger> {
    let record = ledger.step(de)?;
    Ok(ledger.clone().apply(record))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Formation {
    pub ledger: Ledger,
    /// `{S(BH|R′), S(BH:R′), S(R′|BH)} = {S_BH, 0, ΔS}` in nats.
    pub collapse_diagram: EntropyDiagram,
}

/// Condenses `proto` into a black hole of mass `E = T⁴`.
///
/// Fails with [`Error::ModelDomain`] when `Σ < S_BH`, i.e. when the
/// radiation does not carry enough entropy for the hole it would form.
pub fn form_black_hole(proto: &ProtoBh) -> Result<Formation> {
    let bh = BlackHole::new(proto.energy())?;
    let sigma = proto.entropy();
    let s_bh = bh.entropy();
    let mut delta_s = sigma - s_bh;
    if delta_s < 0.0 {
        if -delta_s > 1e-12 * sigma.max(s_bh) {
            return Err(Error::ModelDomain(format!(
                "proto-black-hole entropy Σ = {sigma} is below S_BH = {s_bh} (T = {}, M = {})",
                proto.temperature(),
                bh.mass()
            )));
        }
        delta_s = 0.0;
    }
    let ledger = Ledger {
        bh,
        sigma,
        s_rad: delta_s,
        s_corr: s_bh + delta_s,
        s_joint_target: 0.0,
        steps: Vec::new(),
    };
    let collapse_diagram = EntropyDiagram::bipartite(
        ["BH".into(), "R'".into()],
        [s_bh, 0.0, delta_s],
        LogBase::Nats,
    );
    Ok(Formation {
        ledger,
        collapse_diagram,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvaporationPolicy {
    /// `dE = fraction · M` each step, `0 < fraction ≤ 0.01`.
    pub fraction: f64,
    /// Stop once `M ≤ m_min`.
    pub m_min: f64,
}

/// Ledger state after one step of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Snapshot {
    pub step: usize,
    pub mass: f64,
    pub s_bh: f64,
    pub s_rad: f64,
    pub s_corr: f64,
    pub record: StepRecord,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub final_ledger: Ledger,
}

impl Trajectory {
    pub fn total_s_rad(&self) -> f64 {
        self.final_ledger.s_rad()
    }

    pub fn final_s_bh(&self) -> f64 {
        self.final_ledger.s_bh()
    }

    pub fn residual_defect(&self) -> f64 {
        self.final_ledger.defect()
    }

    /// `Σ (dE/M)²` over the steps taken.
    pub fn truncation_bound(&self) -> f64 {
        self.snapshots
            .iter()
            .map(|s| (s.record.de / s.record.mass_before).powi(2))
            .sum()
    }
}

/// Repeats evaporation steps with `dE = f·M` until `M ≤ m_min`.
pub fn evaporate(ledger: Ledger, policy: EvaporationPolicy) -> Result<Trajectory> {
    let EvaporationPolicy { fraction, m_min } = policy;
    if !(fraction > 0.0 && fraction <= MAX_STEP_FRACTION) {
        return Err(Error::usage(format!(
            "step fraction must be in (0, {MAX_STEP_FRACTION}], got {fraction}"
        )));
    }
    if m_min.is_nan() || m_min <= 0.0 {
        return Err(Error::usage(format!(
            "cutoff mass must be positive, got {m_min}"
        )));
    }
    let mut ledger = ledger;
    let mut snapshots = Vec::new();
    while ledger.mass() > m_min {
        let record = match ledger.step(fraction * ledger.mass()) {
            Ok(r) => r,
            Err(Error::MassExhausted) => break,
            Err(e) => return Err(e),
        };
        ledger = ledger.apply(record);
        snapshots.push(Snapshot {
            step: snapshots.len() + 1,
            mass: ledger.mass(),
            s_bh: ledger.s_bh(),
            s_rad: ledger.s_rad(),
            s_corr: ledger.s_corr(),
            record,
            defect: ledger.defect(),
        });
    }
    Ok(Trajectory {
        snapshots,
        final_ledger: ledger,
    })
}
