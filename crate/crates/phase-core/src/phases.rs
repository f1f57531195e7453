//! Phase functionals: per-level cyclic geometric phases, the
//! eigenvalue-weighted sum, its predicted shift under winding gauge
//! transformations, the interferometric phase/visibility pair, and the
//! dynamical/total decomposition.
//!
//! Per-level phases are kept as unwound reals on the whole line. Reducing
//! mod 2π would erase exactly the winding term whose gauge dependence this
//! crate exists to exhibit.

use crate::error::{PhaseError, Result};
use crate::linalg::{principal_arg, wrap_to_pi};
use crate::spectral::{EigenframePath, GaugeState, SpectralDecomposition, STEP_OVERLAP_FLOOR};
use crate::state::{HamiltonianSchedule, UnitaryPath};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below this modulus of the weighted phase-factor sum the fringe contrast
/// vanishes and the interferometric phase is undefined.
pub const VISIBILITY_NODE_TOL: f64 = 1e-12;

/// Discrete connection integral of a periodic frame on level `k`:
/// φ = −Σ_i arg⟨ψ_k(t_i)|ψ_k(t_{i+1})⟩, returned unwound.
pub fn connection_phase(frame: &EigenframePath, k: usize) -> Result<f64> {
    if frame.gauge_state() != GaugeState::Periodic {
        return Err(PhaseError::NotPeriodicGauge);
    }
    let level = frame.level(k);
    let mut sum = 0.0;
    for (step, pair) in level.windows(2).enumerate() {
        let overlap = pair[0].dotc(&pair[1]);
        let mag = overlap.norm();
        if mag < STEP_OVERLAP_FLOOR {
            return Err(PhaseError::StepOverlapVanishes {
                level: k,
                step,
                overlap: mag,
            });
        }
        sum += principal_arg(overlap);
    }
    Ok(-sum)
}

/// The eigenvalue-weighted phase sum φ_g = Σ_k w_k φ_g^k, unreduced.
pub fn weighted_phase_sum(weights: &[f64], phases: &[f64]) -> Result<f64> {
    if weights.len() != phases.len() {
        return Err(PhaseError::LengthMismatch {
            left: weights.len(),
            right: phases.len(),
        });
    }
    Ok(weights.iter().zip(phases).map(|(w, p)| w * p).sum())
}

/// The shift 2π Σ_k w_k n_k the weighted sum picks up under a gauge
/// profile with windings n_k.
pub fn predicted_gauge_shift(weights: &[f64], windings: &[i64]) -> Result<f64> {
    if weights.len() != windings.len() {
        return Err(PhaseError::LengthMismatch {
            left: weights.len(),
            right: windings.len(),
        });
    }
    Ok(2.0
        * PI
        * weights
            .iter()
            .zip(windings)
            .map(|(w, n)| w * *n as f64)
            .sum::<f64>())
}

/// The interferometric pair (γ, 𝒱) with 𝒱e^{iγ} = Σ_k w_k e^{iφ_k}.
/// At a visibility node γ is undefined and reported as `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometricPhase {
    pub gamma: Option<f64>,
    pub visibility: f64,
}

impl InterferometricPhase {
    pub fn is_node(&self) -> bool {
        self.gamma.is_none()
    }
}

pub fn interferometric_phase(weights: &[f64], phases: &[f64]) -> Result<InterferometricPhase> {
    if weights.len() != phases.len() {
        return Err(PhaseError::LengthMismatch {
            left: weights.len(),
            right: phases.len(),
        });
    }
    let z: Complex64 = weights
        .iter()
        .zip(phases)
        .map(|(w, p)| Complex64::from_polar(*w, *p))
        .sum();
    let visibility = z.norm();
    if visibility < VISIBILITY_NODE_TOL {
        Ok(InterferometricPhase {
            gamma: None,
            visibility: 0.0,
        })
    } else {
        Ok(InterferometricPhase {
            gamma: Some(principal_arg(z)),
            visibility,
        })
    }
}

/// δ_k = −∫₀^τ ⟨ψ_k(t)|H(t)|ψ_k(t)⟩ dt, trapezoid rule per segment.
/// Gauge independent: only expectation values enter.
pub fn dynamical_phase(
    schedule: &HamiltonianSchedule,
    frame: &EigenframePath,
    k: usize,
) -> Result<f64> {
    let times = frame.times();
    let level = frame.level(k);
    let tol = 1e-9 * schedule.tau().max(1.0);
    let mut integral = 0.0;
    let mut idx = 0usize;
    let mut seg_end = 0.0;
    for (h, dt) in schedule.segments() {
        seg_end += dt;
        let mut end = idx;
        while end + 1 < times.len() && times[end] < seg_end - tol {
            end += 1;
        }
        if (times[end] - seg_end).abs() > tol {
            return Err(PhaseError::GridMismatch);
        }
        let energies: Vec<f64> = (idx..=end)
            .map(|i| level[i].dotc(&(h * &level[i])).re)
            .collect();
        for (j, i) in (idx..end).enumerate() {
            let dt_i = times[i + 1] - times[i];
            integral += 0.5 * (energies[j] + energies[j + 1]) * dt_i;
        }
        idx = end;
    }
    Ok(-integral)
}

/// θ_k^{tot} = arg⟨ψ_k(0)|U(τ)|ψ_k(0)⟩ ∈ (−π, π]. For a cyclic path with
/// a nondegenerate spectrum the overlap has unit modulus.
pub fn total_phase(path: &UnitaryPath, spec: &SpectralDecomposition, k: usize) -> Result<f64> {
    let psi0 = &spec.vectors()[k];
    let overlap = psi0.dotc(&(path.final_unitary() * psi0));
    let defect = (1.0 - overlap.norm()).abs();
    if defect > 1e-6 {
        return Err(PhaseError::NonCyclicPath {
            residual: defect,
            tol: 1e-6,
        });
    }
    Ok(principal_arg(overlap))
}

/// Distance of an angle to the nearest multiple of 2π.
pub fn mod_2pi_distance(angle: f64) -> f64 {
    (angle - 2.0 * PI * (angle / (2.0 * PI)).round()).abs()
}

/// How the per-level phases of a report were gauged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeDescriptor {
    /// Parallel transport with the closure phase spread linearly.
    Canonical,
    /// Canonical gauge followed by a winding profile.
    Profile { windings: Vec<i64>, shape: String },
}

/// Everything computed for one scenario, serializable as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelReport {
    pub weight: f64,
    /// Unwound per-level cyclic geometric phase (radians, whole line).
    pub phase: f64,
    /// The same phase reduced to (−π, π].
    pub phase_mod_2pi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<f64>,
    /// Distance of θ_tot − φ − δ to the nearest multiple of 2π.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseReport {
    pub name: String,
    pub grid_steps: usize,
    pub tau: f64,
    pub cyclicity_residual: f64,
    pub gauge: GaugeDescriptor,
    pub levels: Vec<LevelReport>,
    /// Σ_k w_k φ_g^k, unreduced.
    pub weighted_sum: f64,
    pub weighted_sum_mod_2pi: f64,
    pub gamma: Option<f64>,
    pub visibility: f64,
    pub visibility_node: bool,
}

impl PhaseReport {
    pub fn weights(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.weight).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.phase).collect()
    }

    /// Recompute the stored aggregates from the stored parts; returns the
    /// largest deviation. Reports are self-consistent when this is ~1e-12.
    pub fn self_consistency(&self) -> f64 {
        let w = self.weights();
        let p = self.phases();
        let mut worst = (weighted_phase_sum(&w, &p).unwrap() - self.weighted_sum).abs();
        let z: Complex64 = w
            .iter()
            .zip(&p)
            .map(|(w, p)| Complex64::from_polar(*w, *p))
            .sum();
        worst = worst.max((z.norm() - self.visibility).abs());
        if let Some(gamma) = self.gamma {
            worst = worst.max((z - Complex64::from_polar(self.visibility, gamma)).norm());
        }
        worst = worst.max((wrap_to_pi(self.weighted_sum) - self.weighted_sum_mod_2pi).abs());
        worst
    }
}
