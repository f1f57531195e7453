//! Eigenvector frames along a unitary path and the gauge transformations
//! acting on them.
//!
//! Frames are generated as U(t)ψ_k(0) from the initial eigenbasis rather
//! than by per-time eigendecomposition; the eigenvalues are constant along
//! the path, so the propagated vectors stay exact eigenvectors while
//! avoiding ordering and phase jitter. The canonical periodic gauge is
//! discrete parallel transport followed by a linear distribution of the
//! closure phase over the period.

use crate::error::{PhaseError, Result};
use crate::linalg::{hermitian_eigen, identity, principal_arg, CMat, CVec};
use crate::state::{cyclicity_check, DensityOperator, UnitaryPath};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const WEIGHT_FLOOR: f64 = 1e-12;
pub const GAP_TOL: f64 = 1e-8;
/// Step overlaps below this magnitude mean the grid is too coarse to
/// track the frame.
pub const STEP_OVERLAP_FLOOR: f64 = 0.1;
pub const CLOSURE_OVERLAP_FLOOR: f64 = 1e-6;

/// Spectral decomposition of the initial state, restricted to the retained
/// (above-floor) levels, weights sorted descending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    weights: Vec<f64>,
    vectors: Vec<CVec>,
    min_gap: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }

    pub fn levels(&self) -> usize {
        self.weights.len()
    }

    /// Smallest gap between retained weights (∞ for a single level).
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Σ w_k |ψ_k(0)⟩⟨ψ_k(0)| over the retained levels.
    pub fn reconstruct(&self) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (w, v) in self.weights.iter().zip(&self.vectors) {
            out += v * v.adjoint() * Complex64::new(*w, 0.0);
        }
        out
    }
}

/// Eigendecompose ρ(0), drop levels with weight ≤ `weight_floor`, and
/// require the retained weights to be mutually nondegenerate.
pub fn decompose_initial(
    rho0: &DensityOperator,
    weight_floor: f64,
    gap_tol: f64,
) -> Result<SpectralDecomposition> {
    let (vals, vecs) = hermitian_eigen(rho0.matrix());
    let mut weights = Vec::new();
    let mut vectors = Vec::new();
    for (w, v) in vals.into_iter().zip(vecs) {
        if w > weight_floor {
            weights.push(w);
            vectors.push(v);
        }
    }
    let mut min_gap = f64::INFINITY;
    for pair in weights.windows(2) {
        let gap = pair[0] - pair[1];
        if gap < gap_tol {
            return Err(PhaseError::DegenerateSpectrum {
                w1: pair[0],
                w2: pair[1],
                gap_tol,
            });
        }
        min_gap = min_gap.min(gap);
    }
    Ok(SpectralDecomposition {
        dim: rho0.dim(),
        weights,
        vectors,
        min_gap,
    })
}

/// Phase convention currently carried by an [`EigenframePath`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeState {
    /// ψ_k(t_i) = U(t_i)ψ_k(0) as propagated.
    Raw,
    /// Successive overlaps rephased to be real and positive.
    Transported,
    /// Closed: ψ_k(t_N) = ψ_k(t_0).
    Periodic,
}

/// Per-level unit eigenvector frames ψ_k(t_i) along the grid.
#[derive(Debug, Clone)]
pub struct EigenframePath {
    tau: f64,
    times: Vec<f64>,
    weights: Vec<f64>,
    /// frames[k][i] = ψ_k(t_i)
    frames: Vec<Vec<CVec>>,
    gauge_state: GaugeState,
}

impl EigenframePath {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn levels(&self) -> usize {
        self.frames.len()
    }

    pub fn gauge_state(&self) -> GaugeState {
        self.gauge_state
    }

    pub fn level(&self, k: usize) -> &[CVec] {
        &self.frames[k]
    }
}

/// Propagate the initial eigenbasis along the path and parallel-transport
/// each level: every step overlap ⟨ψ_k(t_i)|ψ_k(t_{i+1})⟩ comes out real
/// and positive. Fails if the path is not cyclic for the reconstructed
/// state or if a step overlap collapses.
pub fn eigenframe_along_path(
    spec: &SpectralDecomposition,
    path: &UnitaryPath,
    cyclicity_tol: f64,
) -> Result<EigenframePath> {
    if spec.dim() != path.dim() {
        return Err(PhaseError::DimensionMismatch {
            left: spec.dim(),
            right: path.dim(),
        });
    }
    let rho0 = DensityOperator::from_valid(spec.reconstruct());
    let rep = cyclicity_check(&rho0, path, cyclicity_tol)?;
    if !rep.cyclic {
        return Err(PhaseError::NonCyclicPath {
            residual: rep.residual,
            tol: rep.tol,
        });
    }
    let mut frames = Vec::with_capacity(spec.levels());
    for (k, psi0) in spec.vectors().iter().enumerate() {
        let mut level = Vec::with_capacity(path.samples().len());
        level.push(psi0.clone());
        for (step, u) in path.samples().iter().enumerate().skip(1) {
            let raw = u * psi0;
            let overlap = level.last().unwrap().dotc(&raw);
            let mag = overlap.norm();
            if mag < STEP_OVERLAP_FLOOR {
                return Err(PhaseError::StepOverlapVanishes {
                    level: k,
                    step,
                    overlap: mag,
                });
            }
            // rotate the raw vector so the step overlap is real positive
            level.push(raw * (overlap.conj() / mag));
        }
        frames.push(level);
    }
    Ok(EigenframePath {
        tau: path.tau(),
        times: path.times().to_vec(),
        weights: spec.weights().to_vec(),
        frames,
        gauge_state: GaugeState::Transported,
    })
}

/// Close a transported frame into the canonical periodic gauge.
///
/// The closure phase β_k = arg⟨ψ_k(t_0)|ψ_k(t_N)⟩ is taken on the
/// nonpositive branch (−2π, 0] and spread linearly over the period:
/// ψ_k(t_i) ← e^{−iβ_k t_i/τ} ψ_k(t_i). Returns the new frame together
/// with the β_k.
pub fn periodize(frame: &EigenframePath) -> Result<(EigenframePath, Vec<f64>)> {
    if frame.gauge_state != GaugeState::Transported {
        return Err(PhaseError::NotTransportedGauge);
    }
    let mut betas = Vec::with_capacity(frame.levels());
    let mut new_frames = Vec::with_capacity(frame.levels());
    for (k, level) in frame.frames.iter().enumerate() {
        let closure = level[0].dotc(level.last().unwrap());
        if closure.norm() < CLOSURE_OVERLAP_FLOOR {
            return Err(PhaseError::ClosureUndefined {
                level: k,
                overlap: closure.norm(),
            });
        }
        let principal = principal_arg(closure);
        // nonpositive representative; tiny positive round-off stays put
        let beta = if principal > 1e-9 {
            principal - 2.0 * PI
        } else {
            principal
        };
        let new_level: Vec<CVec> = level
            .iter()
            .zip(&frame.times)
            .map(|(v, t)| v * Complex64::from_polar(1.0, -beta * t / frame.tau))
            .collect();
        betas.push(beta);
        new_frames.push(new_level);
    }
    Ok((
        EigenframePath {
            tau: frame.tau,
            times: frame.times.clone(),
            weights: frame.weights.clone(),
            frames: new_frames,
            gauge_state: GaugeState::Periodic,
        },
        betas,
    ))
}

/// Per-level gauge phase functions α_k(t_i) closing on integer windings:
/// α_k(t_N) − α_k(t_0) = 2π n_k.
#[derive(Debug, Clone)]
pub struct GaugeProfile {
    tau: f64,
    times: Vec<f64>,
    windings: Vec<i64>,
    /// alphas[k][i] = α_k(t_i)
    alphas: Vec<Vec<f64>>,
}

pub const PROFILE_CLOSURE_TOL: f64 = 1e-12;

impl GaugeProfile {
    /// The default shape α_k(t) = 2π n_k t/τ.
    pub fn linear(windings: &[i64], times: &[f64], tau: f64) -> Self {
        let alphas = windings
            .iter()
            .map(|n| {
                times
                    .iter()
                    .map(|t| 2.0 * PI * *n as f64 * t / tau)
                    .collect()
            })
            .collect();
        Self {
            tau,
            times: times.to_vec(),
            windings: windings.to_vec(),
            alphas,
        }
    }

    /// Arbitrary smooth profiles; each must close on its declared winding.
    pub fn from_values(
        windings: &[i64],
        times: &[f64],
        tau: f64,
        alphas: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if windings.len() != alphas.len() {
            return Err(PhaseError::LengthMismatch {
                left: windings.len(),
                right: alphas.len(),
            });
        }
        for (k, (n, alpha)) in windings.iter().zip(&alphas).enumerate() {
            if alpha.len() != times.len() {
                return Err(PhaseError::ProfileGridMismatch);
            }
            let gap = (alpha[alpha.len() - 1] - alpha[0] - 2.0 * PI * *n as f64).abs();
            if gap > PROFILE_CLOSURE_TOL {
                return Err(PhaseError::ProfileNotClosed { level: k, gap });
            }
        }
        Ok(Self {
            tau,
            times: times.to_vec(),
            windings: windings.to_vec(),
            alphas,
        })
    }

    pub fn windings(&self) -> &[i64] {
        &self.windings
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn alphas(&self) -> &[Vec<f64>] {
        &self.alphas
    }
}

/// ψ̃_k(t_i) = e^{−iα_k(t_i)} ψ_k(t_i); periodicity is preserved by the
/// 2π n_k closure of the profile.
pub fn apply_gauge_profile(
    frame: &EigenframePath,
    profile: &GaugeProfile,
) -> Result<EigenframePath> {
    if frame.gauge_state != GaugeState::Periodic {
        return Err(PhaseError::NotPeriodicGauge);
    }
    if profile.times.len() != frame.times.len() || profile.alphas.len() != frame.levels() {
        return Err(PhaseError::ProfileGridMismatch);
    }
    let frames = frame
        .frames
        .iter()
        .zip(&profile.alphas)
        .map(|(level, alpha)| {
            level
                .iter()
                .zip(alpha)
                .map(|(v, a)| v * Complex64::from_polar(1.0, -a))
                .collect()
        })
        .collect();
    Ok(EigenframePath {
        tau: frame.tau,
        times: frame.times.clone(),
        weights: frame.weights.clone(),
        frames,
        gauge_state: GaugeState::Periodic,
    })
}

/// The explicit commuting gauge unitary
/// V(t_i) = Σ_k e^{−iα_k(t_i)} |ψ_k(0)⟩⟨ψ_k(0)|, extended by the identity
/// on the dropped subspace. Right-multiplying the path by V leaves the
/// state trajectory unchanged.
pub fn build_commuting_gauge(
    spec: &SpectralDecomposition,
    profile: &GaugeProfile,
) -> Result<UnitaryPath> {
    if profile.alphas.len() != spec.levels() {
        return Err(PhaseError::ProfileGridMismatch);
    }
    let dim = spec.dim();
    let mut projector_sum = CMat::zeros(dim, dim);
    for v in spec.vectors() {
        projector_sum += v * v.adjoint();
    }
    let rest = identity(dim) - projector_sum;
    let samples = (0..profile.times.len())
        .map(|i| {
            let mut v_t = rest.clone();
            for (vk, alpha) in spec.vectors().iter().zip(&profile.alphas) {
                v_t += vk * vk.adjoint() * Complex64::from_polar(1.0, -alpha[i]);
            }
            v_t
        })
        .collect();
    Ok(UnitaryPath::from_parts(
        profile.tau,
        profile.times.clone(),
        samples,
    ))
}
