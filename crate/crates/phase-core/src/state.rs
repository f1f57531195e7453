//! Density operators, discretized unitary evolutions, and Hamiltonian
//! schedules. Validation tolerances follow the crate-wide defaults; all
//! values are immutable after construction.

use crate::error::{PhaseError, Result};
use crate::linalg::{
    commutator_norm, frob, hermitian_eigen, hermiticity_residual, identity, unitarity_residual,
    CMat,
};
use num_complex::Complex64;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-12;
pub const UNITARITY_TOL: f64 = 1e-10;
/// Default absolute Frobenius tolerance for the cyclicity commutator.
pub const CYCLICITY_TOL: f64 = 1e-9;

/// A Hermitian, positive semidefinite, unit-trace matrix: the initial state.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    mat: CMat,
}

impl DensityOperator {
    /// Validate and construct. The Hermitian part is taken before checking,
    /// so inputs perturbed at round-off level by text round-trips pass.
    pub fn make(matrix: CMat) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(PhaseError::DimensionMismatch {
                left: dim,
                right: matrix.ncols(),
            });
        }
        let residual = hermiticity_residual(&matrix);
        if residual > HERMITICITY_TOL * frob(&matrix).max(1.0) {
            return Err(PhaseError::NotHermitian { residual });
        }
        let mat = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(PhaseError::TraceNotOne { trace: trace.re });
        }
        let (vals, _) = hermitian_eigen(&mat);
        let min_eigenvalue = vals.last().copied().unwrap_or(0.0);
        if min_eigenvalue < -POSITIVITY_TOL {
            return Err(PhaseError::NotPositive { min_eigenvalue });
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_valid(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.mat).0
    }
}

/// Time-ordered samples of U(t) over [0, τ], starting at the identity.
///
/// The grid is monotone and uniform within each Hamiltonian segment; for
/// sample-based construction it is globally uniform.
#[derive(Debug, Clone)]
pub struct UnitaryPath {
    tau: f64,
    times: Vec<f64>,
    samples: Vec<CMat>,
}

impl UnitaryPath {
    /// Build from explicit samples on a uniform grid. The first sample must
    /// be the identity within the unitarity tolerance; it is snapped to the
    /// exact identity.
    pub fn from_samples(tau: f64, mut samples: Vec<CMat>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(PhaseError::IndexOutOfRange {
                index: 2,
                len: samples.len(),
            });
        }
        let dim = samples[0].nrows();
        for u in &samples {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(PhaseError::DimensionMismatch {
                    left: dim,
                    right: u.nrows(),
                });
            }
            let residual = unitarity_residual(u);
            if residual > UNITARITY_TOL {
                return Err(PhaseError::NotUnitary { residual });
            }
        }
        let start_residual = frob(&(&samples[0] - identity(dim)));
        if start_residual > UNITARITY_TOL {
            return Err(PhaseError::PathStartNotIdentity {
                residual: start_residual,
            });
        }
        samples[0] = identity(dim);
        let n = samples.len() - 1;
        let times = (0..=n).map(|i| tau * i as f64 / n as f64).collect();
        Ok(Self {
            tau,
            times,
            samples,
        })
    }

    pub(crate) fn from_parts(tau: f64, times: Vec<f64>, samples: Vec<CMat>) -> Self {
        Self {
            tau,
            times,
            samples,
        }
    }

    pub fn dim(&self) -> usize {
        self.samples[0].nrows()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Number of grid steps N; the grid has N + 1 points.
    pub fn n_steps(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sample(&self, i: usize) -> &CMat {
        &self.samples[i]
    }

    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    pub fn final_unitary(&self) -> &CMat {
        self.samples.last().unwrap()
    }
}

/// Piecewise-constant Hermitian generators with positive durations.
#[derive(Debug, Clone)]
pub struct HamiltonianSchedule {
    segments: Vec<(CMat, f64)>,
}

impl HamiltonianSchedule {
    pub fn new(segments: Vec<(CMat, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(PhaseError::Schema("schedule has no segments".into()));
        }
        let dim = segments[0].0.nrows();
        for (h, dt) in &segments {
            if h.nrows() != dim || h.ncols() != dim {
                return Err(PhaseError::DimensionMismatch {
                    left: dim,
                    right: h.nrows(),
                });
            }
            let residual = hermiticity_residual(h);
            if residual > HERMITICITY_TOL * frob(h).max(1.0) {
                return Err(PhaseError::NotHermitian { residual });
            }
            if !(*dt > 0.0) {
                return Err(PhaseError::Schema(format!(
                    "segment duration must be positive, got {dt}"
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn dim(&self) -> usize {
        self.segments[0].0.nrows()
    }

    pub fn tau(&self) -> f64 {
        self.segments.iter().map(|(_, dt)| dt).sum()
    }

    pub fn segments(&self) -> &[(CMat, f64)] {
        &self.segments
    }
}

/// Discretize the evolution generated by a schedule. Each segment gets
/// `max(1, ceil(Δt · steps_per_unit))` uniform steps, so every segment
/// boundary lies on a grid point; within a segment the samples are exact
/// matrix exponentials of the Hermitian generator.
pub fn path_from_hamiltonian(
    schedule: &HamiltonianSchedule,
    steps_per_unit: f64,
) -> Result<UnitaryPath> {
    let dim = schedule.dim();
    let mut times = vec![0.0];
    let mut samples = vec![identity(dim)];
    let mut seg_start_time = 0.0;
    for (h, dt) in schedule.segments() {
        let m = ((dt * steps_per_unit).ceil() as usize).max(1);
        let (vals, vecs) = hermitian_eigen(h);
        let u_start = samples.last().unwrap().clone();
        for i in 1..=m {
            let local_t = dt * i as f64 / m as f64;
            // U(t) = Σ_k e^{−iλ_k (t − t_seg)} |v_k⟩⟨v_k| · U(t_seg)
            let mut step = CMat::zeros(dim, dim);
            for (lambda, v) in vals.iter().zip(&vecs) {
                step += v * v.adjoint() * Complex64::from_polar(1.0, -lambda * local_t);
            }
            times.push(seg_start_time + local_t);
            samples.push(step * &u_start);
        }
        seg_start_time += dt;
    }
    if samples.len() < 3 {
        // N ≥ 2: split the single step of a one-segment schedule
        return path_from_hamiltonian(schedule, 2.0 / schedule.tau());
    }
    Ok(UnitaryPath::from_parts(seg_start_time, times, samples))
}

/// Like [`path_from_hamiltonian`] but aiming at a total step count across
/// the whole schedule.
pub fn path_with_total_steps(
    schedule: &HamiltonianSchedule,
    total_steps: usize,
) -> Result<UnitaryPath> {
    let spu = total_steps.max(2) as f64 / schedule.tau();
    path_from_hamiltonian(schedule, spu)
}

/// ρ(t_i) = U(t_i) ρ(0) U†(t_i).
pub fn evolve(rho0: &DensityOperator, path: &UnitaryPath, i: usize) -> Result<DensityOperator> {
    if rho0.dim() != path.dim() {
        return Err(PhaseError::DimensionMismatch {
            left: rho0.dim(),
            right: path.dim(),
        });
    }
    if i >= path.samples.len() {
        return Err(PhaseError::IndexOutOfRange {
            index: i,
            len: path.samples.len(),
        });
    }
    let u = &path.samples[i];
    Ok(DensityOperator::from_valid(u * rho0.matrix() * u.adjoint()))
}

/// Outcome of the cyclicity test ‖[ρ(0), U(τ)]‖_F ≤ tol.
#[derive(Debug, Clone, Copy)]
pub struct CyclicityReport {
    pub cyclic: bool,
    pub residual: f64,
    pub tol: f64,
}

pub fn cyclicity_check(
    rho0: &DensityOperator,
    path: &UnitaryPath,
    tol: f64,
) -> Result<CyclicityReport> {
    if rho0.dim() != path.dim() {
        return Err(PhaseError::DimensionMismatch {
            left: rho0.dim(),
            right: path.dim(),
        });
    }
    let residual = commutator_norm(rho0.matrix(), path.final_unitary());
    Ok(CyclicityReport {
        cyclic: residual <= tol,
        residual,
        tol,
    })
}

/// Pointwise product a(t_i)·b(t_i) on a shared grid; forms U(t)V(t).
pub fn compose_paths(a: &UnitaryPath, b: &UnitaryPath) -> Result<UnitaryPath> {
    if a.dim() != b.dim() {
        return Err(PhaseError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if a.times.len() != b.times.len()
        || a.times
            .iter()
            .zip(&b.times)
            .any(|(x, y)| (x - y).abs() > 1e-12 * a.tau.max(1.0))
    {
        return Err(PhaseError::GridMismatch);
    }
    let samples = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| x * y)
        .collect();
    Ok(UnitaryPath::from_parts(a.tau, a.times.clone(), samples))
}
