//! Error type shared across the crate.

use thiserror::Error;

/// Every failure mode of the library, with the measured residual where one exists.
#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("trace is not one (tr = {trace})")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("path must start at the identity (residual {residual:.3e})")]
    PathStartNotIdentity { residual: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("grid index {index} out of range (grid has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("time grids do not match")]
    GridMismatch,

    #[error("evolution is not cyclic: commutator residual {residual:.3e} exceeds {tol:.3e}")]
    NonCyclicPath { residual: f64, tol: f64 },

    #[error("step overlap magnitude {overlap:.3e} at step {step} of level {level} is too small; refine the grid")]
    StepOverlapVanishes {
        level: usize,
        step: usize,
        overlap: f64,
    },

    #[error("closure overlap magnitude {overlap:.3e} on level {level} is too small to define a closure phase")]
    ClosureUndefined { level: usize, overlap: f64 },

    #[error("gauge profile grid does not match the frame grid")]
    ProfileGridMismatch,

    #[error("gauge profile on level {level} does not close on an integer winding (gap {gap:.3e})")]
    ProfileNotClosed { level: usize, gap: f64 },

    #[error("degenerate spectrum: retained weights {w1} and {w2} are closer than {gap_tol:.3e}")]
    DegenerateSpectrum { w1: f64, w2: f64, gap_tol: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("frame is not in the periodic gauge")]
    NotPeriodicGauge,

    #[error("frame is not in the transported gauge")]
    NotTransportedGauge,

    #[error("too few interferogram samples: {got} (need at least 3)")]
    TooFewSamples { got: usize },

    #[error("degenerate interferogram design: phase shifts do not separate")]
    DegenerateDesign,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl PhaseError {
    /// Process exit code for the CLI: 2 validation, 3 non-cyclic, 4 degenerate
    /// spectrum, 5 I/O.
    pub fn exit_code(&self) -> i32 {
        use PhaseError::*;
        match self {
            NonCyclicPath { .. } => 3,
            DegenerateSpectrum { .. } => 4,
            Io { .. } => 5,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, PhaseError>;
