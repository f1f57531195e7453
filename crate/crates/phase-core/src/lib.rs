//! Cyclic mixed-state geometric phases for unitarily evolving density
//! operators.
//!
//! The crate tracks a density operator ρ(t) = U(t)ρ(0)U†(t) along a
//! discretized unitary path, builds periodic eigenvector frames for its
//! spectral levels, and computes the per-level cyclic geometric phases
//! φ_g^k, the eigenvalue-weighted sum φ_g = Σ_k w_k φ_g^k, and the
//! interferometric pair (γ, 𝒱) with 𝒱e^{iγ} = Σ_k w_k e^{iφ_g^k}.
//!
//! Under an eigenvector gauge transformation with integer windings n_k the
//! per-level phases shift by 2π n_k, so the weighted sum moves by
//! 2π Σ_k w_k n_k — generally not a multiple of 2π — while (γ, 𝒱) is
//! untouched. The [`scenario`] module and the `phase` CLI turn that
//! contrast into reproducible reports, and [`interferometry`] simulates
//! the two-arm fringe 1 + 𝒱 cos(χ − γ) from which the pair is measured.

pub mod error;
pub mod interferometry;
pub mod linalg;
pub mod phases;
pub mod scenario;
pub mod spectral;
pub mod state;

pub use error::{PhaseError, Result};
pub use phases::{GaugeDescriptor, InterferometricPhase, LevelReport, PhaseReport};
pub use scenario::{GaugeDemoReport, GaugeTrial, Scenario};
pub use state::{DensityOperator, HamiltonianSchedule, UnitaryPath};
