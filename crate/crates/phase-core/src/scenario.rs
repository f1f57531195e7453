//! Scenario files and the batch pipeline behind the CLI: parse, validate,
//! check cyclicity, build frames, compute phases, run gauge comparisons,
//! and sample interferograms.
//!
//! Scenarios are JSON; complex entries are `[re, im]` pairs, angles are
//! radians throughout.

use crate::error::{PhaseError, Result};
use crate::interferometry::{fit_phase_visibility, sample_interferogram, FringeFit, Interferogram};
use crate::linalg::{wrap_to_pi, CMat};
use crate::phases::{
    connection_phase, dynamical_phase, interferometric_phase, mod_2pi_distance,
    predicted_gauge_shift, total_phase, weighted_phase_sum, GaugeDescriptor, LevelReport,
    PhaseReport,
};
use crate::spectral::{
    apply_gauge_profile, decompose_initial, eigenframe_along_path, periodize, EigenframePath,
    GaugeProfile, SpectralDecomposition, GAP_TOL, WEIGHT_FLOOR,
};
use crate::state::{
    cyclicity_check, path_with_total_steps, DensityOperator, HamiltonianSchedule, UnitaryPath,
    CYCLICITY_TOL,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_STEPS: usize = 1024;
pub const DEFAULT_INTERFEROGRAM_SAMPLES: usize = 360;
/// Default tolerance for the measured-vs-predicted shift in gauge demos.
pub const DEFAULT_GAUGE_TOL: f64 = 1e-6;

/// One batch scenario as parsed from JSON.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Initial density matrix, rows of [re, im] entries.
    pub rho0: Vec<Vec<[f64; 2]>>,
    pub evolution: Evolution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interferogram: Option<InterferogramSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Evolution {
    Hamiltonian {
        segments: Vec<Segment>,
    },
    Samples {
        tau: f64,
        unitaries: Vec<Vec<Vec<[f64; 2]>>>,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    #[serde(rename = "H")]
    pub h: Vec<Vec<[f64; 2]>>,
    pub dt: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    pub windings: Vec<i64>,
    #[serde(default = "linear_profile")]
    pub profile: String,
}

fn linear_profile() -> String {
    "linear".to_string()
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InterferogramSpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    DEFAULT_INTERFEROGRAM_SAMPLES
}

impl Default for InterferogramSpec {
    fn default() -> Self {
        Self {
            samples: DEFAULT_INTERFEROGRAM_SAMPLES,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

fn to_cmat(rows: &[Vec<[f64; 2]>], what: &str) -> Result<CMat> {
    let dim = rows.len();
    if dim == 0 {
        return Err(PhaseError::Schema(format!("{what}: empty matrix")));
    }
    let mut mat = CMat::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(PhaseError::Schema(format!(
                "{what}: row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(PhaseError::Schema(format!(
                    "{what}: entry ({i},{j}) is not finite"
                )));
            }
            mat[(i, j)] = Complex64::new(*re, *im);
        }
    }
    Ok(mat)
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| {
        if e.is_syntax() || e.is_eof() {
            PhaseError::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        } else {
            PhaseError::Schema(e.to_string())
        }
    })?;
    // cross-field dimension checks happen here so the CLI can fail fast
    let dim = scenario.rho0.len();
    to_cmat(&scenario.rho0, "rho0")?;
    match &scenario.evolution {
        Evolution::Hamiltonian { segments } => {
            if segments.is_empty() {
                return Err(PhaseError::Schema("evolution.segments is empty".into()));
            }
            for (j, seg) in segments.iter().enumerate() {
                let h = to_cmat(&seg.h, &format!("segments[{j}].H"))?;
                if h.nrows() != dim {
                    return Err(PhaseError::DimensionMismatch {
                        left: h.nrows(),
                        right: dim,
                    });
                }
                if !seg.dt.is_finite() || seg.dt <= 0.0 {
                    return Err(PhaseError::Schema(format!(
                        "segments[{j}].dt must be positive and finite"
                    )));
                }
            }
        }
        Evolution::Samples { tau, unitaries } => {
            if !tau.is_finite() || *tau <= 0.0 {
                return Err(PhaseError::Schema("tau must be positive and finite".into()));
            }
            for (j, u) in unitaries.iter().enumerate() {
                let m = to_cmat(u, &format!("unitaries[{j}]"))?;
                if m.nrows() != dim {
                    return Err(PhaseError::DimensionMismatch {
                        left: m.nrows(),
                        right: dim,
                    });
                }
            }
        }
    }
    Ok(scenario)
}

pub fn parse_scenario_file(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| PhaseError::Io {
        context: format!("reading scenario {}", path.display()),
        source,
    })?;
    parse_scenario(&text)
}

fn resolve_steps(scenario: &Scenario, steps_override: Option<usize>) -> usize {
    steps_override
        .or(scenario.steps)
        .unwrap_or(DEFAULT_STEPS)
        .max(2)
}

/// Build the validated state and path for a scenario.
pub fn build_inputs(
    scenario: &Scenario,
    steps_override: Option<usize>,
) -> Result<(DensityOperator, UnitaryPath, Option<HamiltonianSchedule>)> {
    let rho0 = DensityOperator::make(to_cmat(&scenario.rho0, "rho0")?)?;
    match &scenario.evolution {
        Evolution::Hamiltonian { segments } => {
            let segs = segments
                .iter()
                .map(|s| Ok((to_cmat(&s.h, "H")?, s.dt)))
                .collect::<Result<Vec<_>>>()?;
            let schedule = HamiltonianSchedule::new(segs)?;
            let path = path_with_total_steps(&schedule, resolve_steps(scenario, steps_override))?;
            Ok((rho0, path, Some(schedule)))
        }
        Evolution::Samples { tau, unitaries } => {
            let samples = unitaries
                .iter()
                .map(|u| to_cmat(u, "unitary"))
                .collect::<Result<Vec<_>>>()?;
            let path = UnitaryPath::from_samples(*tau, samples)?;
            Ok((rho0, path, None))
        }
    }
}

struct Pipeline {
    path: UnitaryPath,
    schedule: Option<HamiltonianSchedule>,
    spec: SpectralDecomposition,
    periodic: EigenframePath,
    cyclicity_residual: f64,
}

fn run_pipeline(scenario: &Scenario, steps_override: Option<usize>) -> Result<Pipeline> {
    let (rho0, path, schedule) = build_inputs(scenario, steps_override)?;
    let cyc = cyclicity_check(&rho0, &path, CYCLICITY_TOL)?;
    if !cyc.cyclic {
        return Err(PhaseError::NonCyclicPath {
            residual: cyc.residual,
            tol: cyc.tol,
        });
    }
    let spec = decompose_initial(&rho0, WEIGHT_FLOOR, GAP_TOL)?;
    let frame = eigenframe_along_path(&spec, &path, CYCLICITY_TOL)?;
    let (periodic, _betas) = periodize(&frame)?;
    Ok(Pipeline {
        path,
        schedule,
        spec,
        periodic,
        cyclicity_residual: cyc.residual,
    })
}

fn report_from_frame(
    scenario: &Scenario,
    pipe: &Pipeline,
    frame: &EigenframePath,
    gauge: GaugeDescriptor,
) -> Result<PhaseReport> {
    let weights = pipe.spec.weights().to_vec();
    let phases: Vec<f64> = (0..frame.levels())
        .map(|k| connection_phase(frame, k))
        .collect::<Result<_>>()?;
    let weighted_sum = weighted_phase_sum(&weights, &phases)?;
    let pair = interferometric_phase(&weights, &phases)?;
    let mut levels = Vec::with_capacity(weights.len());
    for (k, (w, phi)) in weights.iter().zip(&phases).enumerate() {
        let (dynamical, total, decomposition_residual) = match &pipe.schedule {
            Some(schedule) => {
                let delta = dynamical_phase(schedule, frame, k)?;
                let theta = total_phase(&pipe.path, &pipe.spec, k)?;
                (
                    Some(delta),
                    Some(theta),
                    Some(mod_2pi_distance(theta - phi - delta)),
                )
            }
            None => (None, None, None),
        };
        levels.push(LevelReport {
            weight: *w,
            phase: *phi,
            phase_mod_2pi: wrap_to_pi(*phi),
            dynamical,
            total,
            decomposition_residual,
        });
    }
    Ok(PhaseReport {
        name: scenario.name.clone(),
        grid_steps: pipe.path.n_steps(),
        tau: pipe.path.tau(),
        cyclicity_residual: pipe.cyclicity_residual,
        gauge,
        levels,
        weighted_sum,
        weighted_sum_mod_2pi: wrap_to_pi(weighted_sum),
        gamma: pair.gamma,
        visibility: pair.visibility,
        visibility_node: pair.is_node(),
    })
}

/// Run the full pipeline and produce a serializable report. Honors the
/// scenario's optional gauge block; without one the canonical gauge is
/// reported.
pub fn run_report(scenario: &Scenario, steps_override: Option<usize>) -> Result<PhaseReport> {
    let pipe = run_pipeline(scenario, steps_override)?;
    match &scenario.gauge {
        None => report_from_frame(scenario, &pipe, &pipe.periodic, GaugeDescriptor::Canonical),
        Some(g) => {
            if g.profile != "linear" {
                return Err(PhaseError::Schema(format!(
                    "unsupported gauge profile {:?}",
                    g.profile
                )));
            }
            if g.windings.len() != pipe.spec.levels() {
                return Err(PhaseError::LengthMismatch {
                    left: g.windings.len(),
                    right: pipe.spec.levels(),
                });
            }
            let profile =
                GaugeProfile::linear(&g.windings, pipe.periodic.times(), pipe.periodic.tau());
            let gauged = apply_gauge_profile(&pipe.periodic, &profile)?;
            report_from_frame(
                scenario,
                &pipe,
                &gauged,
                GaugeDescriptor::Profile {
                    windings: g.windings.clone(),
                    shape: g.profile.clone(),
                },
            )
        }
    }
}

/// One gauge-comparison trial of [`gauge_demo`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaugeTrial {
    pub windings: Vec<i64>,
    pub sum_before: f64,
    pub sum_after: f64,
    pub measured_shift: f64,
    pub predicted_shift: f64,
    pub shift_error: f64,
    /// |e^{iφ̃_g} − e^{iφ_g}| — nonzero exactly when the weighted sum is
    /// gauge dependent for these windings.
    pub sum_factor_distance: f64,
    /// max_k |e^{iφ̃_k} − e^{iφ_k}| — always ~0.
    pub max_level_factor_distance: f64,
    pub gamma_distance: f64,
    pub visibility_distance: f64,
    pub pass: bool,
}

/// Comparison report exhibiting the gauge dependence of the weighted
/// phase sum against the invariance of (γ, 𝒱).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaugeDemoReport {
    pub name: String,
    pub grid_steps: usize,
    pub weights: Vec<f64>,
    pub tolerance: f64,
    pub trials: Vec<GaugeTrial>,
    pub all_pass: bool,
}

fn factor_distance(a: f64, b: f64) -> f64 {
    (Complex64::from_polar(1.0, a) - Complex64::from_polar(1.0, b)).norm()
}

/// Run one comparison per winding vector against the canonical gauge.
pub fn gauge_demo(
    scenario: &Scenario,
    winding_sets: &[Vec<i64>],
    tolerance: f64,
    steps_override: Option<usize>,
) -> Result<GaugeDemoReport> {
    let pipe = run_pipeline(scenario, steps_override)?;
    let weights = pipe.spec.weights().to_vec();
    let base_phases: Vec<f64> = (0..pipe.periodic.levels())
        .map(|k| connection_phase(&pipe.periodic, k))
        .collect::<Result<_>>()?;
    let base_sum = weighted_phase_sum(&weights, &base_phases)?;
    let base_pair = interferometric_phase(&weights, &base_phases)?;
    let mut trials = Vec::with_capacity(winding_sets.len());
    for windings in winding_sets {
        if windings.len() != weights.len() {
            return Err(PhaseError::LengthMismatch {
                left: windings.len(),
                right: weights.len(),
            });
        }
        let profile = GaugeProfile::linear(windings, pipe.periodic.times(), pipe.periodic.tau());
        let gauged = apply_gauge_profile(&pipe.periodic, &profile)?;
        let phases: Vec<f64> = (0..gauged.levels())
            .map(|k| connection_phase(&gauged, k))
            .collect::<Result<_>>()?;
        let sum = weighted_phase_sum(&weights, &phases)?;
        let pair = interferometric_phase(&weights, &phases)?;
        let measured_shift = sum - base_sum;
        let predicted_shift = predicted_gauge_shift(&weights, windings)?;
        let shift_error = (measured_shift - predicted_shift).abs();
        let sum_factor_distance = factor_distance(sum, base_sum);
        let max_level_factor_distance = phases
            .iter()
            .zip(&base_phases)
            .map(|(a, b)| factor_distance(*a, *b))
            .fold(0.0, f64::max);
        let gamma_distance = match (pair.gamma, base_pair.gamma) {
            (Some(a), Some(b)) => mod_2pi_distance(a - b),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        };
        let visibility_distance = (pair.visibility - base_pair.visibility).abs();
        // the factor e^{iφ_g} must move whenever Σ w_k n_k is not an integer
        let weighted_winding: f64 = weights
            .iter()
            .zip(windings)
            .map(|(w, n)| w * *n as f64)
            .sum();
        let nonint = (weighted_winding - weighted_winding.round()).abs();
        let dependence_witnessed = nonint <= 1e-9 || sum_factor_distance > tolerance;
        let pass = shift_error <= tolerance
            && gamma_distance <= 1e-9
            && visibility_distance <= 1e-9
            && max_level_factor_distance <= tolerance
            && dependence_witnessed;
        trials.push(GaugeTrial {
            windings: windings.clone(),
            sum_before: base_sum,
            sum_after: sum,
            measured_shift,
            predicted_shift,
            shift_error,
            sum_factor_distance,
            max_level_factor_distance,
            gamma_distance,
            visibility_distance,
            pass,
        });
    }
    let all_pass = trials.iter().all(|t| t.pass);
    Ok(GaugeDemoReport {
        name: scenario.name.clone(),
        grid_steps: pipe.path.n_steps(),
        weights,
        tolerance,
        trials,
        all_pass,
    })
}

/// Deterministic random winding vectors in {−3,…,3}, one ChaCha stream
/// per trial so sweeps can parallelize without reordering results.
pub fn random_windings(levels: usize, count: usize, seed: u64) -> Vec<Vec<i64>> {
    (0..count)
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            (0..levels).map(|_| rng.gen_range(-3..=3)).collect()
        })
        .collect()
}

/// Interferogram run: report, sampled fringe, and its first-harmonic fit.
#[derive(Debug)]
pub struct InterferogramRun {
    pub report: PhaseReport,
    pub interferogram: Interferogram,
    pub fit: FringeFit,
}

pub fn run_interferogram(
    scenario: &Scenario,
    steps_override: Option<usize>,
) -> Result<InterferogramRun> {
    let report = run_report(scenario, steps_override)?;
    let spec = scenario.interferogram.clone().unwrap_or_default();
    let interferogram = sample_interferogram(
        &report.weights(),
        &report.phases(),
        spec.samples,
        spec.noise_sigma,
        spec.seed,
    )?;
    let fit = fit_phase_visibility(&interferogram)?;
    Ok(InterferogramRun {
        report,
        interferogram,
        fit,
    })
}
