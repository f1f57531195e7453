//! Batch CLI over scenario files: phase reports, gauge-dependence demos,
//! and interferogram export.

use clap::{Args, Parser, Subcommand};
use phase_core::error::PhaseError;
use phase_core::interferometry::{render_svg, write_csv};
use phase_core::scenario::{
    gauge_demo, parse_scenario_file, random_windings, run_interferogram, run_report, Scenario,
    DEFAULT_GAUGE_TOL,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "phase",
    version,
    about = "Cyclic mixed-state geometric phases: reports, gauge demos, interferograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the phase report for a scenario and emit it as JSON.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        steps: StepsArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the weighted phase sum and (γ, 𝒱) across gauge windings.
    GaugeDemo {
        scenario: PathBuf,
        /// Comma-separated windings, one per retained level.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true,
              conflicts_with_all = ["random", "seed"])]
        windings: Option<Vec<i64>>,
        /// Number of random winding vectors to try.
        #[arg(long)]
        random: Option<usize>,
        /// Seed for --random.
        #[arg(long, default_value_t = 0, requires = "random")]
        seed: u64,
        /// Shift tolerance for the PASS verdict.
        #[arg(long, default_value_t = DEFAULT_GAUGE_TOL)]
        tol: f64,
        #[command(flatten)]
        steps: StepsArg,
        /// Write the comparison report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the interference profile, fit (γ̂, 𝒱̂), and export CSV.
    Interferogram {
        scenario: PathBuf,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG line plot.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        steps: StepsArg,
    },
}

#[derive(Args)]
struct StepsArg {
    /// Time-grid steps (default from scenario, then PHASE_DEFAULT_STEPS, then 1024).
    #[arg(long)]
    steps: Option<usize>,
}

impl StepsArg {
    /// Flag beats scenario field beats environment beats built-in default.
    fn resolve(&self, scenario: &Scenario) -> Option<usize> {
        self.steps.or(scenario.steps).or_else(|| {
            std::env::var("PHASE_DEFAULT_STEPS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
    }
}

fn write_output(out: &Option<PathBuf>, body: &str) -> Result<(), PhaseError> {
    match out {
        None => {
            println!("{body}");
            Ok(())
        }
        Some(path) => std::fs::write(path, body).map_err(|source| PhaseError::Io {
            context: format!("writing {}", path.display()),
            source,
        }),
    }
}

fn run(cli: Cli) -> Result<(), PhaseError> {
    match cli.command {
        Command::Run {
            scenario,
            steps,
            out,
        } => {
            let s = parse_scenario_file(&scenario)?;
            let report = run_report(&s, steps.resolve(&s))?;
            let body = serde_json::to_string_pretty(&report).expect("report serializes");
            write_output(&out, &body)
        }
        Command::GaugeDemo {
            scenario,
            windings,
            random,
            seed,
            tol,
            steps,
            out,
        } => {
            let s = parse_scenario_file(&scenario)?;
            let steps = steps.resolve(&s);
            let winding_sets = match (windings, random) {
                (Some(w), None) => vec![w],
                (None, Some(count)) => {
                    // level count comes from the base report
                    let base = run_report(&s, steps)?;
                    random_windings(base.levels.len(), count, seed)
                }
                _ => {
                    return Err(PhaseError::Schema(
                        "pass exactly one of --windings or --random".into(),
                    ))
                }
            };
            let report = gauge_demo(&s, &winding_sets, tol, steps)?;
            for (i, t) in report.trials.iter().enumerate() {
                let verdict = if t.pass { "PASS" } else { "FAIL" };
                eprintln!(
                    "trial {i:3} windings {:?}: shift {:+.9} predicted {:+.9} \
                     (err {:.2e}), factor distance {:.6}, (gamma,V) drift \
                     ({:.2e}, {:.2e}) -> {verdict}",
                    t.windings,
                    t.measured_shift,
                    t.predicted_shift,
                    t.shift_error,
                    t.sum_factor_distance,
                    t.gamma_distance,
                    t.visibility_distance,
                );
            }
            let body = serde_json::to_string_pretty(&report).expect("report serializes");
            write_output(&out, &body)
        }
        Command::Interferogram {
            scenario,
            out,
            svg,
            steps,
        } => {
            let s = parse_scenario_file(&scenario)?;
            let run = run_interferogram(&s, steps.resolve(&s))?;
            let mut csv = Vec::new();
            write_csv(&run.interferogram, &mut csv).expect("in-memory write");
            std::fs::write(&out, csv).map_err(|source| PhaseError::Io {
                context: format!("writing {}", out.display()),
                source,
            })?;
            if let Some(svg_path) = svg {
                std::fs::write(&svg_path, render_svg(&run.interferogram)).map_err(|source| {
                    PhaseError::Io {
                        context: format!("writing {}", svg_path.display()),
                        source,
                    }
                })?;
            }
            let summary = serde_json::json!({
                "name": run.report.name,
                "csv": out.display().to_string(),
                "gamma": run.report.gamma,
                "visibility": run.report.visibility,
                "fit": run.fit,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summary serializes")
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
