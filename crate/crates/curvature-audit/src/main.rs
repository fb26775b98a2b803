//! curvaudit: scan parametric hypersurfaces (or raw curvature spectra)
//! and audit the curvature inequalities that must hold on them.
//!
//! Exit codes: 0 all checks hold, 2 at least one check fails,
//! 3 scene/usage error, 4 runtime geometry errors only.

use clap::{Args, Parser, Subcommand};
use curvature_audit::chen::{self, ChenTuple};
use curvature_audit::scene::{OutputFormat, Scene};
use curvature_audit::verifiers::Tolerances;
use curvature_audit::{exit_code, run_scan, ShapeSpectrum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "curvaudit", version, about = "Hypersurface curvature-inequality auditor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Principal curvatures, comma-separated (e.g. -3,1,2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    lambdas: Vec<f64>,
    /// Ambient constant sectional curvature.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scene file and emit a report.
    Scan {
        scene: PathBuf,
        /// Output path (default: the scene's output.path, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format override: json or csv.
        #[arg(long)]
        format: Option<String>,
        /// Seed override for stochastic oracles.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: available parallelism).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Inequality tolerance override.
        #[arg(long)]
        tol: Option<f64>,
        /// Force oracle validation on.
        #[arg(long, overrides_with = "no_oracle")]
        oracle: bool,
        /// Force oracle validation off.
        #[arg(long)]
        no_oracle: bool,
    },
    /// One-shot inequality audit of a single spectrum.
    Check {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the pointwise invariants of a single spectrum.
    Invariants {
        #[command(flatten)]
        spectrum: SpectrumArgs,
    },
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Evaluate one Chen invariant delta(t).
    Delta {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Tuple parts, comma-separated; empty string for the empty tuple.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "2")]
        tuple: Vec<usize>,
        /// Cross-check against the Grassmannian descent oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List built-in surface names.
    List,
}

fn scene_fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(3)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Scan {
            scene,
            out,
            format,
            seed,
            workers,
            tol,
            oracle,
            no_oracle,
        } => {
            let mut scene: Scene = match curvature_audit::load_scene(&scene) {
                Ok(s) => s,
                Err(e) => return scene_fail(e),
            };
            if let Some(seed) = seed {
                scene.seed = seed;
            }
            if let Some(tol) = tol {
                scene.tolerances.tol = Some(tol);
            }
            if oracle {
                scene.oracle_validation = true;
            }
            if no_oracle {
                scene.oracle_validation = false;
            }
            let fmt = match format.as_deref() {
                None => scene.output.format,
                Some("json") => OutputFormat::Json,
                Some("csv") => OutputFormat::Csv,
                Some(other) => return scene_fail(format!("unknown format {other:?}")),
            };
            let report = match run_scan(&scene, workers) {
                Ok(r) => r,
                Err(e) => return scene_fail(e),
            };
            let path = out.or_else(|| scene.output.path.clone().map(PathBuf::from));
            if let Err(e) = report.emit(fmt, path.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(exit_code(&report) as u8)
        }
        Command::Check { spectrum, tol } => {
            let scene_json = serde_json::json!({
                "mode": "spectrum",
                "spectra": [{"lambdas": spectrum.lambdas, "c": spectrum.c}],
            });
            let mut scene: Scene = match curvature_audit::parse_scene(&scene_json.to_string()) {
                Ok(s) => s,
                Err(e) => return scene_fail(e),
            };
            if let Some(tol) = tol {
                scene.tolerances.tol = Some(tol);
            }
            let report = match run_scan(&scene, 1) {
                Ok(r) => r,
                Err(e) => return scene_fail(e),
            };
            for c in &report.points[0].checks {
                println!(
                    "{:<24} {:>16} lhs={:<22} rhs={:<22} slack={}{}",
                    c.name,
                    format!("{:?}", c.verdict),
                    c.lhs,
                    c.rhs,
                    c.slack,
                    if c.equality { "  [equality]" } else { "" }
                );
            }
            ExitCode::from(exit_code(&report) as u8)
        }
        Command::Invariants { spectrum } => {
            let s = match ShapeSpectrum::new(spectrum.lambdas, spectrum.c, "cli") {
                Ok(s) => s,
                Err(e) => return scene_fail(e),
            };
            let inv = curvature_audit::invariants(&s);
            println!("{}", serde_json::to_string_pretty(&inv).unwrap());
            ExitCode::SUCCESS
        }
        Command::Catalog { command } => match command {
            CatalogCommand::List => {
                for name in curvature_audit::catalog::CATALOG_NAMES {
                    println!("{name}");
                }
                ExitCode::SUCCESS
            }
        },
        Command::Delta {
            spectrum,
            tuple,
            oracle,
            seed,
        } => {
            let s = match ShapeSpectrum::new(spectrum.lambdas, spectrum.c, "cli") {
                Ok(s) => s,
                Err(e) => return scene_fail(e),
            };
            let t = match ChenTuple::new(tuple, s.n()) {
                Ok(t) => t,
                Err(e) => return scene_fail(e),
            };
            let result = if oracle {
                chen::delta_invariant_validated(&s, &t, 64, 5000, seed)
            } else {
                chen::delta_invariant(&s, &t)
            };
            match result {
                Ok(r) => {
                    println!("delta{} = {}", t.label(), r.value);
                    if let (Some(v), Some(g)) = (r.oracle_value, r.oracle_gap) {
                        println!("oracle = {v}  gap = {g:e}");
                    }
                    let tols = Tolerances::default();
                    match curvature_audit::verifiers::check_fundamental(&s, &t, s.c, &tols) {
                        Ok(c) => println!(
                            "bound  = {} ({:?}{})",
                            c.rhs,
                            c.verdict,
                            if c.equality { ", equality" } else { "" }
                        ),
                        Err(e) => eprintln!("bound unavailable: {e}"),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => scene_fail(e),
            }
        }
    }
}
