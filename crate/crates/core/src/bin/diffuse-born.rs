use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use diffuse_born::geometry::Medium;
use diffuse_born::green::born_bound;
use diffuse_born::scenario::{error_report, exit_code, run_file, VERSION};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "diffuse-born",
    about = "Born-series convergence and forward solves for diffuse light"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads for dense factorizations.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Born convergence threshold for a ball of radius a.
    Bound {
        /// Radius in diffuse wavelengths.
        #[arg(long)]
        a: f64,
        /// Optional contrast to test against the threshold.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
        } => {
            if let Some(k) = threads {
                let par = if k <= 1 {
                    faer::Par::Seq
                } else {
                    faer::Par::rayon(k)
                };
                faer::set_global_parallelism(par);
            }
            let outcome = run_file(&config, &out);
            let code = exit_code(&outcome);
            match outcome {
                Ok(summary) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&summary).unwrap_or_default()
                    );
                }
                Err(e) => {
                    let report = error_report(&e);
                    let text = serde_json::to_string_pretty(&report).unwrap_or_default();
                    println!("{text}");
                    eprintln!("error: {e}");
                    if code == 2 {
                        let stem = config
                            .file_stem()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_else(|| "scenario".into());
                        let _ = std::fs::write(out.join(format!("{stem}.error.json")), text);
                    }
                }
            }
            ExitCode::from(code as u8)
        }
        Command::Bound { a, kappa } => {
            let medium = Medium::unit();
            match born_bound(a * medium.lambda_d(), &medium) {
                Ok(mut verdict) => {
                    if let Some(k) = kappa {
                        verdict = verdict.with_contrast(k);
                    }
                    let out = json!({ "a_over_lambda": a, "verdict": verdict });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap_or_default());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(3)
                }
            }
        }
        Command::Version => {
            println!("diffuse-born {VERSION}");
            ExitCode::SUCCESS
        }
    }
}
