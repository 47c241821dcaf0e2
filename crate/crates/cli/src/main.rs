//! Command-line front end for the discrete-integrability toolkit:
//! verification sweeps, net and pattern generation, and the convergence
//! harness, with JSON/SVG/OBJ/CSV outputs.

mod formats;
mod gen;
mod report;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ddg", version, about = "discrete nets, quad equations and circle patterns")]
struct Cli {
    /// RNG seed; DDG_SEED overrides when set
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Abs,
    Nets,
    Dca,
    Patterns,
    Yb,
    Hypsys,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit 0 iff all residuals pass
    Verify {
        suite: Suite,
        /// exact Gaussian-rational sweeps where supported
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// residual tolerance override
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// sub-suite selector (patterns: zpow | log | laplace)
        #[arg(long = "suite", value_name = "SUB")]
        sub: Option<String>,
        /// exponent for the pattern suites
        #[arg(long, default_value_t = 0.8)]
        a: f64,
        /// patch size for the pattern suites
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// write the JSON report here
        #[arg(long)]
        json: Option<std::path::PathBuf>,
    },
    /// Generate an object and export it
    Gen {
        #[command(subcommand)]
        target: gen::Target,
    },
    /// Self-convergence of the canonical net families
    Convergence {
        /// write {eps, sup_error, slope} rows here
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = std::env::var("DDG_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(cli.seed);
    let outcome = match cli.command {
        Command::Verify { suite, exact, samples, tol, sub, a, n, json } => {
            let opts = verify::Options { exact, samples, tol, sub, a, n, seed };
            match verify::run(suite, &opts) {
                Ok(reports) => {
                    let all_pass = reports.iter().all(|r| r.pass);
                    for r in &reports {
                        println!("{}", r.line());
                    }
                    if let Some(path) = json {
                        if let Err(e) = report::write_json(&path, &reports) {
                            eprintln!("error: {e}");
                            return ExitCode::from(2);
                        }
                    }
                    if all_pass {
                        Ok(())
                    } else {
                        Err(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(2)
                }
            }
        }
        Command::Gen { target } => match gen::run(target, seed) {
            Ok(files) => {
                for f in files {
                    println!("wrote {}", f.display());
                }
                Ok(())
            }
            Err(e) => {
                eprintln!("error: {e}");
                Err(2)
            }
        },
        Command::Convergence { csv } => match verify::convergence(csv.as_deref()) {
            Ok(lines) => {
                for l in lines {
                    println!("{l}");
                }
                Ok(())
            }
            Err(e) => {
                eprintln!("error: {e}");
                Err(1)
            }
        },
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
