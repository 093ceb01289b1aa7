use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shallow_tunnel::config::{load_config, reference_config, ProblemConfig, SweepParam, SweepSpec};
use shallow_tunnel::run::{run_case, run_solve, run_sweep, REPORT_FILE};
use shallow_tunnel::verification::VerificationReport;
use shallow_tunnel::Result;

/// Stresses and displacements around a shallow tunnel in visco-elastic ground.
///
/// CONFIG is a TOML file; without it the built-in reference case is used.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and write the verification report only.
    Solve {
        config: Option<PathBuf>,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Solve and write surface, periphery and history CSVs plus the report.
    Case {
        config: Option<PathBuf>,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-solve for each value of one normalized parameter.
    Sweep {
        config: Option<PathBuf>,
        /// One of V*, G_E*, eta_E (MPa·day), x0*.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the invariant suite; exits non-zero if any check fails.
    Verify {
        config: Option<PathBuf>,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Print the reference configuration.
    Reference,
}

fn config_from(path: &Option<PathBuf>) -> Result<ProblemConfig> {
    match path {
        Some(p) => load_config(p),
        None => Ok(reference_config()),
    }
}

fn print_report(report: &VerificationReport, dir: &Path) {
    println!(
        "converged in {} iterations ({:.3} s), config {}",
        report.iterations,
        report.solve_seconds,
        &report.config_hash[..16]
    );
    for c in &report.checks {
        println!(
            "{:4} {:<28} {:>12.4e} <= {:<10.3e} {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold,
            c.detail
        );
    }
    println!("report: {}", dir.join(REPORT_FILE).display());
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve { config, out } => {
            let report = run_solve(&config_from(&config)?, &out)?;
            print_report(&report, &out);
            Ok(true)
        }
        Command::Case { config, out } => {
            let bundle = run_case(&config_from(&config)?, &out)?;
            print_report(&bundle.report, &out);
            for f in &bundle.files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let param: SweepParam = param.parse()?;
            let spec = SweepSpec::new(param, values)?;
            let result = run_sweep(&config_from(&config)?, &spec, Some(&out))?;
            for r in &result.runs {
                println!("{param} = {}: {} iterations", r.value, r.iterations);
            }
            for f in &result.failures {
                eprintln!("{param} = {}: {}", f.value, f.error);
            }
            for f in &result.files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Verify { config, out } => {
            let report = run_solve(&config_from(&config)?, &out)?;
            print_report(&report, &out);
            Ok(report.all_passed)
        }
        Command::Reference => {
            print!("{}", shallow_tunnel::config::REFERENCE_TOML);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
