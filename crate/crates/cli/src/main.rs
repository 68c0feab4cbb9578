//! `geolab`: reproducible experiment runner. Each invocation runs one
//! experiment, writes its data files and a `manifest.json` into `--out`, and
//! exits 0 on success, 1 on a numerical failure and 2 on a usage error.

mod csf;
mod geo;
mod output;
mod torsion;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use geolab::acceptance::{all_gating_pass, run_suite, Suite};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "geolab", version, about = "Curve flows and geodesic flows: experiments and verification")]
struct Cli {
    /// Output directory for data files and the manifest.
    #[arg(long, global = true, default_value = "geolab-out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Curve-shortening flow of plane curves.
    #[command(subcommand)]
    Csf(csf::CsfCommand),
    /// Curvature-preserving flow of space-curve torsion.
    #[command(subcommand)]
    Torsion(torsion::TorsionCommand),
    /// Geodesics, flowlines and periods on the groups G_alpha.
    #[command(subcommand)]
    Geo(geo::GeoCommand),
    /// Run the acceptance checks and print one line per criterion.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Csf,
    Torsion,
    Geo,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Csf => Suite::Csf,
            SuiteArg::Torsion => Suite::Torsion,
            SuiteArg::Geo => Suite::Geo,
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("GEOFLOW_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("GEOFLOW_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("GEOFLOW_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn verify(suite: Suite, format: Format) -> ExitCode {
    let results = run_suite(suite);
    match format {
        Format::Csv => {
            for r in &results {
                println!("{r}");
            }
        }
        Format::Json => match serde_json::to_string_pretty(&results) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("geolab: {e}");
                return ExitCode::from(1);
            }
        },
    }
    if all_gating_pass(&results) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("geolab: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let report = match &cli.command {
        Command::Verify { suite } => return verify((*suite).into(), cli.format),
        Command::Csf(c) => csf::run(c),
        Command::Torsion(c) => torsion::run(c),
        Command::Geo(c) => geo::run(c),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("geolab: {e}");
            return ExitCode::from(1);
        }
    };
    match report.write(&cli.out, cli.format, start.elapsed().as_secs_f64()) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("geolab: writing {}: {e}", cli.out.display());
            ExitCode::from(1)
        }
    }
}
