//! Command-line harness over the corrspec library: simulate factor model
//! datasets, compute covariance and correlation spectra, estimate
//! component counts, verify asymptotic spectral statements by Monte
//! Carlo, and run the Hodrick-Prescott filter.
//!
//! CSV files carry observations as rows and variables as columns with a
//! header line; ingestion transposes into the library's p x n layout.
//! Every command's output is a pure function of its inputs, flags, and
//! seed. Monte Carlo replicates run in parallel; `RAYON_NUM_THREADS`
//! pins the worker count without changing any output byte.
//!
//! Exit codes: 0 success, 2 tolerance breach in `verify`, 1 usage or
//! I/O error.

mod commands;
mod csv_io;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "corrspec", version, about = "Spectra of high-dimensional factor models: simulation, estimation, verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a factor model dataset and write it as CSV
    Simulate {
        /// TOML config: top-level `n`, optional `seed`, and a `[model]` table
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; a metadata sidecar lands at `<out>.meta.json`
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed (0 when neither is given)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Estimate the component count of a CSV dataset three ways
    Estimate {
        /// Input CSV: header row, observations as rows
        csv: PathBuf,
        /// Drop zero-variance columns instead of failing on them
        #[arg(long)]
        clean: bool,
        /// Count eigenvalues above the raw bulk edge instead of applying
        /// the spectrum adjustment
        #[arg(long)]
        threshold_only: bool,
        /// Search bound for the penalized criterion; defaults to
        /// min(8, min(p, n)/2)
        #[arg(long)]
        k_max: Option<usize>,
        /// Emit the JSON report instead of the table
        #[arg(long)]
        json: bool,
    },
    /// Verify an asymptotic spectral statement by Monte Carlo
    ///
    /// Exit code is 2 when any judged row misses its tolerance. The JSON
    /// report is byte-identical for a given job whatever
    /// RAYON_NUM_THREADS is set to.
    Verify {
        /// Job TOML: `theorem`, `replicates`, `master_seed`, a `[model]`
        /// table, `[[grid]]` entries, optional `[tolerances]`
        #[arg(long)]
        job: PathBuf,
        /// Emit the JSON report on stdout instead of the table
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Descending eigenvalues of the sample covariance or correlation
    Spectrum {
        /// Input CSV: header row, observations as rows
        csv: PathBuf,
        /// Which sample matrix to decompose
        #[arg(long, value_enum, default_value_t = WhichMatrix::Corr)]
        which: WhichMatrix,
        /// data: subtract sample means, divisor n-1; zero: treat the data
        /// as already centered, divisor n
        #[arg(long, value_enum, default_value_t = CenteringArg::Data)]
        centering: CenteringArg,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hodrick-Prescott trend/cycle decomposition of a single series
    Hpfilter {
        /// Single-column CSV with header
        csv: PathBuf,
        /// Smoothing parameter; 0 returns the input as its own trend
        #[arg(long, default_value_t = corrspec::hp::DEFAULT_HP_LAMBDA)]
        lambda: f64,
        /// Apply Fisher's z-transform first (requires |value| < 1); the
        /// emitted `input` column then holds the transformed series, so
        /// `cycle = input - trend` holds exactly
        #[arg(long)]
        fisher_z: bool,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot data overlaying the empirical spectral CDF of the sample
    /// covariance with a Marchenko-Pastur CDF of index p/n
    MpOverlay {
        /// Input CSV: header row, observations as rows
        csv: PathBuf,
        /// Scale (noise variance) of the reference law
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, value_enum, default_value_t = CenteringArg::Data)]
        centering: CenteringArg,
        /// Number of reference-curve sample points
        #[arg(long, default_value_t = 512)]
        points: usize,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum WhichMatrix {
    Cov,
    Corr,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CenteringArg {
    Data,
    Zero,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version displays succeed; genuine usage errors
            // exit 1 per the documented code scheme
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Downstream consumers like `head` close stdout early; that is not an
/// error worth reporting.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        cause
            .downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Simulate { config, out, seed } => commands::simulate(&config, &out, seed),
        Command::Estimate { csv, clean, threshold_only, k_max, json } => {
            commands::estimate(&csv, clean, threshold_only, k_max, json)
        }
        Command::Verify { job, json, out } => commands::verify(&job, json, out.as_deref()),
        Command::Spectrum { csv, which, centering, out } => {
            commands::spectrum(&csv, which, centering, out.as_deref())
        }
        Command::Hpfilter { csv, lambda, fisher_z, out } => {
            commands::hpfilter(&csv, lambda, fisher_z, out.as_deref())
        }
        Command::MpOverlay { csv, scale, centering, points, out } => {
            commands::mp_overlay(&csv, scale, centering, points, out.as_deref())
        }
    }
}
