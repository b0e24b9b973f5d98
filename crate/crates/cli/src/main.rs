//! Command-line driver for exact XX-chain entanglement entropies.
//!
//! Subcommands: `entropy` (one subsystem), `mutual` (two disjoint parts),
//! `scan-fig2` (two-interval mutual-information scan), `contour-check` and
//! `oracle-check` (verification suites).
//!
//! Exit codes: 0 success, 1 a check ran but a tolerance failed, 2 malformed
//! input, 3 numerical-domain failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod output;
mod pool;
mod run;
mod sites;

use output::{Format, Units};
use run::CliResult;

#[derive(Parser)]
#[command(
    name = "fermion-entropy",
    about = "Exact entanglement entropies for arbitrary site subsets of the critical XX chain",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Von Neumann (and optional Renyi) entropy of one subsystem.
    Entropy {
        /// Sites as comma-separated 1-based indices and inclusive ranges,
        /// e.g. "1-10,21-30".
        #[arg(long)]
        sites: String,
        /// Magnetic field, |h| < 2.
        #[arg(long, default_value_t = 0.0)]
        h: f64,
        /// Renyi orders, e.g. "0.5,2,3".
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Emit entropies in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Mutual information between two disjoint site sets.
    Mutual {
        #[arg(long)]
        part1: String,
        #[arg(long)]
        part2: String,
        #[arg(long, default_value_t = 0.0)]
        h: f64,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        bits: bool,
    },
    /// Two-interval mutual-information scan at h = 0: intervals of length m
    /// separated by m, over the standard m list.
    ScanFig2 {
        /// Truncate the default m list at this value.
        #[arg(long)]
        max_m: Option<i64>,
        /// Replace the default m list entirely, e.g. "21,40,41".
        #[arg(long)]
        m_list: Option<String>,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Two-column gnuplot-ready output (1/m, I) instead of the table.
        #[arg(long)]
        plot_data: bool,
        #[arg(long)]
        bits: bool,
    },
    /// Verifies the contour-integral entropies against the spectral path on
    /// random subsystems. Exits 0 iff every residual is within tolerance.
    ContourCheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random subsystems.
        #[arg(long, default_value_t = 20)]
        specs: usize,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Harness self-test: corrupt one residual and confirm the failure
        /// path.
        #[arg(long, hide = true)]
        inject_perturbation: bool,
    },
    /// Compares finite-chain free-fermion entropies against exact 2^L
    /// partial traces over all small subsets. Exits 0 iff every comparison
    /// is within tolerance.
    OracleCheck {
        /// Chain length (spin-space diagonalization is dense 2^L).
        #[arg(long, default_value_t = 8)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_perturbation: bool,
    },
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Entropy { sites, h, alpha, format, output, bits } => {
            let alphas = match alpha {
                Some(ref text) => sites::parse_alpha_list(text)?,
                None => Vec::new(),
            };
            run::cmd_entropy(&sites, h, &alphas, format, output, Units::from_flag(bits))
        }
        Command::Mutual { part1, part2, h, format, output, bits } => {
            run::cmd_mutual(&part1, &part2, h, format, output, Units::from_flag(bits))
        }
        Command::ScanFig2 { max_m, m_list, format, output, plot_data, bits } => run::cmd_scan_fig2(
            max_m,
            m_list.as_deref(),
            format,
            output,
            plot_data,
            Units::from_flag(bits),
        ),
        Command::ContourCheck { seed, specs, format, output, inject_perturbation } => {
            run::cmd_contour_check(seed, specs, format, output, inject_perturbation)
        }
        Command::OracleCheck { l, seed, format, output, inject_perturbation } => {
            run::cmd_oracle_check(l, seed, format, output, inject_perturbation)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
