mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Zeros of Coulomb wave functions, Lommel-type polynomials and spectral zeta values.
#[derive(Debug, Parser)]
#[command(name = "coulomb-opoly", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Angular parameter L.
    #[arg(long = "L", global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub l: f64,
    /// Charge parameter η.
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eta: f64,
    /// Absolute tolerance for zeros and function values.
    #[arg(long, global = true, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub tol: f64,
    /// Cap on the matrix truncation order used for zero seeds.
    #[arg(long, global = true)]
    pub truncation_cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Zeros of F_L(η, ·) of smallest modulus.
    Zeros {
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Zeros of ∂_ρ F_L(η, ·) of smallest modulus.
    Dzeros {
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Values P_0(z) ..= P_n(z).
    Poly {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        z: f64,
    },
    /// Coefficients c_0 ..= c_n of P_n in z.
    Coeffs {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Spectral zeta values ζ_L(2) ..= ζ_L(k_max).
    Zeta {
        #[arg(long, default_value_t = 10)]
        k_max: usize,
    },
    /// Euler bounds on the squared first zero, lower and upper for s = 1 ..= s_max.
    Bounds {
        #[arg(long, default_value_t = 4)]
        s_max: usize,
    },
    /// Moments m_0 ..= m_n of the orthogonality measure.
    Moments {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Gram-matrix residuals of P_0 ..= P_n against a measure with `count` atoms.
    OrthoCheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Use the derivative family and its measure.
        #[arg(long)]
        tilde: bool,
    },
    /// Residuals of the polynomial and special-function identities.
    IdentitySuite {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        s_max: usize,
        /// Evaluation points ρ.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 3.5])]
        rho: Vec<f64>,
    },
    /// Positive zeros of J_{L+1/2} by bisection on the power series (requires η = 0).
    BesselOracle {
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(&cli) {
        Ok(rep) => match report::emit(&rep, cli.common.format, cli.common.output.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_convergence() { 3 } else { 2 })
        }
    }
}
