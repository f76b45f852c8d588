use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgosc::{BackgroundConfig, Branch, ModelParams, Prescription};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "kgosc", version, about = "Klein-Gordon oscillator with a Lorentz-violating background vector")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels for every (l, n_r) and branch
    Spectrum(PhysArgs),
    /// Normalized radial wavefunction and charge density on a uniform r grid
    Wavefunction {
        #[command(flatten)]
        phys: PhysArgs,
        #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
        branch: BranchArg,
        /// Largest sampled radius [default: sqrt(80 / (M omega))]
        #[arg(long = "r-max")]
        r_max: Option<f64>,
        /// Number of samples, r = 0 included
        #[arg(long = "grid-points", default_value_t = 101)]
        grid_points: usize,
    },
    /// Closed-form normalization constants
    Normalize(PhysArgs),
    /// Run verification checks and emit a JSON report
    Verify(VerifyArgs),
    /// Spectrum rows over a range of one parameter
    Sweep {
        #[command(flatten)]
        phys: PhysArgs,
        #[arg(long)]
        axis: String,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrescriptionArg {
    Corrected,
    Original,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PhysArgs {
    /// Background configuration: A timelike, B spacelike, C mixed
    #[arg(long, value_enum, ignore_case = true, default_value_t = CaseArg::A)]
    pub case: CaseArg,
    #[arg(long, value_enum, default_value_t = PrescriptionArg::Corrected)]
    pub prescription: PrescriptionArg,
    #[arg(long = "M", default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub g: f64,
    /// Time component v^0 (cases A and C) [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Longitudinal component v^z (cases B and C) [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub k: f64,
    /// Magnetic quantum numbers, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    pub l: Vec<i32>,
    /// Radial quantum numbers, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub nr: Vec<u32>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Output file [default: standard output]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Spectrum,
    Normalization,
    Conservation,
    Prescription,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Override the tolerance of every selected check
    #[arg(long)]
    pub tol: Option<f64>,
    /// Outer radius of the finite-difference grid (spectrum check)
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,
    /// Points of the base finite-difference grid (spectrum check)
    #[arg(long = "grid-points")]
    pub grid_points: Option<usize>,
    /// Output file [default: standard output]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated physical inputs shared by the computing subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub config: BackgroundConfig,
    pub prescription: Prescription,
    pub l: Vec<i32>,
    pub n_r: Vec<u32>,
    pub format: FormatArg,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &PhysArgs) -> Result<Self, CliError> {
        let config = match args.case {
            CaseArg::A => {
                if args.c.is_some() {
                    return Err(CliError::Usage("--c is not allowed for case A".into()));
                }
                BackgroundConfig::TimeLike { a: args.a.unwrap_or(0.0) }
            }
            CaseArg::B => {
                if args.a.is_some() {
                    return Err(CliError::Usage("--a is not allowed for case B".into()));
                }
                BackgroundConfig::SpaceLike { c: args.c.unwrap_or(0.0) }
            }
            CaseArg::C => BackgroundConfig::Mixed {
                a: args.a.unwrap_or(0.0),
                c: args.c.unwrap_or(0.0),
            },
        };
        for (name, v) in [("a", config.a()), ("c", config.c())] {
            if !v.is_finite() {
                return Err(CliError::Usage(format!("--{name} must be finite")));
            }
        }
        let params = ModelParams::new(args.mass, args.omega, args.g, args.k).map_err(|e| CliError::Usage(e.to_string()))?;
        if args.l.is_empty() || args.nr.is_empty() {
            return Err(CliError::Usage("--l and --nr need at least one value".into()));
        }
        Ok(Self {
            params,
            config,
            prescription: match args.prescription {
                PrescriptionArg::Corrected => Prescription::Corrected,
                PrescriptionArg::Original => Prescription::Original,
            },
            l: args.l.clone(),
            n_r: args.nr.clone(),
            format: args.format,
            out: args.out.clone(),
        })
    }
}
