//! The `loewner` command-line tool: file formats, experiments and reports on
//! top of `loewner-core`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod files;

/// Failure of a command, one variant per exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// A check ran and did not pass.
    Check(String),
    /// Unreadable or malformed input.
    Input(String),
    /// A numerical step failed on valid input.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<loewner_core::Error> for CliError {
    fn from(e: loewner_core::Error) -> Self {
        use loewner_core::Error as E;
        match e {
            E::InvalidInput(_) | E::Validation(_) | E::Geometry { .. } | E::UnsupportedNormalization => {
                CliError::Input(e.to_string())
            }
            E::SingularPoint { .. } | E::AmbiguousPrimeEnd(_) | E::StepSize { .. } | E::Resolution(_) | E::Step { .. } => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

/// Pass/fail tolerances of `reverse`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ToleranceProfile {
    /// Tolerances of the desk-scale acceptance runs.
    #[default]
    Desk,
    /// Desk tolerances divided by 10.
    Strict,
    /// Desk tolerances multiplied by 10.
    Loose,
}

impl ToleranceProfile {
    fn factor(self) -> f64 {
        match self {
            ToleranceProfile::Desk => 1.0,
            ToleranceProfile::Strict => 0.1,
            ToleranceProfile::Loose => 10.0,
        }
    }

    /// Allowed `|E(γ) − E(reversed)|`.
    pub fn defect(self, energy: f64) -> f64 {
        self.factor() * f64::max(0.02, 0.03 * energy.abs())
    }

    /// Allowed increase of the ledger's total energy from one step to the next.
    pub fn step_slack(self) -> f64 {
        self.factor() * 1e-3
    }
}

#[derive(Debug, Parser)]
#[command(name = "loewner", version, about = "Loewner driving functions, energies and chord reversal")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for the random parts of `verify` and `gen`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file, or directory for `reverse`. Without it the main artifact goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = ToleranceProfile::Desk)]
    pub tolerance_profile: ToleranceProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Geodesic,
    FromDriving,
    Named,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zip a chord file into a driving file.
    Drive {
        chord: PathBuf,
        /// Also report the chordal Loewner energy between the chord's endpoints.
        #[arg(long)]
        chordal: bool,
    },
    /// Trace the curve of a driving file into an open-segment chord file.
    Trace {
        driving: PathBuf,
        /// Sub-steps per sample interval.
        #[arg(long, default_value_t = 1)]
        steps_per_sample: usize,
    },
    /// Loewner energy of a chord.
    Energy { chord: PathBuf },
    /// Reverse a chord by iterated geodesic surgery, once per entry of `--k`.
    Reverse {
        chord: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Samples per inserted geodesic.
        #[arg(long, default_value_t = 16)]
        n_samples: usize,
        /// Far-field points of the Carathéodory distance.
        #[arg(long, default_value_t = 64)]
        cara_points: usize,
    },
    /// Run the property checks.
    Verify {
        /// `default`, or a suite file `{"schema_version":1,"chords":[paths]}`.
        #[arg(long, default_value = "default")]
        suite: String,
        /// Run one check group only.
        #[arg(long)]
        only: Option<String>,
    },
    /// Generate a chord file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Vertex count.
        #[arg(long)]
        n: Option<usize>,
        /// Left endpoint of a geodesic.
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        a: f64,
        /// Right endpoint of a geodesic.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        /// Chord name for `--kind named`.
        #[arg(long)]
        name: Option<String>,
        /// Driving file for `--kind from-driving`.
        #[arg(long, conflicts_with = "formula")]
        driving: Option<PathBuf>,
        /// Driving formula in `t` for `--kind from-driving`, e.g. `math::sin(4*t)`.
        #[arg(long)]
        formula: Option<String>,
        /// Time span of `--formula`.
        #[arg(long, default_value_t = 1.0)]
        total: f64,
        /// Image offset of the closing endpoint right of the final driving value.
        #[arg(long, default_value_t = 1.0)]
        offset: f64,
    },
    /// Resample a chord file to `n` vertices equally spaced in arc length.
    Resample {
        chord: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
        .map_err(|e| CliError::Input(format!("--threads: {e}")))?;
    pool.install(|| commands::dispatch(&cli.global, &cli.command))
}
