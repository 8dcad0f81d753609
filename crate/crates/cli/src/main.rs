//! `wavepacket`: data for angular distributions, δ-profiles, conservation
//! checks, optical-theorem ratios and energy scans of wavepacket Coulomb
//! scattering.

mod commands;
mod config;
mod table_out;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavepacket_core::units::HELIUM_NUCLEUS_MASS_MEV;
use wavepacket_core::{Error, ModelKind};

use table_out::Format;

/// Exit status for invalid input.
pub const EXIT_CONFIG: u8 = 2;
/// Exit status when a computed value misses its tolerance.
pub const EXIT_TOLERANCE: u8 = 3;
/// Exit status when a resource budget is exceeded.
pub const EXIT_RESOURCE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "wavepacket", version, about = "Wavepacket Coulomb scattering by partial waves")]
struct Cli {
    /// key=value file with default flag values (flags on the command line win)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Target charge number
    #[arg(long = "Z1", default_value_t = 79, allow_hyphen_values = true)]
    pub z1: i32,
    /// Projectile charge number
    #[arg(long = "Z2", default_value_t = 2, allow_hyphen_values = true)]
    pub z2: i32,
    /// Projectile mass
    #[arg(long, default_value_t = HELIUM_NUCLEUS_MASS_MEV)]
    pub mass_mev: f64,
    /// Kinetic energy in keV
    #[arg(long, group = "strength")]
    pub energy_kev: Option<f64>,
    /// Kinetic energy in MeV
    #[arg(long, group = "strength")]
    pub energy_mev: Option<f64>,
    /// Sommerfeld parameter; the sign of Z1*Z2 follows it
    #[arg(long, group = "strength", allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Fractional momentum spread sigma_p/p
    #[arg(long, default_value_t = 0.001)]
    pub eps: f64,
    #[arg(long, default_value = "coulomb-exact", value_parser = parse_model)]
    pub model: ModelKind,
    /// Tolerance on the neglected partial-wave tail
    #[arg(long, default_value_t = wavepacket_core::partialwave::DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Square-well depth (negative for a barrier)
    #[arg(long, allow_hyphen_values = true)]
    pub well_depth_mev: Option<f64>,
    /// Square-well radius
    #[arg(long)]
    pub well_radius_fm: Option<f64>,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// P(theta, delta) along delta at one angle, with the peak position
    ProfileDelta {
        #[command(flatten)]
        run: RunConfig,
        /// Scattering angle in radians
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
        delta_min: f64,
        #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
        delta_max: f64,
        #[arg(long, default_value_t = 161)]
        delta_n: usize,
    },
    /// Angular distribution against the Rutherford formula
    Angular {
        #[command(flatten)]
        run: RunConfig,
        #[arg(long, default_value_t = 0.0)]
        theta_min: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        theta_max: f64,
        #[arg(long, default_value_t = 200)]
        theta_n: usize,
        /// Fixed delta, or `auto` for the per-angle peak position
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        delta: String,
    },
    /// Probability conservation: weight sum and sphere integral
    Conservation {
        #[command(flatten)]
        run: RunConfig,
        /// Equal theta intervals in the sphere integral
        #[arg(long, default_value_t = 200)]
        intervals: usize,
        /// Allowed deviation of the sphere integral from one
        #[arg(long, default_value_t = 0.005)]
        sphere_tol: f64,
    },
    /// Optical-theorem ratio over a range of eta (or the square-well check)
    Optical {
        #[command(flatten)]
        run: RunConfig,
        #[arg(long, default_value_t = 0.1)]
        eta_min: f64,
        #[arg(long, default_value_t = 800.0)]
        eta_max: f64,
        /// Logarithmically spaced samples
        #[arg(long, default_value_t = 41)]
        eta_n: usize,
    },
    /// Ratio to Rutherford at theta = pi/4 across energies
    EnergyScan {
        #[command(flatten)]
        run: RunConfig,
        /// Comma-separated kinetic energies
        #[arg(long, value_delimiter = ',', default_value = "3.8,10,20,50,100,200")]
        energies_kev: Vec<f64>,
    },
    /// P(theta, delta) on a grid
    Field {
        #[command(flatten)]
        run: RunConfig,
        #[arg(long, default_value_t = 0.0)]
        theta_min: f64,
        #[arg(long, default_value_t = 0.5)]
        theta_max: f64,
        #[arg(long, default_value_t = 500)]
        theta_n: usize,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        delta_min: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        delta_max: f64,
        #[arg(long, default_value_t = 81)]
        delta_n: usize,
        /// probability, dcs, forward, scatter-re or scatter-im
        #[arg(long, default_value = "probability")]
        quantity: String,
    },
    /// Per-l weights, phases and spatial shifts
    TableDump {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Run the acceptance criteria
    Selftest {
        #[arg(long)]
        workers: Option<usize>,
        /// Negative control: perturb the fine-structure constant
        #[arg(long, hide = true)]
        corrupt_constant: bool,
    },
}

/// Failure classes mapped onto exit statuses.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Tolerance(String),
    Resource(anyhow::Error),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.into()),
            Error::NonConvergence { .. } | Error::MatchingFailure { .. } => Failure::Tolerance(e.to_string()),
            _ => Failure::Config(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.into())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::ProfileDelta {
            run,
            theta,
            delta_min,
            delta_max,
            delta_n,
        } => commands::profile_delta(&run, theta, (delta_min, delta_max, delta_n)),
        Command::Angular {
            run,
            theta_min,
            theta_max,
            theta_n,
            delta,
        } => commands::angular(&run, (theta_min, theta_max, theta_n), &delta),
        Command::Conservation { run, intervals, sphere_tol } => commands::conservation(&run, intervals, sphere_tol),
        Command::Optical {
            run,
            eta_min,
            eta_max,
            eta_n,
        } => commands::optical(&run, eta_min, eta_max, eta_n),
        Command::EnergyScan { run, energies_kev } => commands::energy_scan(&run, &energies_kev),
        Command::Field {
            run,
            theta_min,
            theta_max,
            theta_n,
            delta_min,
            delta_max,
            delta_n,
            quantity,
        } => commands::field(&run, (theta_min, theta_max, theta_n), (delta_min, delta_max, delta_n), &quantity),
        Command::TableDump { run } => commands::table_dump(&run),
        Command::Selftest {
            workers,
            corrupt_constant,
        } => commands::selftest(workers, corrupt_constant),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Tolerance(msg)) => {
            eprintln!("tolerance breach: {msg}");
            ExitCode::from(EXIT_TOLERANCE)
        }
        Err(Failure::Resource(e)) => {
            eprintln!("resource limit: {e:#}");
            ExitCode::from(EXIT_RESOURCE)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
