//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "lz-sim", version, about = "Landau-Zener dynamics of driven one- and two-atom systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario: trajectory, summary, phase ledger, manifest.
    Run {
        config: PathBuf,
        #[command(flatten)]
        keys: Overrides,
    },
    /// Run the [sweep] grid of a scenario.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        keys: Overrides,
    },
    /// Print the AIA validity report of a scenario.
    Validate {
        config: PathBuf,
        #[command(flatten)]
        keys: Overrides,
    },
    /// Gaps at the three avoided crossings over a V0 grid (CSV).
    Gaps {
        /// lo:hi:points
        #[arg(long = "V0-range", allow_hyphen_values = true)]
        v0_range: String,
        #[arg(long = "Omega", default_value_t = 1.0)]
        rabi: f64,
    },
    /// Multiphoton resonance catalog (CSV).
    Resonances {
        #[arg(long = "Delta0", visible_alias = "Δ0", allow_hyphen_values = true)]
        bias: f64,
        #[arg(long = "V0", allow_hyphen_values = true)]
        v0: f64,
        /// lo:hi
        #[arg(long = "omega-range", visible_alias = "ω-range")]
        omega_range: String,
    },
    /// Beat analysis of a trajectory CSV column.
    Beats {
        trajectory: PathBuf,
        #[arg(long, default_value = "P_s")]
        channel: String,
        /// Start of the analysed span (default: first quarter skipped).
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
    },
}

/// One flag per configuration key, named identically.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    arity: Option<String>,
    #[arg(long = "Omega", allow_hyphen_values = true)]
    rabi: Option<String>,
    #[arg(long = "V0", allow_hyphen_values = true)]
    v0: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long = "v", allow_hyphen_values = true)]
    rate: Option<String>,
    #[arg(long = "Delta0", allow_hyphen_values = true)]
    bias: Option<String>,
    #[arg(long = "delta", allow_hyphen_values = true)]
    amplitude: Option<String>,
    #[arg(long = "omega", allow_hyphen_values = true)]
    frequency: Option<String>,
    #[arg(long)]
    initial_state: Option<String>,
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    observable: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    stokes: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<String>,
    #[arg(long)]
    cycles: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phase: Option<String>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    axis1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    axis2: Option<String>,
}

impl Overrides {
    pub fn pairs(&self) -> Vec<(String, String)> {
        let all = [
            ("arity", &self.arity),
            ("Omega", &self.rabi),
            ("V0", &self.v0),
            ("kind", &self.kind),
            ("v", &self.rate),
            ("Delta0", &self.bias),
            ("delta", &self.amplitude),
            ("omega", &self.frequency),
            ("initial_state", &self.initial_state),
            ("engine", &self.engine),
            ("observable", &self.observable),
            ("tolerance", &self.tolerance),
            ("samples", &self.samples),
            ("scheme", &self.scheme),
            ("stokes", &self.stokes),
            ("t_start", &self.t_start),
            ("t_end", &self.t_end),
            ("cycles", &self.cycles),
            ("phase", &self.phase),
            ("output", &self.output),
            ("axis1", &self.axis1),
            ("axis2", &self.axis2),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect()
    }
}

/// Sizes the global rayon pool from `LZ_SIM_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("LZ_SIM_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("LZ_SIM_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(())
}

/// Executes a parsed command; text for stdout on success.
pub fn execute(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Run { config, keys } => {
            let cfg = commands::load_config(&config, &keys.pairs())?;
            commands::run(&cfg)?;
            Ok(format!("wrote {}\n", cfg.output))
        }
        Command::Sweep { config, keys } => {
            let cfg = commands::load_config(&config, &keys.pairs())?;
            configure_threads()?;
            let failed = commands::sweep(&cfg)?;
            if failed > 0 {
                return Err(CliError::Runtime(format!(
                    "{failed} grid point(s) failed; partial results in {}",
                    cfg.output
                )));
            }
            Ok(format!("wrote {}\n", cfg.output))
        }
        Command::Validate { config, keys } => {
            let cfg = commands::load_config(&config, &keys.pairs())?;
            commands::validate(&cfg)
        }
        Command::Gaps { v0_range, rabi } => {
            let (lo, hi, n) = commands::parse_range(&v0_range, true)?;
            commands::gaps(rabi, lo, hi, n)
        }
        Command::Resonances { bias, v0, omega_range } => {
            let (lo, hi, _) = commands::parse_range(&omega_range, false)?;
            commands::resonances(bias, v0, lo, hi)
        }
        Command::Beats { trajectory, channel, from } => commands::beats(&trajectory, &channel, from),
    }
}

/// Full entry point: parse `args`, run, and return the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("lz-sim: {e}");
            e.exit_code()
        }
    }
}
