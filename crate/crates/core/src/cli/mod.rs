//! Command-line front end.
//!
//! `oscphase phase {sho|driven|mathieu}`, `oscphase verify`, `oscphase sweep`
//! and `oscphase run --config <file>`. Exit codes: 0 success (including
//! domain outcomes such as an undefined phase), 2 config error, 3
//! verification failure.

mod config;
mod output;
mod record;
mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigError, Format, Method, Mode, RunConfig, Scale, SweepSpec, Target, SWEEP_PARAMS};
pub use output::{write_records, write_report};
pub use record::{round12, run_point, ResultRecord, Status};
pub use sweep::run_sweep;

use crate::verify::{verify, Fault, Report, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "oscphase", version, about = "Geometric and dynamical phases of harmonic and Mathieu oscillators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the phase for one configuration.
    Phase {
        #[command(subcommand)]
        system: PhaseSystem,
    },
    /// Run the built-in property checks.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Inject a known defect; the affected checks should fail.
        #[arg(long, value_enum)]
        fault: Option<Fault>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a phase over a parameter grid.
    Sweep {
        #[arg(long, value_enum)]
        target: Target,
        /// One of C, beta, D, phi, n, M, w, hbar, a, eps.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Scale::Linear)]
        scale: Scale,
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a JSON configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum PhaseSystem {
    /// Undriven oscillator, optionally with a fictitious x_p = D cos(wt + phi).
    Sho {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Periodically driven oscillator; needs --force-spec.
    Driven {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mathieu oscillator x'' + (a + 16 eps cos 2t) x = 0; needs --a and --eps.
    Mathieu {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(long = "C", default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long = "D", default_value_t = 0.0, allow_negative_numbers = true)]
    pub d: f64,
    /// Radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long = "M", default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long = "w", default_value_t = 1.0)]
    pub freq: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Use tau_0 / 2 as the evolution period (sho mode, D = 0).
    #[arg(long)]
    pub half_period: bool,
    /// ForceSpectrum JSON: {"w_f": .., "coefficients": [{"n": .., "re": .., "im": ..}]}.
    #[arg(long)]
    pub force_spec: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl InputArgs {
    fn into_config(self, mode: Mode, output: OutputArgs) -> RunConfig {
        RunConfig {
            c: self.c,
            beta: self.beta,
            d: self.d,
            phi: self.phi,
            n: self.n,
            mass: self.mass,
            freq: self.freq,
            hbar: self.hbar,
            half_period: self.half_period,
            force_spec: self.force_spec,
            a: self.a,
            eps: self.eps,
            method: self.method,
            format: output.format,
            out: output.out,
            ..RunConfig::new(mode)
        }
    }
}

impl Cli {
    /// Turns parsed arguments into a run configuration.
    pub fn into_config(self) -> RunConfig {
        match self.command {
            Command::Phase { system } => match system {
                PhaseSystem::Sho { inputs, output } => inputs.into_config(Mode::Sho, output),
                PhaseSystem::Driven { inputs, output } => inputs.into_config(Mode::Driven, output),
                PhaseSystem::Mathieu { inputs, output } => inputs.into_config(Mode::Mathieu, output),
            },
            Command::Verify { suite, fault, output } => RunConfig {
                suite,
                fault,
                format: output.format,
                out: output.out,
                ..RunConfig::new(Mode::Verify)
            },
            Command::Sweep { target, param, from, to, steps, scale, inputs, output } => RunConfig {
                sweep: Some(SweepSpec { target, param, from, to, steps, scale }),
                ..inputs.into_config(Mode::Sweep, output)
            },
            Command::Run { config } => unreachable!("run --config {} is loaded by execute", config.display()),
        }
    }
}

/// What a run produced.
#[derive(Debug)]
pub enum Outcome {
    Records(Vec<ResultRecord>),
    Report(Report),
}

/// Runs a configuration and writes its output. Returns the exit code.
pub fn run(config: &RunConfig) -> Result<(Outcome, i32), ConfigError> {
    config.validate()?;
    match config.mode {
        Mode::Verify => {
            let report = verify(config.suite, VerifyOptions { fault: config.fault });
            output::with_sink(config.out.as_deref(), |w| write_report(w, &report, config.format))?;
            let code = if report.all_passed() { EXIT_OK } else { EXIT_VERIFY };
            Ok((Outcome::Report(report), code))
        }
        Mode::Sweep => {
            let records = output::with_sink(config.out.as_deref(), |w| run_sweep(config, w))?;
            Ok((Outcome::Records(records), EXIT_OK))
        }
        Mode::Sho | Mode::Driven | Mode::Mathieu => {
            let mut config = config.clone();
            if config.mode == Mode::Driven && config.spectrum.is_none() {
                config.spectrum = Some(config.load_spectrum()?);
                config.force_spec = None;
            }
            let record = run_point(&config)?;
            let records = vec![record];
            output::with_sink(config.out.as_deref(), |w| write_records(w, &records, config.format))?;
            Ok((Outcome::Records(records), EXIT_OK))
        }
    }
}

/// Entry point for the binary: parses `args`, runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let config = match &cli.command {
        Command::Run { config } => RunConfig::from_file(config),
        _ => Ok(cli.into_config()),
    };
    match config.and_then(|c| run(&c)) {
        Ok((outcome, code)) => {
            if let Outcome::Report(report) = &outcome {
                for check in report.failures() {
                    eprintln!("FAIL [{:?}] {}: measured {:.3e}, bound {:.3e}", check.suite, check.name, check.measured, check.bound);
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
