//! Command-line front end: argument parsing, run configurations and output.
//!
//! Exit codes: 0 success, 1 bound check failed, 2 invalid arguments or
//! parameters, 3 evaluation failure, 4 I/O failure, 5 unsupported regime.

pub mod config;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cone_propagator::critical_points::ConjugateAngle;
use cone_propagator::harness::{BoundKind, WindowGrid, DEFAULT_THRESHOLD};
use cone_propagator::{ConeParams, Error};

use config::{
    parse_angle, parse_angle_list, parse_phi0, Command, CriticalConfig, DecayFitConfig, EnvelopeMode, EvalConfig,
    FrequencyConfig, Physical, Preset, PresetOverrides, RunConfig, ScanConfig, VerifyConfig, XGrid,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EVALUATION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;

/// A message and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::InvalidParams(_) | Error::Input(_) => EXIT_USAGE,
            Error::Precision { .. } | Error::Capacity(_) => EXIT_EVALUATION,
            Error::UnsupportedRegime(_) => EXIT_UNSUPPORTED,
            Error::Io(_) => EXIT_IO,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cone-propagator",
    version,
    about = "Schrödinger propagator on product cones: evaluation, scans and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate the spectral series I(x, phi), or the physical kernel with --physical.
    Eval(EvalArgs),
    /// Evaluate I on a grid and write a CSV table.
    Scan(ScanArgs),
    /// Critical sets, conjugate frequencies and regime classification.
    Critical(CriticalArgs),
    /// Fit the growth exponent of |I| and optionally extract its oscillation frequency.
    DecayFit(DecayFitArgs),
    /// Check a decay envelope; exits 1 when the bound fails.
    Verify(VerifyArgs),
    /// Re-run a configuration saved with --save-config.
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Cross-section radius rho > 0.
    #[arg(long)]
    rho: Option<f64>,
    /// Ambient dimension n >= 3.
    #[arg(long)]
    n: Option<u32>,
    /// Inverse-square coupling c > -((n-2)/2)^2.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
}

impl ParamArgs {
    fn require(&self) -> Result<ConeParams, Failure> {
        match (self.rho, self.n, self.c) {
            (Some(rho), Some(n), Some(c)) => Ok(ConeParams::new(rho, n, c)?),
            _ => Err(Failure::usage("--rho, --n and --c are required")),
        }
    }
}

#[derive(Debug, Args)]
struct RunOpts {
    /// Truncation tolerance for the series.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Worker threads for grid evaluations.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write the result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the effective run configuration as JSON.
    #[arg(long)]
    save_config: Option<PathBuf>,
}

/// Comma-separated angles, kept whole so clap does not treat it as repeated values.
#[derive(Debug, Clone)]
struct AngleList(Vec<f64>);

fn angle_list(text: &str) -> Result<AngleList, String> {
    parse_angle_list(text).map(AngleList)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scale {
    Log,
    Lin,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    x_points: Option<usize>,
    #[arg(long, value_enum, default_value_t = Scale::Log)]
    x_scale: Scale,
    /// Use this many short uniform windows at log-spaced centres in [x-min, x-max].
    #[arg(long)]
    windows: Option<usize>,
    #[arg(long, default_value_t = 40.0)]
    window_width: f64,
    #[arg(long, default_value_t = 1.0)]
    window_step: f64,
}

impl GridArgs {
    fn given(&self) -> bool {
        self.x_min.is_some() || self.x_max.is_some() || self.x_points.is_some() || self.windows.is_some()
    }

    fn build(&self) -> Result<XGrid, Failure> {
        let (Some(min), Some(max)) = (self.x_min, self.x_max) else {
            return Err(Failure::usage("--x-min and --x-max are required"));
        };
        if let Some(count) = self.windows {
            return Ok(XGrid::Windows(WindowGrid::log_spaced(
                min,
                max,
                count,
                self.window_width,
                self.window_step,
            )?));
        }
        let points = self
            .x_points
            .ok_or_else(|| Failure::usage("--x-points (or --windows) is required"))?;
        Ok(match self.x_scale {
            Scale::Log => XGrid::Log { min, max, points },
            Scale::Lin => XGrid::Lin { min, max, points },
        })
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Spectral variable x = r1 r2 / (2t).
    #[arg(long)]
    x: Option<f64>,
    /// Angle in [0, pi]; accepts numbers and forms like pi/2.
    #[arg(long, value_parser = parse_angle)]
    phi: f64,
    /// Evaluate the kernel at (t, r1, r2, phi) instead of the series at (x, phi).
    #[arg(long)]
    physical: bool,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated angles, e.g. 0,pi/2,pi.
    #[arg(long, value_parser = angle_list, default_value = "0")]
    phi_list: AngleList,
    /// Attach principal-term predictions at phi = 0 and phi = pi.
    #[arg(long)]
    with_prediction: bool,
    /// Write scan metadata (pairing choice, failures) as JSON here.
    #[arg(long)]
    meta: Option<PathBuf>,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Debug, Args)]
struct CriticalArgs {
    #[arg(long)]
    rho: f64,
    /// Union of the critical sets over all branches at this angle.
    #[arg(long, value_parser = parse_angle)]
    phi: Option<f64>,
    /// Conjugate frequencies at phi0; the literal 0 or pi.
    #[arg(long, value_parser = parse_phi0)]
    phi0: Option<ConjugateAngle>,
    /// Include the regime classification tables.
    #[arg(long)]
    classify: bool,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Debug, Args)]
struct DecayFitArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_parser = parse_angle, default_value = "0")]
    phi: f64,
    /// Reduction applied before the fit; defaults to window for windowed grids, octave otherwise.
    #[arg(long, value_enum)]
    envelope: Option<EnvelopeArg>,
    #[arg(long, default_value_t = 2)]
    bins_per_octave: usize,
    /// Also extract the dominant oscillation frequency on a uniform grid.
    #[arg(long)]
    frequency: bool,
    #[arg(long)]
    freq_start: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    freq_step: f64,
    #[arg(long, default_value_t = 512)]
    freq_points: usize,
    /// Growth exponent removed before the transform; defaults to d.
    #[arg(long, allow_hyphen_values = true)]
    growth: Option<f64>,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EnvelopeArg {
    Raw,
    Octave,
    Window,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundArg {
    Interior,
    General,
    Smallx,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Named experiment; other flags override its settings.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[command(flatten)]
    params: ParamArgs,
    /// Conjugate angle for growth presets; the literal 0 or pi.
    #[arg(long, value_parser = parse_phi0)]
    phi0: Option<ConjugateAngle>,
    /// Distance of interior angles from 0 and pi.
    #[arg(long)]
    epsilon0: Option<f64>,
    #[arg(long, value_enum)]
    bound: Option<BoundArg>,
    /// Largest accepted ratio |I| / envelope.
    #[arg(long)]
    threshold: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_parser = angle_list)]
    phi_list: Option<AngleList>,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Configuration written by --save-config.
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; overrides the saved value.
    #[arg(long)]
    workers: Option<usize>,
}

fn base_config(params: Option<ConeParams>, run: &RunOpts, command: Command) -> RunConfig {
    RunConfig {
        params,
        tol: run.tol,
        workers: run.workers.max(1),
        output_path: run.output.as_ref().map(|p| p.display().to_string()),
        command,
    }
}

fn build(cmd: Cmd) -> Result<(RunConfig, Option<PathBuf>, Option<PathBuf>), Failure> {
    Ok(match cmd {
        Cmd::Eval(a) => {
            let params = a.params.require()?;
            let physical = if a.physical {
                match (a.t, a.r1, a.r2) {
                    (Some(t), Some(r1), Some(r2)) => Some(Physical { t, r1, r2 }),
                    _ => return Err(Failure::usage("--physical needs --t, --r1 and --r2")),
                }
            } else {
                if a.x.is_none() {
                    return Err(Failure::usage("--x is required unless --physical is given"));
                }
                None
            };
            let cmd = Command::Eval(EvalConfig {
                x: a.x,
                phi: a.phi,
                physical,
            });
            (base_config(Some(params), &a.run, cmd), a.run.save_config, None)
        }
        Cmd::Scan(a) => {
            let params = a.params.require()?;
            let cmd = Command::Scan(ScanConfig {
                x_grid: a.grid.build()?,
                phis: a.phi_list.0,
                with_prediction: a.with_prediction,
            });
            (base_config(Some(params), &a.run, cmd), a.run.save_config, a.meta)
        }
        Cmd::Critical(a) => {
            if a.phi.is_none() && a.phi0.is_none() && !a.classify {
                return Err(Failure::usage("give at least one of --phi, --phi0, --classify"));
            }
            let cmd = Command::Critical(CriticalConfig {
                rho: a.rho,
                phi: a.phi,
                phi0: a.phi0,
                classify: a.classify,
            });
            (base_config(None, &a.run, cmd), a.run.save_config, None)
        }
        Cmd::DecayFit(a) => {
            let params = a.params.require()?;
            let x_grid = a.grid.build()?;
            let envelope = match a.envelope {
                Some(EnvelopeArg::Raw) => EnvelopeMode::Raw,
                Some(EnvelopeArg::Octave) => EnvelopeMode::Octave,
                Some(EnvelopeArg::Window) => EnvelopeMode::Window,
                None if matches!(x_grid, XGrid::Windows(_)) => EnvelopeMode::Window,
                None => EnvelopeMode::Octave,
            };
            let frequency = a.frequency.then(|| FrequencyConfig {
                start: a.freq_start.or(a.grid.x_min).unwrap_or(1.0),
                step: a.freq_step,
                points: a.freq_points,
                growth: a.growth,
            });
            let cmd = Command::DecayFit(DecayFitConfig {
                x_grid,
                phi: a.phi,
                envelope,
                bins_per_octave: a.bins_per_octave,
                frequency,
            });
            (base_config(Some(params), &a.run, cmd), a.run.save_config, None)
        }
        Cmd::Verify(a) => {
            let (params, mut verify) = match a.preset {
                Some(preset) => {
                    let built = preset.build(PresetOverrides {
                        rho: a.params.rho,
                        n: a.params.n,
                        c: a.params.c,
                        phi0: a.phi0,
                        epsilon0: a.epsilon0,
                    })?;
                    (built.params, built.verify)
                }
                None => {
                    let params = a.params.require()?;
                    let verify = VerifyConfig {
                        preset: None,
                        x_grid: a.grid.build()?,
                        phis: match (&a.phi_list, a.phi0) {
                            (Some(list), _) => list.0.clone(),
                            (None, Some(p)) => vec![p.radians()],
                            (None, None) => return Err(Failure::usage("--phi-list or --phi0 is required")),
                        },
                        bound: BoundKind::Interior,
                        threshold: DEFAULT_THRESHOLD,
                    };
                    (params, verify)
                }
            };
            if a.preset.is_some() {
                if a.grid.given() {
                    verify.x_grid = a.grid.build()?;
                }
                if let Some(list) = a.phi_list {
                    verify.phis = list.0;
                }
            }
            if let Some(b) = a.bound {
                verify.bound = match b {
                    BoundArg::Interior => BoundKind::Interior,
                    BoundArg::General => BoundKind::General,
                    BoundArg::Smallx => BoundKind::Smallx,
                };
            }
            if let Some(t) = a.threshold {
                verify.threshold = t;
            }
            (
                base_config(Some(params), &a.run, Command::Verify(verify)),
                a.run.save_config,
                None,
            )
        }
        Cmd::Run(a) => {
            let text = std::fs::read_to_string(&a.config)
                .map_err(|e| Failure::io(format!("cannot read {}: {e}", a.config.display())))?;
            let mut cfg = RunConfig::from_json(&text).map_err(Failure::usage)?;
            if let Some(w) = a.workers {
                cfg.workers = w.max(1);
            }
            (cfg, None, None)
        }
    })
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = build(cli.command).and_then(|(cfg, save, meta)| {
        if let Some(path) = save {
            std::fs::write(&path, cfg.to_json())
                .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
        }
        run::execute(&cfg, meta.as_deref())
    });
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
