//! Serializable run configurations, grids, angle parsing and presets.

use std::f64::consts::PI;

use cone_propagator::critical_points::ConjugateAngle;
use cone_propagator::harness::{interior_angles, BoundKind, WindowGrid, DEFAULT_EPSILON0, DEFAULT_THRESHOLD};
use cone_propagator::{ConeParams, Error};
use serde::{Deserialize, Serialize};

/// Everything needed to reproduce one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Absent only for `critical`, which needs `ρ` alone.
    pub params: Option<ConeParams>,
    pub tol: f64,
    pub workers: usize,
    pub output_path: Option<String>,
    pub command: Command,
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run configs always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid run config: {e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Command {
    Eval(EvalConfig),
    Scan(ScanConfig),
    Critical(CriticalConfig),
    DecayFit(DecayFitConfig),
    Verify(VerifyConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub x: Option<f64>,
    pub phi: f64,
    pub physical: Option<Physical>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Physical {
    pub t: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub x_grid: XGrid,
    pub phis: Vec<f64>,
    pub with_prediction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalConfig {
    pub rho: f64,
    pub phi: Option<f64>,
    pub phi0: Option<ConjugateAngle>,
    pub classify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeMode {
    /// Fit the samples themselves.
    Raw,
    /// Fit per-bin maxima over logarithmic bins.
    Octave,
    /// Fit per-window maxima; needs a windowed grid.
    Window,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFitConfig {
    pub x_grid: XGrid,
    pub phi: f64,
    pub envelope: EnvelopeMode,
    pub bins_per_octave: usize,
    pub frequency: Option<FrequencyConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyConfig {
    pub start: f64,
    pub step: f64,
    pub points: usize,
    /// Defaults to `d` when absent.
    pub growth: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub preset: Option<Preset>,
    pub x_grid: XGrid,
    pub phis: Vec<f64>,
    pub bound: BoundKind,
    pub threshold: f64,
}

/// An `x` grid description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scale", rename_all = "lowercase")]
pub enum XGrid {
    Log { min: f64, max: f64, points: usize },
    Lin { min: f64, max: f64, points: usize },
    Windows(WindowGrid),
}

impl XGrid {
    pub fn points(&self) -> Result<Vec<f64>, Error> {
        let span = |min: f64, max: f64, points: usize| {
            if !(min > 0.0 && max >= min && points >= 1) || (points == 1 && max != min) {
                return Err(Error::Input(format!(
                    "invalid x grid [{min}, {max}] with {points} points"
                )));
            }
            Ok(())
        };
        match *self {
            XGrid::Log { min, max, points } => {
                span(min, max, points)?;
                if points == 1 {
                    return Ok(vec![min]);
                }
                let r = (max / min).ln() / (points - 1) as f64;
                Ok((0..points)
                    .map(|k| {
                        if k + 1 == points {
                            max
                        } else {
                            min * (r * k as f64).exp()
                        }
                    })
                    .collect())
            }
            XGrid::Lin { min, max, points } => {
                span(min, max, points)?;
                if points == 1 {
                    return Ok(vec![min]);
                }
                let h = (max - min) / (points - 1) as f64;
                Ok((0..points)
                    .map(|k| if k + 1 == points { max } else { min + h * k as f64 })
                    .collect())
            }
            XGrid::Windows(ref w) => Ok(w.points()),
        }
    }
}

/// Parses an angle: a decimal number, `pi`, `pi/N`, `K*pi` or `K*pi/N`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (
            a.trim(),
            b.trim().parse::<f64>().map_err(|_| format!("bad angle {text:?}"))?,
        ),
        None => (t, 1.0),
    };
    let factor = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(k) => k
            .trim_end_matches('*')
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad angle {text:?}"))?,
        None => return Err(format!("bad angle {text:?}")),
    };
    Ok(factor * PI / den)
}

/// Comma-separated [`parse_angle`] list.
pub fn parse_angle_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(parse_angle).collect()
}

/// Accepts exactly `0` and `pi`.
pub fn parse_phi0(text: &str) -> Result<ConjugateAngle, String> {
    match text.trim() {
        "0" => Ok(ConjugateAngle::Zero),
        "pi" => Ok(ConjugateAngle::Pi),
        other => Err(format!("phi0 must be the literal 0 or pi, got {other:?}")),
    }
}

/// Headline experiments, each a single `verify` invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Flat cone in three dimensions: constant modulus, interior bound holds.
    EuclideanN3,
    /// Attractive coupling at small x: two-sided power-law bound holds.
    SmallxAttractive,
    /// 1/2 < rho < 1 at phi = pi: growth like x^d breaks the interior bound.
    ConjugateGrowth,
    /// rho < 1/2 at phi = 0: growth like x^d breaks the interior bound.
    DiagonalGrowth,
    /// rho = 1/3 at angles in [eps0, pi - eps0]: interior bound holds.
    InteriorBounded,
}

/// Overrides a preset accepts from the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct PresetOverrides {
    pub rho: Option<f64>,
    pub n: Option<u32>,
    pub c: Option<f64>,
    pub phi0: Option<ConjugateAngle>,
    pub epsilon0: Option<f64>,
}

pub struct PresetRun {
    pub params: ConeParams,
    pub verify: VerifyConfig,
    /// Whether principal-term predictions are meaningful (growth presets).
    pub needs_optimality_regime: bool,
}

impl Preset {
    pub fn build(self, o: PresetOverrides) -> Result<PresetRun, Error> {
        let log = |min: f64, max: f64, points: usize| XGrid::Log { min, max, points };
        let (rho, n, c, grid, phis, bound, optimality) = match self {
            Preset::EuclideanN3 => (
                1.0,
                3,
                0.0,
                log(0.1, 500.0, 90),
                vec![0.0, 0.3, PI / 2.0, 2.8, PI],
                BoundKind::Interior,
                false,
            ),
            Preset::SmallxAttractive => (
                1.0,
                3,
                -0.2,
                log(1e-6, 1.0, 49),
                vec![0.0, PI / 2.0, PI],
                BoundKind::Smallx,
                false,
            ),
            Preset::ConjugateGrowth => {
                let phi0 = o.phi0.unwrap_or(ConjugateAngle::Pi);
                (
                    2.0 / 3.0,
                    3,
                    0.0,
                    log(50.0, 2000.0, 60),
                    vec![phi0.radians()],
                    BoundKind::Interior,
                    true,
                )
            }
            Preset::DiagonalGrowth => {
                let phi0 = o.phi0.unwrap_or(ConjugateAngle::Zero);
                (
                    1.0 / 3.0,
                    3,
                    0.0,
                    log(50.0, 4000.0, 60),
                    vec![phi0.radians()],
                    BoundKind::Interior,
                    true,
                )
            }
            Preset::InteriorBounded => {
                let eps = o.epsilon0.unwrap_or(DEFAULT_EPSILON0);
                (
                    1.0 / 3.0,
                    3,
                    0.0,
                    log(50.0, 2000.0, 60),
                    interior_angles(eps).to_vec(),
                    BoundKind::Interior,
                    false,
                )
            }
        };
        let params = ConeParams::new(o.rho.unwrap_or(rho), o.n.unwrap_or(n), o.c.unwrap_or(c))?;
        Ok(PresetRun {
            params,
            verify: VerifyConfig {
                preset: Some(self),
                x_grid: grid,
                phis,
                bound,
                threshold: DEFAULT_THRESHOLD,
            },
            needs_optimality_regime: optimality,
        })
    }
}
