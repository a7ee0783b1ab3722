use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which vorticity equation is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Euler,
    EulerAlpha,
}

/// Model tag with its regularization length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Euler,
    EulerAlpha(f64),
}

impl Model {
    /// Filter width of the advecting velocity; zero for Euler.
    pub fn alpha(&self) -> f64 {
        match self {
            Model::Euler => 0.0,
            Model::EulerAlpha(a) => *a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Euler => "euler",
            Model::EulerAlpha(_) => "euler-alpha",
        }
    }
}

fn default_length() -> f64 {
    2.0 * PI
}
fn default_cfl() -> f64 {
    0.5
}
fn default_cfl_limit() -> f64 {
    1.0
}
fn default_outputs() -> usize {
    10
}
fn default_true() -> bool {
    true
}
fn default_k_min() -> f64 {
    2.0
}
fn default_k_max() -> f64 {
    8.0
}
fn default_one() -> f64 {
    1.0
}
fn default_center() -> [f64; 2] {
    [PI, PI]
}

/// Initial vorticity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// Random vorticity with Fourier support in `k_min ≤ |k| ≤ k_max`
    /// (integer wavevectors), Gaussian coefficients from `seed`, scaled to
    /// the given RMS. The coefficients do not depend on the grid size.
    BandLimited {
        seed: u64,
        #[serde(default = "default_k_min")]
        k_min: f64,
        #[serde(default = "default_k_max")]
        k_max: f64,
        #[serde(default = "default_one")]
        rms: f64,
    },
    /// `q = amplitude · sin x1 · sin x2` (a steady cellular flow).
    TaylorGreen {
        #[serde(default = "default_one")]
        amplitude: f64,
    },
    /// Gaussian bump `amplitude · exp(−r²/2σ²)`, minus its mean.
    Bump {
        #[serde(default = "default_center")]
        center: [f64; 2],
        sigma: f64,
        #[serde(default = "default_one")]
        amplitude: f64,
    },
    /// Patch-like profile `amplitude · ½(1 − tanh((r − radius)/width))`,
    /// minus its mean.
    SmoothedPatch {
        #[serde(default = "default_center")]
        center: [f64; 2],
        radius: f64,
        width: f64,
        #[serde(default = "default_one")]
        amplitude: f64,
    },
    /// Vorticity read from a field snapshot.
    Snapshot { path: PathBuf },
}

/// Full description of one spectral simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub model: ModelKind,
    #[serde(default)]
    pub alpha: f64,
    /// Grid points per side (power of two).
    pub n: usize,
    /// Domain period.
    #[serde(default = "default_length")]
    pub length: f64,
    /// Fixed step; when absent it is derived from `cfl` and the initial
    /// velocity.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Courant number above which a step is refused.
    #[serde(default = "default_cfl_limit")]
    pub cfl_limit: f64,
    pub horizon: f64,
    /// Number of equal output intervals on `[0, horizon]`.
    #[serde(default = "default_outputs")]
    pub outputs: usize,
    #[serde(default = "default_true")]
    pub dealias: bool,
    /// Write a field snapshot at every output time.
    #[serde(default = "default_true")]
    pub snapshots: bool,
    pub initial: InitialData,
}

impl SimConfig {
    pub fn model(&self) -> Model {
        match self.model {
            ModelKind::Euler => Model::Euler,
            ModelKind::EulerAlpha => Model::EulerAlpha(self.alpha),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n < 4 || !self.n.is_power_of_two() {
            return bad(format!("n must be a power of two >= 4, got {}", self.n));
        }
        if !(self.length > 0.0) || !self.length.is_finite() {
            return bad(format!("length must be positive, got {}", self.length));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if self.model == ModelKind::Euler && self.alpha != 0.0 {
            return bad("alpha is only meaningful for the euler-alpha model".into());
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if !(self.cfl > 0.0) || !(self.cfl_limit > 0.0) {
            return bad("cfl and cfl_limit must be positive".into());
        }
        if self.cfl > self.cfl_limit {
            return bad(format!("cfl {} exceeds cfl_limit {}", self.cfl, self.cfl_limit));
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return bad(format!("horizon must be >= 0, got {}", self.horizon));
        }
        if self.outputs == 0 {
            return bad("outputs must be at least 1".into());
        }
        match &self.initial {
            InitialData::BandLimited { k_min, k_max, rms, .. } => {
                if !(*k_min > 0.0 && k_min <= k_max) || !(*rms > 0.0) {
                    return bad("band_limited needs 0 < k_min <= k_max and rms > 0".into());
                }
                let cut = (self.n / 3) as f64;
                if *k_max > cut {
                    return bad(format!(
                        "band_limited k_max {k_max} exceeds the dealiasing cutoff {cut} for n = {}",
                        self.n
                    ));
                }
            }
            InitialData::Bump { sigma, .. } if !(*sigma > 0.0) => {
                return bad("bump sigma must be positive".into());
            }
            InitialData::SmoothedPatch { radius, width, .. } if !(*radius > 0.0 && *width > 0.0) => {
                return bad("smoothed_patch radius and width must be positive".into());
            }
            _ => {}
        }
        Ok(())
    }
}
