use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{besov_norm, BesovSum, Grid, SpectralField};

/// Field rasterized by [`besov_check`], centred in the 2π-periodic box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BesovProfile {
    /// Indicator of the disk of the given radius, sampled at cell centres.
    Indicator { radius: f64 },
    /// `exp(−r²/2σ²)`.
    Gaussian { sigma: f64 },
}

impl BesovProfile {
    pub fn rasterize(&self, n: usize) -> Result<SpectralField> {
        let grid = Grid::periodic(n)?;
        Ok(match *self {
            BesovProfile::Indicator { radius } => {
                SpectralField::scalar_from_fn(grid, |x, y| if (x - PI).hypot(y - PI) < radius { 1.0 } else { 0.0 })
            }
            BesovProfile::Gaussian { sigma } => SpectralField::scalar_from_fn(grid, |x, y| {
                let r2 = (x - PI).powi(2) + (y - PI).powi(2);
                (-r2 / (2.0 * sigma * sigma)).exp()
            }),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BesovReport {
    /// `(N, ‖f‖_{Ḃ^s_{2,∞}})` per resolution.
    pub rows: Vec<(usize, f64)>,
    /// `(max − min) / min` over the resolutions.
    pub spread: f64,
}

impl BesovReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("n,besov_norm\n");
        for (n, v) in &self.rows {
            let _ = writeln!(out, "{n},{v:e}");
        }
        let _ = writeln!(out, "# spread {:e}", self.spread);
        out
    }
}

/// `‖f‖_{Ḃ^{1/2}_{2,∞}}` of one profile rasterized at several resolutions.
pub fn besov_check(resolutions: &[usize], profile: BesovProfile) -> Result<BesovReport> {
    if resolutions.is_empty() {
        return Err(Error::InvalidConfig("no resolutions given".into()));
    }
    let rows = resolutions
        .iter()
        .map(|&n| Ok((n, besov_norm(&profile.rasterize(n)?, 0.5, BesovSum::Sup))))
        .collect::<Result<Vec<_>>>()?;
    let lo = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.1).fold(0.0f64, f64::max);
    let spread = if hi == lo { 0.0 } else { (hi - lo) / lo };
    Ok(BesovReport { rows, spread })
}
