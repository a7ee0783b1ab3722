use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;

use super::config::InitialData;
use crate::error::Result;
use crate::spectral::{snapshot, Grid, SpectralField};

/// Build the initial vorticity on `grid`.
pub fn initial_vorticity(data: &InitialData, grid: Grid) -> Result<SpectralField> {
    match data {
        InitialData::BandLimited {
            seed,
            k_min,
            k_max,
            rms,
        } => Ok(band_limited(grid, *seed, *k_min, *k_max, *rms)),
        InitialData::TaylorGreen { amplitude } => {
            let a = *amplitude;
            let s = 2.0 * std::f64::consts::PI / grid.length();
            Ok(SpectralField::scalar_from_fn(grid, |x, y| {
                a * (s * x).sin() * (s * y).sin()
            }))
        }
        InitialData::Bump {
            center,
            sigma,
            amplitude,
        } => {
            let (a, s2) = (*amplitude, 2.0 * sigma * sigma);
            Ok(radial_mean_free(grid, *center, |r| a * (-r * r / s2).exp()))
        }
        InitialData::SmoothedPatch {
            center,
            radius,
            width,
            amplitude,
        } => {
            let (a, r0, w) = (*amplitude, *radius, *width);
            Ok(radial_mean_free(grid, *center, |r| {
                0.5 * a * (1.0 - ((r - r0) / w).tanh())
            }))
        }
        InitialData::Snapshot { path } => {
            let f = snapshot::read(path)?;
            if f.grid() != &grid || !f.is_scalar() {
                return Err(crate::Error::Mismatch(format!(
                    "snapshot {} is {}x{} with {} component(s); config needs a scalar {}x{}",
                    path.display(),
                    f.grid().n(),
                    f.grid().n(),
                    f.components(),
                    grid.n(),
                    grid.n()
                )));
            }
            Ok(f)
        }
    }
}

/// Band-limited random vorticity with integer wavevectors `k` in
/// `k_min ≤ |k| ≤ k_max`. Coefficients are drawn in a fixed order over the
/// band, so the same seed gives the same continuous field on every grid.
pub fn band_limited(grid: Grid, seed: u64, k_min: f64, k_max: f64, rms: f64) -> SpectralField {
    let n = grid.n();
    let kmax = k_max.floor() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (kx, ky, c) over the upper half plane
    let mut modes: Vec<(i64, i64, Complex64)> = Vec::new();
    for ky in 0..=kmax {
        for kx in -kmax..=kmax {
            if ky == 0 && kx <= 0 {
                continue;
            }
            let k = ((kx * kx + ky * ky) as f64).sqrt();
            if k < k_min || k > k_max {
                continue;
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            modes.push((kx, ky, Complex64::new(re, im)));
        }
    }
    // each stored mode and its conjugate contribute 2|c|² to the mean square
    let energy: f64 = modes.iter().map(|m| 2.0 * m.2.norm_sqr()).sum();
    let scale = if energy > 0.0 { rms / energy.sqrt() } else { 0.0 };
    let n2 = (n * n) as f64;
    let mut coeffs = vec![Complex64::default(); grid.len()];
    let wrap = |k: i64| k.rem_euclid(n as i64) as usize;
    for (kx, ky, c) in modes {
        let c = c * scale * n2;
        coeffs[wrap(ky) * n + wrap(kx)] = c;
        coeffs[wrap(-ky) * n + wrap(-kx)] = c.conj();
    }
    SpectralField::from_spectral(grid, vec![coeffs]).expect("shape is fixed")
}

fn radial_mean_free(grid: Grid, center: [f64; 2], profile: impl Fn(f64) -> f64) -> SpectralField {
    let l = grid.length();
    let wrap = |d: f64| (d + 0.5 * l).rem_euclid(l) - 0.5 * l;
    let raw = SpectralField::scalar_from_fn(grid, |x, y| {
        let (dx, dy) = (wrap(x - center[0]), wrap(y - center[1]));
        profile(dx.hypot(dy))
    });
    let mean = raw.mean()[0];
    let vals = raw.scalar_physical().iter().map(|v| v - mean).collect();
    SpectralField::from_physical(grid, vec![vals]).expect("finite profile")
}
