#![allow(dead_code)]

use alphaflow_core::spectral::{Grid, SpectralField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Mean-free random field: white noise reshaped by `(1 + |ξ|²)^{-p/2}` with a
/// seed-dependent `p ∈ [0, 3]`, so the sample set spans rough to smooth.
pub fn random_field(n: usize, seed: u64) -> SpectralField {
    let grid = Grid::periodic(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: f64 = rng.random_range(0.0..3.0);
    let noise: Vec<f64> = (0..grid.len()).map(|_| rng.sample(StandardNormal)).collect();
    let white = SpectralField::from_physical(grid, vec![noise]).unwrap();
    let mut coeffs = white.scalar_spectral().into_owned();
    coeffs[0] = Default::default();
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c *= (1.0 + grid.xi_sq(i)).powf(-0.5 * p);
    }
    let shaped = SpectralField::from_spectral(grid, vec![coeffs]).unwrap();
    // drop the imaginary residue left by the unpaired Nyquist modes
    let real = shaped.scalar_physical().into_owned();
    SpectralField::from_physical(grid, vec![real]).unwrap()
}

/// `cos(k·x)` on the `2π` torus for an integer wavevector.
pub fn plane_wave(n: usize, k: [f64; 2]) -> SpectralField {
    let grid = Grid::periodic(n).unwrap();
    SpectralField::scalar_from_fn(grid, |x, y| (k[0] * x + k[1] * y).cos())
}

/// Relative maximum difference between the physical samples of two fields.
pub fn max_rel_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    let (pa, pb) = (a.physical(), b.physical());
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (ca, cb) in pa.iter().zip(pb.iter()) {
        for (x, y) in ca.iter().zip(cb) {
            worst = worst.max((x - y).abs());
            scale = scale.max(x.abs()).max(y.abs());
        }
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}
