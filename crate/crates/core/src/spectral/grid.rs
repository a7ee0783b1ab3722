use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A square periodic grid of `n × n` points on `[0, length)²`.
///
/// Samples are stored row-major: index `iy * n + ix` holds the value at
/// `(x1, x2) = (ix·dx, iy·dx)`. Fourier coefficients use the same layout
/// with `ξ1` along columns and `ξ2` along rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "grid size must be a power of two >= 4, got {n}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "domain period must be positive, got {length}"
            )));
        }
        Ok(Self { n, length })
    }

    /// `n × n` grid on the standard `2π` torus.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Area of one grid cell.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dx()
    }

    /// Signed integer wavenumber for FFT index `j`. The Nyquist index maps to
    /// `-n/2`.
    pub fn wave_index(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Physical wavenumber `2πk / L` for FFT index `j`.
    pub fn xi(&self, j: usize) -> f64 {
        2.0 * PI / self.length * self.wave_index(j) as f64
    }

    /// Wavenumber for use in odd-order derivatives: zero at the Nyquist
    /// index so the result stays Hermitian.
    pub fn xi_odd(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            0.0
        } else {
            self.xi(j)
        }
    }

    /// `|ξ|²` at flat spectral index `idx`.
    pub fn xi_sq(&self, idx: usize) -> f64 {
        let (r, c) = (idx / self.n, idx % self.n);
        let (a, b) = (self.xi(c), self.xi(r));
        a * a + b * b
    }

    /// Coordinates of flat physical index `idx`.
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let dx = self.dx();
        ((idx % self.n) as f64 * dx, (idx / self.n) as f64 * dx)
    }

    /// Largest integer wavenumber retained by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        self.n as i64 / 3
    }

    /// Whether spectral index `idx` survives 2/3-rule truncation.
    pub fn dealias_keep(&self, idx: usize) -> bool {
        let cut = self.dealias_cutoff();
        let (r, c) = (idx / self.n, idx % self.n);
        self.wave_index(c).abs() <= cut && self.wave_index(r).abs() <= cut
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::periodic(100).is_err());
        assert!(Grid::periodic(2).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::periodic(16).is_ok());
    }

    #[test]
    fn wave_indices() {
        let g = Grid::periodic(8).unwrap();
        let ks: Vec<i64> = (0..8).map(|j| g.wave_index(j)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.xi_odd(4), 0.0);
        assert_eq!(g.xi(3), 3.0);
        assert_eq!(g.dealias_cutoff(), 2);
    }
}
