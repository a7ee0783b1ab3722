use std::borrow::Cow;

use rustfft::num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

/// A real scalar or 2-vector field on a periodic grid.
///
/// Either representation may be cached; at least one is always present.
/// Accessors transform on demand without mutating the field, while the
/// `ensure_*` methods fill the cache in place.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    ncomp: usize,
    physical: Option<Vec<Vec<f64>>>,
    spectral: Option<Vec<Vec<Complex64>>>,
    divergence_free: bool,
}

impl SpectralField {
    pub fn from_physical(grid: Grid, comps: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&grid, comps.len(), comps.iter().map(Vec::len))?;
        if comps.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::MalformedField("non-finite sample".into()));
        }
        Ok(Self {
            grid,
            ncomp: comps.len(),
            physical: Some(comps),
            spectral: None,
            divergence_free: false,
        })
    }

    /// Build from Fourier coefficients. The caller is responsible for
    /// Hermitian symmetry (real samples).
    pub fn from_spectral(grid: Grid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        check_shape(&grid, comps.len(), comps.iter().map(Vec::len))?;
        Ok(Self {
            grid,
            ncomp: comps.len(),
            physical: None,
            spectral: Some(comps),
            divergence_free: false,
        })
    }

    pub fn scalar_from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let data = (0..grid.len())
            .map(|i| {
                let (x, y) = grid.coords(i);
                f(x, y)
            })
            .collect();
        Self {
            grid,
            ncomp: 1,
            physical: Some(vec![data]),
            spectral: None,
            divergence_free: false,
        }
    }

    pub fn zeros(grid: Grid, ncomp: usize) -> Self {
        Self {
            grid,
            ncomp,
            physical: Some(vec![vec![0.0; grid.len()]; ncomp]),
            spectral: Some(vec![vec![Complex64::default(); grid.len()]; ncomp]),
            divergence_free: ncomp == 2,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.ncomp
    }

    pub fn is_scalar(&self) -> bool {
        self.ncomp == 1
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    pub(crate) fn with_divergence_free(mut self, flag: bool) -> Self {
        self.divergence_free = flag;
        self
    }

    pub fn has_physical(&self) -> bool {
        self.physical.is_some()
    }

    pub fn has_spectral(&self) -> bool {
        self.spectral.is_some()
    }

    pub fn physical(&self) -> Cow<'_, [Vec<f64>]> {
        match (&self.physical, &self.spectral) {
            (Some(p), _) => Cow::Borrowed(p.as_slice()),
            (None, Some(s)) => Cow::Owned(s.iter().map(|c| fft::inverse_real(self.grid.n(), c)).collect()),
            (None, None) => unreachable!("field without representation"),
        }
    }

    pub fn spectral(&self) -> Cow<'_, [Vec<Complex64>]> {
        match (&self.spectral, &self.physical) {
            (Some(s), _) => Cow::Borrowed(s.as_slice()),
            (None, Some(p)) => Cow::Owned(p.iter().map(|c| fft::forward_real(self.grid.n(), c)).collect()),
            (None, None) => unreachable!("field without representation"),
        }
    }

    pub fn ensure_physical(&mut self) -> &[Vec<f64>] {
        if self.physical.is_none() {
            self.physical = Some(self.physical().into_owned());
        }
        self.physical.as_deref().unwrap()
    }

    pub fn ensure_spectral(&mut self) -> &[Vec<Complex64>] {
        if self.spectral.is_none() {
            self.spectral = Some(self.spectral().into_owned());
        }
        self.spectral.as_deref().unwrap()
    }

    /// Physical samples of a scalar field.
    pub fn scalar_physical(&self) -> Cow<'_, [f64]> {
        match self.physical() {
            Cow::Borrowed(p) => Cow::Borrowed(p[0].as_slice()),
            Cow::Owned(mut p) => Cow::Owned(p.swap_remove(0)),
        }
    }

    /// Fourier coefficients of a scalar field.
    pub fn scalar_spectral(&self) -> Cow<'_, [Complex64]> {
        match self.spectral() {
            Cow::Borrowed(s) => Cow::Borrowed(s[0].as_slice()),
            Cow::Owned(mut s) => Cow::Owned(s.swap_remove(0)),
        }
    }

    pub fn into_spectral(self) -> Vec<Vec<Complex64>> {
        match self.spectral {
            Some(s) => s,
            None => self.spectral().into_owned(),
        }
    }

    /// Mean value of each component.
    pub fn mean(&self) -> Vec<f64> {
        let norm = 1.0 / self.grid.len() as f64;
        match (&self.spectral, &self.physical) {
            (Some(s), _) => s.iter().map(|c| c[0].re * norm).collect(),
            (None, Some(p)) => p.iter().map(|c| c.iter().sum::<f64>() * norm).collect(),
            (None, None) => unreachable!(),
        }
    }

    /// Largest value of `|ξ·v̂(ξ)|` relative to `max |v̂|` for a vector field.
    pub fn divergence_residual(&self) -> f64 {
        assert_eq!(self.ncomp, 2, "divergence of a scalar field");
        let s = self.spectral();
        let n = self.grid.n();
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for idx in 0..self.grid.len() {
            let (r, c) = (idx / n, idx % n);
            let d = s[0][idx] * self.grid.xi_odd(c) + s[1][idx] * self.grid.xi_odd(r);
            worst = worst.max(d.norm());
            scale = scale.max(s[0][idx].norm()).max(s[1][idx].norm());
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Apply a real Fourier multiplier to every component, returning a new
    /// field in spectral form.
    pub(crate) fn map_multiplier(&self, symbol: impl Fn(usize) -> f64) -> SpectralField {
        let spec = self.spectral();
        let comps = spec
            .iter()
            .map(|c| c.iter().enumerate().map(|(i, v)| v * symbol(i)).collect())
            .collect();
        SpectralField {
            grid: self.grid,
            ncomp: self.ncomp,
            physical: None,
            spectral: Some(comps),
            divergence_free: self.divergence_free,
        }
    }

    /// Pointwise linear combination `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &SpectralField, b: f64) -> Result<SpectralField> {
        self.check_compatible(other)?;
        let (x, y) = (self.spectral(), other.spectral());
        let comps = x
            .iter()
            .zip(y.iter())
            .map(|(u, v)| u.iter().zip(v).map(|(p, q)| p * a + q * b).collect())
            .collect();
        Ok(SpectralField {
            grid: self.grid,
            ncomp: self.ncomp,
            physical: None,
            spectral: Some(comps),
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    pub fn check_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid || self.ncomp != other.ncomp {
            return Err(Error::Mismatch(format!(
                "fields differ: {}x{} ({} comps) vs {}x{} ({} comps)",
                self.grid.n(),
                self.grid.n(),
                self.ncomp,
                other.grid.n(),
                other.grid.n(),
                other.ncomp
            )));
        }
        Ok(())
    }

    /// Spectrally resample onto a grid of another size (zero padding or
    /// truncation of the coefficient array).
    pub fn resample(&self, n_new: usize) -> Result<SpectralField> {
        let grid = Grid::new(n_new, self.grid.length())?;
        let n = self.grid.n();
        let spec = self.spectral();
        let scale = (n_new * n_new) as f64 / (n * n) as f64;
        let comps = spec
            .iter()
            .map(|c| {
                let mut out = vec![Complex64::default(); grid.len()];
                let half = (n.min(n_new) / 2) as i64;
                for (idx, v) in c.iter().enumerate() {
                    let (r, col) = (idx / n, idx % n);
                    let (kr, kc) = (self.grid.wave_index(r), self.grid.wave_index(col));
                    // drop the (ambiguous) Nyquist lines when resampling
                    if kr.abs() >= half || kc.abs() >= half {
                        continue;
                    }
                    let rr = kr.rem_euclid(n_new as i64) as usize;
                    let cc = kc.rem_euclid(n_new as i64) as usize;
                    out[rr * n_new + cc] = v * scale;
                }
                out
            })
            .collect();
        Ok(SpectralField {
            grid,
            ncomp: self.ncomp,
            physical: None,
            spectral: Some(comps),
            divergence_free: self.divergence_free,
        })
    }
}

fn check_shape(grid: &Grid, ncomp: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    if ncomp != 1 && ncomp != 2 {
        return Err(Error::MalformedField(format!(
            "expected 1 or 2 components, got {ncomp}"
        )));
    }
    for len in lens {
        if len != grid.len() {
            return Err(Error::MalformedField(format!(
                "component has {len} samples, grid needs {}",
                grid.len()
            )));
        }
    }
    Ok(())
}
