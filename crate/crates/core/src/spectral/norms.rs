//! Lebesgue, Sobolev and homogeneous Besov norms on the torus.
//!
//! All spectral sums use the discrete Plancherel identity
//! `∫|f|² dx = (L²/N⁴) Σ_ξ |f̂(ξ)|²` for the unnormalised forward transform.

use std::collections::BTreeMap;

use rustfft::num_complex::Complex64;

use super::field::SpectralField;
use crate::error::{Error, Result};

/// `‖f‖_{L^p}` by grid quadrature; vector fields use the pointwise
/// Euclidean magnitude. `p = f64::INFINITY` gives the maximum.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain {
            what: "lp_norm requires p >= 1",
            value: p,
        });
    }
    let phys = f.physical();
    let len = f.grid().len();
    let mag = |i: usize| -> f64 {
        if phys.len() == 1 {
            phys[0][i].abs()
        } else {
            phys[0][i].hypot(phys[1][i])
        }
    };
    if p.is_infinite() {
        return Ok((0..len).map(mag).fold(0.0, f64::max));
    }
    let da = f.grid().cell_area();
    let sum: f64 = (0..len).map(|i| mag(i).powf(p)).sum();
    Ok((sum * da).powf(1.0 / p))
}

/// `‖f‖_{H^s}` with weight `(1 + |ξ|²)^s`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    let g = *f.grid();
    let spec = f.spectral();
    let n2 = g.len() as f64;
    let mut sum = 0.0;
    for comp in spec.iter() {
        for (idx, v) in comp.iter().enumerate() {
            let w = (1.0 + g.xi_sq(idx)).powf(s);
            sum += w * v.norm_sqr();
        }
    }
    g.length() * sum.sqrt() / n2
}

/// Sum exponent of a Besov norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesovSum {
    Finite(f64),
    Sup,
}

impl BesovSum {
    pub fn from_f64(r: f64) -> Result<Self> {
        if r.is_infinite() && r > 0.0 {
            Ok(BesovSum::Sup)
        } else if r >= 1.0 {
            Ok(BesovSum::Finite(r))
        } else {
            Err(Error::Domain {
                what: "Besov sum exponent must satisfy 1 <= r <= inf",
                value: r,
            })
        }
    }
}

/// Littlewood–Paley decomposition with sharp, disjoint frequency shells.
///
/// Every nonzero wavevector is assigned to block `q = ⌊log₂(4|ξ|/3)⌋`, so
/// block `q` covers `¾·2^q ≤ |ξ| < 3/2·2^q`. That sits inside the nominal
/// annulus `¾·2^q ≤ |ξ| ≤ 8/3·2^q`, the shells are disjoint, and the blocks
/// sum to the field minus its mean.
#[derive(Debug, Clone)]
pub struct DyadicBlockSet {
    source: SpectralField,
    blocks: BTreeMap<i32, Vec<usize>>,
}

/// Block index of a nonzero frequency magnitude.
pub fn block_index(xi_abs: f64) -> i32 {
    (4.0 * xi_abs / 3.0).log2().floor() as i32
}

/// Nominal annulus `[¾·2^q, 8/3·2^q]` containing block `q`.
pub fn block_annulus(q: i32) -> (f64, f64) {
    let base = 2f64.powi(q);
    (0.75 * base, 8.0 / 3.0 * base)
}

impl DyadicBlockSet {
    pub fn new(f: &SpectralField) -> Self {
        let g = *f.grid();
        let mut blocks: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for idx in 1..g.len() {
            let k = g.xi_sq(idx).sqrt();
            blocks.entry(block_index(k)).or_default().push(idx);
        }
        Self {
            source: f.clone(),
            blocks,
        }
    }

    /// Block indices present on this grid, ascending.
    pub fn indices(&self) -> Vec<i32> {
        self.blocks.keys().copied().collect()
    }

    /// Flat spectral indices retained by block `q`.
    pub fn support(&self, q: i32) -> &[usize] {
        self.blocks.get(&q).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `Δ_q f` as a field.
    pub fn block(&self, q: i32) -> SpectralField {
        let g = *self.source.grid();
        let spec = self.source.spectral();
        let comps = spec
            .iter()
            .map(|c| {
                let mut out = vec![Complex64::default(); g.len()];
                for &i in self.support(q) {
                    out[i] = c[i];
                }
                out
            })
            .collect();
        SpectralField::from_spectral(g, comps).expect("shape is fixed")
    }

    /// `‖Δ_q f‖_{L²}`.
    pub fn block_l2(&self, q: i32) -> f64 {
        block_l2s(&self.source, &self.blocks).get(&q).copied().unwrap_or(0.0)
    }

    /// Sum of all blocks.
    pub fn reconstruct(&self) -> SpectralField {
        let g = *self.source.grid();
        let mut acc: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); g.len()]; self.source.components()];
        for q in self.indices() {
            let b = self.block(q);
            for (a, c) in acc.iter_mut().zip(b.spectral().iter()) {
                for (x, y) in a.iter_mut().zip(c) {
                    *x += y;
                }
            }
        }
        SpectralField::from_spectral(g, acc).expect("shape is fixed")
    }
}

fn block_l2s(f: &SpectralField, blocks: &BTreeMap<i32, Vec<usize>>) -> BTreeMap<i32, f64> {
    let g = *f.grid();
    let spec = f.spectral();
    let scale = g.length() / g.len() as f64;
    blocks
        .iter()
        .map(|(&q, idxs)| {
            let e: f64 = spec
                .iter()
                .map(|c| idxs.iter().map(|&i| c[i].norm_sqr()).sum::<f64>())
                .sum();
            (q, scale * e.sqrt())
        })
        .collect()
}

/// Per-block weighted sizes `2^{sq}‖Δ_q f‖_{L²}` for every representable
/// block.
pub fn besov_profile(f: &SpectralField, s: f64) -> Vec<(i32, f64)> {
    let set = DyadicBlockSet::new(f);
    block_l2s(f, &set.blocks)
        .into_iter()
        .map(|(q, l2)| (q, 2f64.powf(s * q as f64) * l2))
        .collect()
}

/// Homogeneous Besov norm `‖f‖_{Ḃ^s_{2,r}}` over the blocks representable
/// on the grid. The mean is not part of any block and is ignored.
pub fn besov_norm(f: &SpectralField, s: f64, r: BesovSum) -> f64 {
    let prof = besov_profile(f, s);
    match r {
        BesovSum::Sup => prof.iter().map(|&(_, v)| v).fold(0.0, f64::max),
        BesovSum::Finite(r) => prof.iter().map(|&(_, v)| v.powf(r)).sum::<f64>().powf(1.0 / r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    #[test]
    fn lp_norms_of_constant_and_mode() {
        let g = Grid::periodic(32).unwrap();
        let c = SpectralField::scalar_from_fn(g, |_, _| 3.0);
        let area = 4.0 * PI * PI;
        assert!((lp_norm(&c, 1.0).unwrap() - 3.0 * area).abs() < 1e-10);
        assert!((lp_norm(&c, 2.0).unwrap() - 3.0 * 2.0 * PI).abs() < 1e-10);
        assert_eq!(lp_norm(&c, f64::INFINITY).unwrap(), 3.0);
        assert!(lp_norm(&c, 0.5).is_err());
    }

    #[test]
    fn sobolev_constant_and_sine() {
        let g = Grid::periodic(16).unwrap();
        let c = SpectralField::scalar_from_fn(g, |_, _| -2.0);
        for s in [0.0, 1.0, 3.5] {
            assert!((sobolev_norm(&c, s) - 2.0 * 2.0 * PI).abs() < 1e-12);
        }
        let f = SpectralField::scalar_from_fn(g, |x, _| x.sin());
        let l2 = sobolev_norm(&f, 0.0);
        let h1 = sobolev_norm(&f, 1.0);
        assert!((h1 * h1 - 2.0 * l2 * l2).abs() < 1e-12 * h1 * h1);
    }

    #[test]
    fn single_mode_block() {
        let g = Grid::periodic(64).unwrap();
        let f = SpectralField::scalar_from_fn(g, |x, _| (8.0 * x).cos());
        let l2 = sobolev_norm(&f, 0.0);
        let set = DyadicBlockSet::new(&f);
        assert!((set.block_l2(3) - l2).abs() < 1e-12);
        for s in [0.5, 1.0, -0.5] {
            let want = 2f64.powf(3.0 * s) * l2;
            assert!((besov_norm(&f, s, BesovSum::Sup) - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn block_supports_inside_annuli() {
        let g = Grid::periodic(64).unwrap();
        let f = SpectralField::scalar_from_fn(g, |x, y| x.sin() * y.cos());
        let set = DyadicBlockSet::new(&f);
        for q in set.indices() {
            let (lo, hi) = block_annulus(q);
            for &i in set.support(q) {
                let k = g.xi_sq(i).sqrt();
                assert!(k >= lo && k <= hi, "|xi| = {k} outside block {q}");
            }
        }
    }

    #[test]
    fn besov_sum_parsing() {
        assert_eq!(BesovSum::from_f64(f64::INFINITY).unwrap(), BesovSum::Sup);
        assert_eq!(BesovSum::from_f64(2.0).unwrap(), BesovSum::Finite(2.0));
        assert!(BesovSum::from_f64(0.5).is_err());
    }
}
