//! Fourier-multiplier operators on periodic fields.

use rustfft::num_complex::Complex64;

use super::field::SpectralField;
use crate::error::{Error, Result};

/// Relative size of the mean (against the RMS) tolerated as rounding noise
/// by the mean-free checks.
pub const MEAN_TOLERANCE: f64 = 1e-10;

/// Inverse Helmholtz operator: `û(ξ) = v̂(ξ) / (1 + α²|ξ|²)`.
///
/// `alpha = 0` returns an exact copy.
pub fn helmholtz_filter(v: &SpectralField, alpha: f64) -> Result<SpectralField> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::Domain {
            what: "helmholtz_filter requires alpha >= 0",
            value: alpha,
        });
    }
    if alpha == 0.0 {
        return Ok(v.clone());
    }
    let g = *v.grid();
    let a2 = alpha * alpha;
    Ok(v.map_multiplier(|i| 1.0 / (1.0 + a2 * g.xi_sq(i))))
}

/// Multiply by `|ξ|^β`; the zero mode maps to zero.
pub fn fractional_laplacian(f: &SpectralField, beta: f64) -> Result<SpectralField> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::Domain {
            what: "fractional_laplacian requires beta >= 0",
            value: beta,
        });
    }
    let g = *f.grid();
    let half = 0.5 * beta;
    Ok(f.map_multiplier(|i| {
        let k2 = g.xi_sq(i);
        if k2 == 0.0 {
            0.0
        } else {
            k2.powf(half)
        }
    }))
}

/// Check that a scalar field has zero mean (to rounding).
pub fn ensure_mean_free(q: &SpectralField) -> Result<()> {
    let spec = q.scalar_spectral();
    let n2 = q.grid().len() as f64;
    let mean = spec[0].re / n2;
    let energy: f64 = spec.iter().map(|c| c.norm_sqr()).sum::<f64>() / (n2 * n2);
    let rms = energy.sqrt();
    if mean.abs() > MEAN_TOLERANCE * rms {
        return Err(Error::NonZeroMean { mean });
    }
    Ok(())
}

/// Velocity from vorticity on the torus.
///
/// With `alpha = 0` this is the Biot–Savart law `v = K ∗ q`; with
/// `alpha > 0` it returns the filtered velocity `(1 − α²Δ)⁻¹ K ∗ q`.
/// The result is the unique zero-mean, divergence-free field whose curl is
/// `q` (filtered accordingly).
pub fn biot_savart(q: &SpectralField, alpha: f64) -> Result<SpectralField> {
    if !q.is_scalar() {
        return Err(Error::MalformedField("biot_savart needs a scalar vorticity".into()));
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::Domain {
            what: "biot_savart requires alpha >= 0",
            value: alpha,
        });
    }
    ensure_mean_free(q)?;
    Ok(biot_savart_unchecked(q, alpha))
}

pub(crate) fn biot_savart_unchecked(q: &SpectralField, alpha: f64) -> SpectralField {
    let g = *q.grid();
    let n = g.n();
    let spec = q.scalar_spectral();
    let a2 = alpha * alpha;
    let mut v1 = vec![Complex64::default(); g.len()];
    let mut v2 = vec![Complex64::default(); g.len()];
    for idx in 1..g.len() {
        let (r, c) = (idx / n, idx % n);
        let k2 = g.xi_sq(idx);
        // stream function ψ with Δψ = q, filtered
        let psi = -spec[idx] / (k2 * (1.0 + a2 * k2));
        let i_psi = Complex64::new(-psi.im, psi.re);
        v1[idx] = -i_psi * g.xi_odd(r);
        v2[idx] = i_psi * g.xi_odd(c);
    }
    SpectralField::from_spectral(g, vec![v1, v2])
        .expect("shape is fixed")
        .with_divergence_free(true)
}

/// Gradient of a scalar field.
pub fn gradient(f: &SpectralField) -> Result<SpectralField> {
    if !f.is_scalar() {
        return Err(Error::MalformedField("gradient needs a scalar field".into()));
    }
    let g = *f.grid();
    let n = g.n();
    let spec = f.scalar_spectral();
    let mut d1 = vec![Complex64::default(); g.len()];
    let mut d2 = vec![Complex64::default(); g.len()];
    for (idx, v) in spec.iter().enumerate() {
        let iv = Complex64::new(-v.im, v.re);
        d1[idx] = iv * g.xi_odd(idx % n);
        d2[idx] = iv * g.xi_odd(idx / n);
    }
    SpectralField::from_spectral(g, vec![d1, d2])
}

/// Scalar curl `∂₁v₂ − ∂₂v₁` of a vector field.
pub fn curl(v: &SpectralField) -> Result<SpectralField> {
    if v.components() != 2 {
        return Err(Error::MalformedField("curl needs a vector field".into()));
    }
    let g = *v.grid();
    let n = g.n();
    let spec = v.spectral();
    let out = (0..g.len())
        .map(|idx| {
            let w = spec[1][idx] * g.xi_odd(idx % n) - spec[0][idx] * g.xi_odd(idx / n);
            Complex64::new(-w.im, w.re)
        })
        .collect();
    SpectralField::from_spectral(g, vec![out])
}

/// Pointwise maximum of the Frobenius norm of `∇v`.
pub fn max_gradient_norm(v: &SpectralField) -> Result<f64> {
    if v.components() != 2 {
        return Err(Error::MalformedField("velocity gradient needs a vector field".into()));
    }
    let g = *v.grid();
    let spec = v.spectral();
    let mut sq = vec![0.0; g.len()];
    for comp in spec.iter() {
        let f = SpectralField::from_spectral(g, vec![comp.clone()])?;
        let grad = gradient(&f)?;
        for d in grad.physical().iter() {
            for (s, x) in sq.iter_mut().zip(d) {
                *s += x * x;
            }
        }
    }
    Ok(sq.into_iter().fold(0.0f64, f64::max).sqrt())
}

/// Zero every coefficient outside the 2/3-rule box.
pub fn dealias_in_place(grid: &super::Grid, coeffs: &mut [Complex64]) {
    for (idx, v) in coeffs.iter_mut().enumerate() {
        if !grid.dealias_keep(idx) {
            *v = Complex64::default();
        }
    }
}
