//! `L²` distance between the velocity fields of two patches.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::{geometry, quadrature, Kernel, PatchContour};
use crate::error::{Error, Result};

/// Default box half-width in patch diameters.
pub const DEFAULT_BOX_DIAMETERS: f64 = 4.0;
/// Required clearance between the patches and the box edge, in diameters.
pub const MIN_MARGIN_DIAMETERS: f64 = 2.0;
/// Highest multipole order kept in the tail correction.
const TAIL_ORDER: usize = 4;

/// Result of [`patch_l2_difference`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchL2 {
    /// `‖v_A − v_B‖_{L²(R²)}`: box quadrature plus the tail estimate.
    pub norm: f64,
    /// Squared norm from the box alone.
    pub box_sq: f64,
    /// Squared-norm estimate for the exterior of the box.
    pub tail_sq: f64,
    pub half_width: f64,
}

/// `‖v_A − v_B‖_{L²}` for the Euler (log-kernel) velocities of two patches.
///
/// Both velocities are evaluated at the cell centres of a
/// `resolution × resolution` grid over a square box centred on the first
/// patch's centroid. Outside the box the difference is replaced by its
/// multipole expansion: total circulation and centroid agree for the two
/// patches, so the field decays at least like `|x|⁻³` and the tail is a
/// small correction of order `half_width⁻⁴` (`half_width⁻²` if the centroids
/// drift apart).
pub fn patch_l2_difference(
    a: &PatchContour,
    b: &PatchContour,
    box_half_width: Option<f64>,
    resolution: usize,
) -> Result<PatchL2> {
    l2_difference(a, b, Kernel::Log, box_half_width, resolution)
}

/// As [`patch_l2_difference`] but against the filtered velocity
/// `u^α = K^α ∗ q^α` of the second patch. The two fields differ in a layer
/// of width `α` around the boundary, which this norm resolves directly.
/// Beyond the box the `K0` part of the kernel is exponentially small, so
/// the same multipole tail applies.
pub fn patch_l2_filtered_difference(
    a: &PatchContour,
    b: &PatchContour,
    alpha: f64,
    box_half_width: Option<f64>,
    resolution: usize,
) -> Result<PatchL2> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    l2_difference(a, b, Kernel::Alpha(alpha), box_half_width, resolution)
}

fn l2_difference(
    a: &PatchContour,
    b: &PatchContour,
    kernel_b: Kernel,
    box_half_width: Option<f64>,
    resolution: usize,
) -> Result<PatchL2> {
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "evaluation grid resolution must be at least 2, got {resolution}"
        )));
    }
    let center = a.centroid();
    let diam = a.diameter().max(b.diameter());
    let half = box_half_width.unwrap_or(DEFAULT_BOX_DIAMETERS * diam);
    let extent = a
        .points()
        .iter()
        .chain(b.points().iter())
        .map(|p| (p[0] - center[0]).abs().max((p[1] - center[1]).abs()))
        .fold(0.0f64, f64::max);
    if half - extent < MIN_MARGIN_DIAMETERS * diam {
        return Err(Error::BoxTooSmall(format!(
            "half-width {half} leaves margin {} but {} (2 diameters) is required",
            half - extent,
            MIN_MARGIN_DIAMETERS * diam
        )));
    }
    let h = 2.0 * half / resolution as f64;
    let pts: Vec<[f64; 2]> = (0..resolution * resolution)
        .map(|i| {
            let (r, c) = (i / resolution, i % resolution);
            [
                center[0] - half + (c as f64 + 0.5) * h,
                center[1] - half + (r as f64 + 0.5) * h,
            ]
        })
        .collect();
    let va = quadrature::point_velocity(a.x(), a.y(), a.q0(), Kernel::Log, &pts);
    let vb = quadrature::point_velocity(b.x(), b.y(), b.q0(), kernel_b, &pts);
    let box_sq: f64 = va
        .iter()
        .zip(&vb)
        .map(|(p, q)| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2))
        .sum::<f64>()
        * h
        * h;
    let tail_sq = tail_estimate(a, b, center, half);
    Ok(PatchL2 {
        norm: (box_sq + tail_sq).sqrt(),
        box_sq,
        tail_sq,
        half_width: half,
    })
}

/// `∫_{|x|∞ > H} |w|²` for the multipole field of the moment difference,
/// `w₁ − i w₂ = (1/2πi) Σ_{k≥1} Δm_k / z^{k+1}` about `center`.
///
/// The monopole is omitted: both patches carry the same circulation
/// exactly, and any residual is area-conservation noise whose tail
/// integral would diverge logarithmically.
fn tail_estimate(a: &PatchContour, b: &PatchContour, center: [f64; 2], half: f64) -> f64 {
    let moments = |c: &PatchContour| {
        let x: Vec<f64> = c.x().iter().map(|v| v - center[0]).collect();
        let y: Vec<f64> = c.y().iter().map(|v| v - center[1]).collect();
        geometry::complex_moments(&x, &y, TAIL_ORDER + 1)
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im) * c.q0())
            .collect::<Vec<_>>()
    };
    let (ma, mb) = (moments(a), moments(b));
    let dm: Vec<Complex64> = ma.iter().zip(&mb).map(|(p, q)| p - q).collect();
    // polar quadrature outside the square; r = ρ(θ)/s with s ∈ (0, 1]
    let (nt, ns) = (512, 64);
    let mut sum = 0.0;
    for it in 0..nt {
        let th = 2.0 * PI * (it as f64 + 0.5) / nt as f64;
        let rho = half / th.cos().abs().max(th.sin().abs());
        for is in 0..ns {
            let s = (is as f64 + 0.5) / ns as f64;
            let r = rho / s;
            let z = Complex64::from_polar(r, th);
            let mut w = Complex64::default();
            for (k, d) in dm.iter().enumerate().skip(1) {
                w += d / z.powu(k as u32 + 1);
            }
            let w2 = w.norm_sqr() / (4.0 * PI * PI);
            // |w|² r dr = |w|² ρ²/s³ ds
            sum += w2 * rho * rho / (s * s * s);
        }
    }
    sum * (2.0 * PI / nt as f64) * (1.0 / ns as f64)
}
