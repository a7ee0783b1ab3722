//! Contour dynamics for vortex patches.
//!
//! A patch of constant vorticity `q₀` is represented by its boundary alone,
//! a closed counterclockwise marker chain `x(σ)` at uniform parameter
//! spacing `2π/M`. Markers move with
//!
//! ```text
//! ∂x/∂t(σ) = −q₀ ∮ Ψ(|x(σ) − x(σ′)|) ∂x/∂σ(σ′) dσ′
//! ```
//!
//! with `Ψ = log r / 2π` (Euler) or the Bessel kernel `Ψα` (Euler-α).

pub mod fourier;
pub mod geometry;
mod l2;
mod quadrature;
mod run;

use std::f64::consts::PI;

pub use geometry::HolderEstimate;
pub use l2::{patch_l2_difference, patch_l2_filtered_difference, PatchL2};
pub use quadrature::Kernel;
pub use run::{
    monitors_csv, planned_dt, read_contour_csv, run_contour, run_contour_from, write_contour_csv,
    write_contour_outputs, ContourConfig, ContourRun, KernelKind, MonitorRow, Shape,
};

use crate::error::{Error, Result};

/// Chord-arc ratio below which a contour is treated as degenerate.
pub const DEFAULT_CHORD_ARC_FLOOR: f64 = 0.01;

/// Closed, positively oriented boundary of a vortex patch.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchContour {
    x: Vec<f64>,
    y: Vec<f64>,
    q0: f64,
}

impl PatchContour {
    /// Build from markers at uniform parameter spacing. Clockwise input is
    /// rejected rather than silently reversed.
    pub fn new(points: &[[f64; 2]], q0: f64) -> Result<Self> {
        let x: Vec<f64> = points.iter().map(|p| p[0]).collect();
        let y: Vec<f64> = points.iter().map(|p| p[1]).collect();
        Self::from_xy(x, y, q0)
    }

    pub fn from_xy(x: Vec<f64>, y: Vec<f64>, q0: f64) -> Result<Self> {
        if x.len() != y.len() || x.len() < 3 {
            return Err(Error::Mismatch(format!(
                "contour needs at least 3 markers with matching coordinates, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) || !q0.is_finite() {
            return Err(Error::NonFinite("contour marker or strength".into()));
        }
        if geometry::polygon_area(&x, &y) <= 0.0 {
            return Err(Error::DegenerateContour {
                chord_arc: 0.0,
                floor: 0.0,
            });
        }
        Ok(Self { x, y, q0 })
    }

    /// Markers on `center + r(θ)(cos θ, sin θ)` at `θ_j = 2πj/M`.
    pub fn polar(m: usize, q0: f64, center: [f64; 2], r: impl Fn(f64) -> f64) -> Result<Self> {
        let (mut x, mut y) = (Vec::with_capacity(m), Vec::with_capacity(m));
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            let rr = r(t);
            x.push(center[0] + rr * t.cos());
            y.push(center[1] + rr * t.sin());
        }
        Self::from_xy(x, y, q0)
    }

    pub fn circle(m: usize, radius: f64, q0: f64) -> Result<Self> {
        Self::polar(m, q0, [0.0, 0.0], |_| radius)
    }

    /// Ellipse with semi-axes `a` (along x1) and `b`, parametrized by the
    /// eccentric angle.
    pub fn ellipse(m: usize, a: f64, b: f64, q0: f64) -> Result<Self> {
        let s = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64);
        let x = s.clone().map(|t| a * t.cos()).collect();
        let y = s.map(|t| b * t.sin()).collect();
        Self::from_xy(x, y, q0)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.x.iter().zip(&self.y).map(|(a, b)| [*a, *b]).collect()
    }

    /// Enclosed area from the spectral representation of the chain.
    pub fn area(&self) -> f64 {
        geometry::spectral_area(&self.x, &self.y)
    }

    pub fn centroid(&self) -> [f64; 2] {
        geometry::centroid(&self.x, &self.y)
    }

    /// Largest distance between two markers.
    pub fn diameter(&self) -> f64 {
        let m = self.len();
        let mut d = 0.0f64;
        for i in 0..m {
            for j in (i + 1)..m {
                d = d.max((self.x[i] - self.x[j]).hypot(self.y[i] - self.y[j]));
            }
        }
        d
    }

    /// Smallest distance between consecutive markers.
    pub fn min_spacing(&self) -> f64 {
        let m = self.len();
        (0..m)
            .map(|j| {
                let k = (j + 1) % m;
                (self.x[k] - self.x[j]).hypot(self.y[k] - self.y[j])
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// The same curve resampled at `m_new ≥ M` markers by trigonometric
    /// interpolation.
    pub fn refined(&self, m_new: usize) -> Self {
        Self {
            x: fourier::upsample(&self.x, m_new),
            y: fourier::upsample(&self.y, m_new),
            q0: self.q0,
        }
    }

    /// Markers as a closed polygon of `M·factor` points on the spectral
    /// interpolant.
    pub fn dense_polygon(&self, factor: usize) -> Vec<[f64; 2]> {
        let m = self.len() * factor.max(1);
        let (x, y) = (fourier::upsample(&self.x, m), fourier::upsample(&self.y, m));
        x.into_iter().zip(y).map(|(a, b)| [a, b]).collect()
    }
}

/// `|x|_* = min_{i≠j} |x_i − x_j| / d(σ_i, σ_j)`.
pub fn chord_arc_ratio(c: &PatchContour) -> f64 {
    geometry::chord_arc_ratio(&c.x, &c.y)
}

/// Discrete Hölder seminorm of the `n`-th parameter derivative.
pub fn holder_seminorm(c: &PatchContour, n: u32, beta: f64) -> Result<HolderEstimate> {
    if n > 3 {
        return Err(Error::Domain {
            what: "holder_seminorm supports derivative orders 0..=3",
            value: n as f64,
        });
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain {
            what: "holder exponent must lie in (0, 1]",
            value: beta,
        });
    }
    Ok(geometry::holder_seminorm(&c.x, &c.y, n, beta))
}

fn check_chord_arc(c: &PatchContour, floor: f64) -> Result<f64> {
    let ca = chord_arc_ratio(c);
    if !(ca >= floor) {
        return Err(Error::DegenerateContour { chord_arc: ca, floor });
    }
    Ok(ca)
}

/// Velocity induced by the patch at arbitrary points, `−q₀ ∮ Ψ x_σ dσ′`.
///
/// With the log kernel this is the Euler velocity `K ∗ (q₀χ_Ω)`; with the α
/// kernel it is the filtered velocity `Kα ∗ (q₀χ_Ω)`. Points on the contour
/// (exactly at a marker) are handled by the singular quadrature.
pub fn contour_velocity(c: &PatchContour, kernel: Kernel, points: &[[f64; 2]]) -> Result<Vec<[f64; 2]>> {
    check_kernel(kernel)?;
    check_chord_arc(c, DEFAULT_CHORD_ARC_FLOOR)?;
    Ok(quadrature::point_velocity(&c.x, &c.y, c.q0, kernel, points))
}

/// Velocity at every marker.
pub fn marker_velocity(c: &PatchContour, kernel: Kernel) -> (Vec<f64>, Vec<f64>) {
    quadrature::boundary_velocity(&c.x, &c.y, c.q0, kernel)
}

fn check_kernel(kernel: Kernel) -> Result<()> {
    if let Kernel::Alpha(a) = kernel {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain {
                what: "alpha kernel requires alpha > 0",
                value: a,
            });
        }
    }
    Ok(())
}

/// Settings for [`step`].
#[derive(Debug, Clone, Copy)]
pub struct ContourStepOptions {
    /// Largest accepted `dt·max|v|/min spacing`.
    pub cfl_limit: f64,
    pub chord_arc_floor: f64,
}

impl Default for ContourStepOptions {
    fn default() -> Self {
        Self {
            cfl_limit: 1.0,
            chord_arc_floor: DEFAULT_CHORD_ARC_FLOOR,
        }
    }
}

fn max_speed(vx: &[f64], vy: &[f64]) -> f64 {
    vx.iter().zip(vy).fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)))
}

/// One classical RK4 step of all markers.
pub fn step(c: &PatchContour, dt: f64, kernel: Kernel, opts: &ContourStepOptions) -> Result<PatchContour> {
    check_kernel(kernel)?;
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::Domain {
            what: "time step must be finite and >= 0",
            value: dt,
        });
    }
    if dt == 0.0 {
        return Ok(c.clone());
    }
    let m = c.len();
    let q0 = c.q0;
    let f = |x: &[f64], y: &[f64]| quadrature::boundary_velocity(x, y, q0, kernel);
    let (k1x, k1y) = f(&c.x, &c.y);
    let speed = max_speed(&k1x, &k1y);
    if speed > 0.0 {
        let spacing = c.min_spacing();
        let limit = opts.cfl_limit * spacing / speed;
        if dt > limit {
            return Err(Error::Cfl {
                dt,
                limit,
                max_speed: speed,
                spacing,
            });
        }
    }
    let stage = |kx: &[f64], ky: &[f64], h: f64| -> (Vec<f64>, Vec<f64>) {
        (
            (0..m).map(|j| c.x[j] + h * kx[j]).collect(),
            (0..m).map(|j| c.y[j] + h * ky[j]).collect(),
        )
    };
    let (sx, sy) = stage(&k1x, &k1y, 0.5 * dt);
    let (k2x, k2y) = f(&sx, &sy);
    let (sx, sy) = stage(&k2x, &k2y, 0.5 * dt);
    let (k3x, k3y) = f(&sx, &sy);
    let (sx, sy) = stage(&k3x, &k3y, dt);
    let (k4x, k4y) = f(&sx, &sy);
    let w = dt / 6.0;
    let x: Vec<f64> = (0..m)
        .map(|j| c.x[j] + w * (k1x[j] + 2.0 * (k2x[j] + k3x[j]) + k4x[j]))
        .collect();
    let y: Vec<f64> = (0..m)
        .map(|j| c.y[j] + w * (k1y[j] + 2.0 * (k2y[j] + k3y[j]) + k4y[j]))
        .collect();
    if x.iter().chain(&y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("marker positions after contour step".into()));
    }
    let next = PatchContour { x, y, q0 };
    check_chord_arc(&next, opts.chord_arc_floor)?;
    Ok(next)
}

/// Redistribute markers to equal arc length.
pub fn reparametrize(c: &PatchContour) -> PatchContour {
    let (x, y) = geometry::equal_arclength(&c.x, &c.y);
    PatchContour { x, y, q0: c.q0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_boundary_point_velocity() {
        let c = PatchContour::circle(128, 1.0, 1.0).unwrap();
        let v = contour_velocity(&c, Kernel::Log, &[[1.0, 0.0]]).unwrap()[0];
        assert!(v[0].abs() < 1e-13 && (v[1] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn chord_arc_scales_linearly() {
        let c = PatchContour::ellipse(64, 1.0, 0.6, 1.0).unwrap();
        let big = PatchContour::from_xy(
            c.x().iter().map(|v| 3.0 * v).collect(),
            c.y().iter().map(|v| 3.0 * v).collect(),
            1.0,
        )
        .unwrap();
        let (a, b) = (chord_arc_ratio(&c), chord_arc_ratio(&big));
        assert!((b - 3.0 * a).abs() < 1e-13 * b);
    }

    #[test]
    fn rejects_clockwise_and_short() {
        let cw = [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]];
        assert!(PatchContour::new(&cw, 1.0).is_err());
        assert!(PatchContour::new(&cw[..2], 1.0).is_err());
    }

    #[test]
    fn zero_step_is_identity() {
        let c = PatchContour::circle(32, 1.0, 1.0).unwrap();
        let d = step(&c, 0.0, Kernel::Alpha(0.1), &ContourStepOptions::default()).unwrap();
        assert_eq!(c, d);
    }
}
