//! Boundary integrals `−q₀ ∮ Ψ(|p − x(σ′)|) x_σ(σ′) dσ′` for the Euler
//! (`Ψ = log r / 2π`) and Euler-α (`Ψ = Ψα`) kernels.
//!
//! On the contour both kernels are split into a smooth part, integrated by
//! the trapezoid rule, and a multiple of `log|2 sin((σ − σ′)/2)|` times a
//! smooth density, integrated exactly against the density's trigonometric
//! interpolant. For the Bessel part `K0(r/α) = −I0(r/α) log(r/α) + (entire
//! in r²)` the logarithmic factor is removed under a C^∞ flat-top window `W`
//! in parameter distance, so the remainder stays smooth and the quadrature
//! converges spectrally.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::fourier;
use crate::special::{k0_i0_fast, k0_i0_with_log, EULER_GAMMA, K0_TABLE_MAX};

/// Window support in units of `r/α`; `I0` stays below ~2e4 inside it.
const WINDOW_Z: f64 = 12.0;
/// `K0(z)` is below 1e−18 beyond this and is dropped.
const K0_NEGLIGIBLE_Z: f64 = K0_TABLE_MAX;
/// Points closer than this many marker spacings use the near-field rules.
const NEAR_SPACINGS: f64 = 5.0;
/// Refinement of the near-field polygon.
const NEAR_UPSAMPLE: usize = 8;

/// Velocity kernel of the contour equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// Euler: `Ψ(r) = log r / 2π`.
    Log,
    /// Euler-α: `Ψα(r) = (K0(r/α) + log r) / 2π`.
    Alpha(f64),
}

impl Kernel {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            Kernel::Log => None,
            Kernel::Alpha(a) => Some(*a),
        }
    }
}

/// Smooth step: 1 on `[0, d1]`, 0 on `[d2, π]`, C^∞ in between.
fn window(d: f64, d1: f64, d2: f64) -> f64 {
    if d <= d1 {
        return 1.0;
    }
    if d >= d2 {
        return 0.0;
    }
    let u = (d - d1) / (d2 - d1);
    let f = |t: f64| if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() };
    let (a, b) = (f(1.0 - u), f(u));
    a / (a + b)
}

struct Chain<'a> {
    x: &'a [f64],
    y: &'a [f64],
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl<'a> Chain<'a> {
    fn new(x: &'a [f64], y: &'a [f64]) -> Self {
        Self {
            x,
            y,
            xs: fourier::derivative(x, 1),
            ys: fourier::derivative(y, 1),
        }
    }

    fn m(&self) -> usize {
        self.x.len()
    }

    fn max_speed(&self) -> f64 {
        self.xs
            .iter()
            .zip(&self.ys)
            .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

/// Velocity at every marker.
pub fn boundary_velocity(x: &[f64], y: &[f64], q0: f64, kernel: Kernel) -> (Vec<f64>, Vec<f64>) {
    let c = Chain::new(x, y);
    let rows: Vec<usize> = (0..c.m()).collect();
    boundary_rows(&c, q0, kernel, &rows)
}

fn boundary_rows(c: &Chain, q0: f64, kernel: Kernel, rows: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let m = c.m();
    let h = 2.0 * PI / m as f64;
    // log|2 sin(πk/m)| for k = 0..m (k = 0 unused)
    let lsin: Vec<f64> = (0..m)
        .map(|k| (2.0 * (PI * k as f64 / m as f64).sin()).abs().ln())
        .collect();
    let sing_x = fourier::log_sine_apply(&c.xs);
    let sing_y = fourier::log_sine_apply(&c.ys);
    let alpha_setup = kernel.alpha().map(|a| {
        let d2 = (WINDOW_Z * a / c.max_speed()).min(PI);
        let w: Vec<f64> = (0..m)
            .map(|k| window(2.0 * PI * k.min(m - k) as f64 / m as f64, 0.5 * d2, d2))
            .collect();
        (a, w, fourier::log_sine_weights(m))
    });
    let out: Vec<(f64, f64)> = rows
        .par_iter()
        .map(|&i| {
            let (xi, yi) = (c.x[i], c.y[i]);
            let speed_i = c.xs[i].hypot(c.ys[i]);
            // log kernel: smooth remainder by trapezoid, log-sine part exact
            let (mut ax, mut ay) = (speed_i.ln() * c.xs[i], speed_i.ln() * c.ys[i]);
            let (vx, vy);
            match alpha_setup {
                None => {
                    for j in (0..m).filter(|&j| j != i) {
                        let (dx, dy) = (xi - c.x[j], yi - c.y[j]);
                        let s = 0.5 * (dx * dx + dy * dy).ln() - lsin[(i + m - j) % m];
                        ax += s * c.xs[j];
                        ay += s * c.ys[j];
                    }
                    vx = h * ax + sing_x[i];
                    vy = h * ay + sing_y[i];
                }
                Some((a, ref win, ref rw)) => {
                    let inv_a = 1.0 / a;
                    let log_2a = (2.0 * a).ln();
                    // Bessel part: K0 + W·I0·log|2 sin| by trapezoid, −W·I0
                    // against the log-sine weights
                    let reg0 = (2f64.ln() - EULER_GAMMA) - (speed_i * inv_a).ln();
                    let (mut bx, mut by) = (reg0 * c.xs[i], reg0 * c.ys[i]);
                    let (mut px, mut py) = (-rw[0] * c.xs[i], -rw[0] * c.ys[i]);
                    for j in (0..m).filter(|&j| j != i) {
                        let k = (i + m - j) % m;
                        let (dx, dy) = (xi - c.x[j], yi - c.y[j]);
                        let r2 = dx * dx + dy * dy;
                        let lr = 0.5 * r2.ln();
                        let s = lr - lsin[k];
                        ax += s * c.xs[j];
                        ay += s * c.ys[j];
                        let z = r2.sqrt() * inv_a;
                        let w = win[k];
                        if w > 0.0 {
                            let (kz, iz) = k0_i0_with_log(z, lr - log_2a);
                            let wi = w * iz;
                            let reg = kz + wi * lsin[k];
                            bx += reg * c.xs[j];
                            by += reg * c.ys[j];
                            px -= rw[k] * wi * c.xs[j];
                            py -= rw[k] * wi * c.ys[j];
                        } else if z < K0_NEGLIGIBLE_Z {
                            let kz = k0_i0_with_log(z, lr - log_2a).0;
                            bx += kz * c.xs[j];
                            by += kz * c.ys[j];
                        }
                    }
                    vx = h * (ax + bx) + sing_x[i] + px;
                    vy = h * (ay + by) + sing_y[i] + py;
                }
            }
            let f = -q0 / (2.0 * PI);
            (f * vx, f * vy)
        })
        .collect();
    out.into_iter().unzip()
}

/// Antiderivative of `log √(u² + d²)` in `u`.
fn log_primitive(u: f64, d: f64) -> f64 {
    if d == 0.0 {
        if u == 0.0 {
            0.0
        } else {
            u * u.abs().ln() - u
        }
    } else {
        0.5 * u * (u * u + d * d).ln() - u + d * (u / d).atan()
    }
}

/// `∮ log|p − y| dy` over a closed polygon, exact per segment.
fn polygon_log_integral(p: [f64; 2], px: &[f64], py: &[f64]) -> (f64, f64) {
    let m = px.len();
    let (mut ix, mut iy) = (0.0, 0.0);
    for j in 0..m {
        let k = (j + 1) % m;
        let (ux, uy) = (px[k] - px[j], py[k] - py[j]);
        let len = ux.hypot(uy);
        if len == 0.0 {
            continue;
        }
        let (tx, ty) = (ux / len, uy / len);
        let (rx, ry) = (p[0] - px[j], p[1] - py[j]);
        let sp = rx * tx + ry * ty;
        let d = (rx * ty - ry * tx).abs();
        let val = log_primitive(len - sp, d) - log_primitive(-sp, d);
        ix += val * tx;
        iy += val * ty;
    }
    (ix, iy)
}

/// Velocity at arbitrary points. Points that coincide with a marker use
/// the on-contour rule; points within a few marker spacings of the contour
/// use an upsampled chain (exact polygon integrals with one Richardson step
/// for the log kernel,
/// trapezoid on the bounded Ψα for the α kernel); others use the plain
/// trapezoid rule.
pub fn point_velocity(x: &[f64], y: &[f64], q0: f64, kernel: Kernel, points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let c = Chain::new(x, y);
    let m = c.m();
    let h = 2.0 * PI / m as f64;
    let scale = c.max_speed();
    let near_dist = NEAR_SPACINGS * h * scale;
    let coincide = 1e-12 * scale;
    let up = std::sync::OnceLock::new();
    let up2 = std::sync::OnceLock::new();
    let f = -q0 / (2.0 * PI);
    points
        .par_iter()
        .map(|p| {
            let (mut best, mut at) = (f64::INFINITY, 0);
            for j in 0..m {
                let r = (p[0] - x[j]).hypot(p[1] - y[j]);
                if r < best {
                    best = r;
                    at = j;
                }
            }
            if best <= coincide {
                let (vx, vy) = boundary_rows(&c, q0, kernel, &[at]);
                return [vx[0], vy[0]];
            }
            if best >= near_dist {
                let (mut ix, mut iy) = (0.0, 0.0);
                for j in 0..m {
                    let r = (p[0] - x[j]).hypot(p[1] - y[j]);
                    let mut kv = r.ln();
                    if let Some(a) = kernel.alpha() {
                        if r / a < K0_NEGLIGIBLE_Z {
                            kv += k0_i0_fast(r / a).0;
                        }
                    }
                    ix += kv * c.xs[j];
                    iy += kv * c.ys[j];
                }
                return [f * h * ix, f * h * iy];
            }
            let (ux, uy, uxs, uys) = up.get_or_init(|| {
                let mu = m * NEAR_UPSAMPLE;
                let ux = fourier::upsample(x, mu);
                let uy = fourier::upsample(y, mu);
                let uxs = fourier::derivative(&ux, 1);
                let uys = fourier::derivative(&uy, 1);
                (ux, uy, uxs, uys)
            });
            match kernel {
                Kernel::Log => {
                    // polygon error is O(h²) with a smooth expansion, so one
                    // Richardson step against a twice finer chain
                    let (fx, fy) = up2.get_or_init(|| {
                        let mu = 2 * m * NEAR_UPSAMPLE;
                        (fourier::upsample(x, mu), fourier::upsample(y, mu))
                    });
                    let (ix, iy) = polygon_log_integral(*p, ux, uy);
                    let (jx, jy) = polygon_log_integral(*p, fx, fy);
                    [f * (4.0 * jx - ix) / 3.0, f * (4.0 * jy - iy) / 3.0]
                }
                Kernel::Alpha(a) => {
                    let mu = ux.len();
                    let hu = 2.0 * PI / mu as f64;
                    let psi0 = (2.0 * a).ln() - EULER_GAMMA;
                    let (mut ix, mut iy) = (0.0, 0.0);
                    for j in 0..mu {
                        let r = (p[0] - ux[j]).hypot(p[1] - uy[j]);
                        // K0(r/α) + log r, continuous at r = 0
                        let kv = if r == 0.0 {
                            psi0
                        } else if r / a < K0_NEGLIGIBLE_Z {
                            k0_i0_fast(r / a).0 + r.ln()
                        } else {
                            r.ln()
                        };
                        ix += kv * uxs[j];
                        iy += kv * uys[j];
                    }
                    [f * hu * ix, f * hu * iy]
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(m: usize, r: f64) -> (Vec<f64>, Vec<f64>) {
        let s = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64);
        (
            s.clone().map(|t| r * t.cos()).collect(),
            s.map(|t| r * t.sin()).collect(),
        )
    }

    #[test]
    fn rankine_boundary_speed() {
        let (x, y) = circle(64, 1.0);
        let (vx, vy) = boundary_velocity(&x, &y, 1.0, Kernel::Log);
        for j in 0..64 {
            // tangential, counterclockwise, speed 1/2
            assert!((vx[j] + 0.5 * y[j]).abs() < 1e-13);
            assert!((vy[j] - 0.5 * x[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn near_and_far_point_rules_agree_with_rankine() {
        let (x, y) = circle(128, 1.0);
        // inside: q0 r / 2, outside: q0 / 2r
        for (px, want) in [(0.3, 0.15), (0.99, 0.495), (1.01, 0.5 / 1.01), (3.0, 0.5 / 3.0)] {
            let v = point_velocity(&x, &y, 1.0, Kernel::Log, &[[px, 0.0]])[0];
            assert!(v[0].abs() < 1e-9, "radial {} at {px}", v[0]);
            assert!((v[1] - want).abs() < 1e-7, "{} vs {want} at {px}", v[1]);
        }
    }

    #[test]
    fn window_is_flat_top() {
        assert_eq!(window(0.1, 0.5, 1.0), 1.0);
        assert_eq!(window(1.2, 0.5, 1.0), 0.0);
        assert!((window(0.75, 0.5, 1.0) - 0.5).abs() < 1e-15);
    }
}
