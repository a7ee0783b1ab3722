//! Shape diagnostics for closed marker chains.

use std::f64::consts::PI;

use super::fourier::{self, Interpolant};

/// Circular distance between parameters `2πi/m` and `2πj/m`.
pub fn param_distance(i: usize, j: usize, m: usize) -> f64 {
    let d = i.abs_diff(j);
    2.0 * PI * d.min(m - d) as f64 / m as f64
}

/// Enclosed area `½∮(x dy − y dx)` with spectral derivatives.
pub fn spectral_area(x: &[f64], y: &[f64]) -> f64 {
    let (xs, ys) = (fourier::derivative(x, 1), fourier::derivative(y, 1));
    let m = x.len() as f64;
    let s: f64 = (0..x.len()).map(|j| x[j] * ys[j] - y[j] * xs[j]).sum();
    0.5 * s * 2.0 * PI / m
}

/// Shoelace area of the marker polygon.
pub fn polygon_area(x: &[f64], y: &[f64]) -> f64 {
    let m = x.len();
    0.5 * (0..m)
        .map(|j| {
            let k = (j + 1) % m;
            x[j] * y[k] - x[k] * y[j]
        })
        .sum::<f64>()
}

/// Complex area moments `∫_Ω ζ^k dA` for `k = 0..count`, from
/// `(1/2i)∮ ζ^k ζ̄ dζ` by the trapezoid rule.
pub fn complex_moments(x: &[f64], y: &[f64], count: usize) -> Vec<(f64, f64)> {
    let (xs, ys) = (fourier::derivative(x, 1), fourier::derivative(y, 1));
    let h = 2.0 * PI / x.len() as f64;
    (0..count)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..x.len() {
                let z = rustfft::num_complex::Complex64::new(x[j], y[j]);
                let dz = rustfft::num_complex::Complex64::new(xs[j], ys[j]);
                let v = z.powu(k as u32) * z.conj() * dz;
                re += v.re;
                im += v.im;
            }
            // divide by 2i
            (0.5 * im * h, -0.5 * re * h)
        })
        .collect()
}

/// Area-weighted centroid.
pub fn centroid(x: &[f64], y: &[f64]) -> [f64; 2] {
    let m = complex_moments(x, y, 2);
    [m[1].0 / m[0].0, m[1].1 / m[0].0]
}

/// Orientation of the principal axis of inertia about the centroid, in
/// `(−π/2, π/2]`.
pub fn principal_angle(x: &[f64], y: &[f64]) -> f64 {
    let c = centroid(x, y);
    let xc: Vec<f64> = x.iter().map(|v| v - c[0]).collect();
    let yc: Vec<f64> = y.iter().map(|v| v - c[1]).collect();
    // ∫ζ² dA = ∫(x² − y²) + 2i∫xy
    let m2 = complex_moments(&xc, &yc, 3)[2];
    0.5 * m2.1.atan2(m2.0)
}

/// `min_{i≠j} |x_i − x_j| / d(σ_i, σ_j)` over marker pairs.
pub fn chord_arc_ratio(x: &[f64], y: &[f64]) -> f64 {
    let m = x.len();
    let mut best = f64::INFINITY;
    for i in 0..m {
        for j in (i + 1)..m {
            let r = (x[i] - x[j]).hypot(y[i] - y[j]);
            best = best.min(r / param_distance(i, j, m));
        }
    }
    best
}

/// Discrete Hölder quotient of the `n`-th parameter derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderEstimate {
    pub value: f64,
    /// Fraction of the derivative's spectral energy in the top quarter of
    /// the modes.
    pub tail_energy: f64,
    /// False when `tail_energy` exceeds [`HOLDER_TAIL_LIMIT`].
    pub resolved: bool,
}

pub const HOLDER_TAIL_LIMIT: f64 = 1e-8;

/// `sup |Dⁿx(σ) − Dⁿx(σ′)| / |σ − σ′|^β` over marker pairs. For `β = 1`
/// the diagonal limit `sup |Dⁿ⁺¹x|` is included, which the pairwise
/// quotient only approaches as the spacing shrinks.
pub fn holder_seminorm(x: &[f64], y: &[f64], n: u32, beta: f64) -> HolderEstimate {
    let (dx, dy) = (fourier::derivative(x, n), fourier::derivative(y, n));
    let m = x.len();
    let mut best = 0.0f64;
    for i in 0..m {
        for j in (i + 1)..m {
            let r = (dx[i] - dx[j]).hypot(dy[i] - dy[j]);
            best = best.max(r / param_distance(i, j, m).powf(beta));
        }
    }
    if beta == 1.0 {
        let (ex, ey) = (fourier::derivative(x, n + 1), fourier::derivative(y, n + 1));
        for i in 0..m {
            best = best.max(ex[i].hypot(ey[i]));
        }
    }
    let tail = tail_fraction(&dx).max(tail_fraction(&dy));
    HolderEstimate {
        value: best,
        tail_energy: tail,
        resolved: tail <= HOLDER_TAIL_LIMIT,
    }
}

fn tail_fraction(v: &[f64]) -> f64 {
    let m = v.len();
    let c = fourier::forward(v);
    let (mut total, mut tail) = (0.0, 0.0);
    for (j, z) in c.iter().enumerate().skip(1) {
        let e = z.norm_sqr();
        total += e;
        if fourier::mode(j, m).unsigned_abs() as usize > 3 * m / 8 {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Whether any two non-adjacent polygon edges cross.
pub fn self_intersects(x: &[f64], y: &[f64]) -> bool {
    let m = x.len();
    let p = |i: usize| [x[i % m], y[i % m]];
    for i in 0..m {
        for j in (i + 2)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            if segments_cross(p(i), p(i + 1), p(j), p(j + 1)) {
                return true;
            }
        }
    }
    false
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (ux, uy) = (b[0] - a[0], b[1] - a[1]);
    let l2 = ux * ux + uy * uy;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * ux + (p[1] - a[1]) * uy) / l2).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - t * ux).hypot(p[1] - a[1] - t * uy)
}

/// Distance from `p` to the closed polygon through `poly`.
pub fn distance_to_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    let m = poly.len();
    (0..m)
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % m]))
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two closed polygons.
pub fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let one = |p: &[[f64; 2]], q: &[[f64; 2]]| p.iter().map(|&v| distance_to_polygon(v, q)).fold(0.0f64, f64::max);
    one(a, b).max(one(b, a))
}

/// Symmetric distance between two closed chains measured against their
/// trigonometric interpolants: each marker of one chain is projected onto
/// the other's curve by Newton's method. Unlike [`hausdorff`] on polygons,
/// this carries no chord error, so it resolves differences far below the
/// marker spacing.
pub fn curve_distance(ax: &[f64], ay: &[f64], bx: &[f64], by: &[f64]) -> f64 {
    one_sided_curve_distance(ax, ay, bx, by).max(one_sided_curve_distance(bx, by, ax, ay))
}

fn one_sided_curve_distance(px: &[f64], py: &[f64], cx: &[f64], cy: &[f64]) -> f64 {
    let m = cx.len();
    let h = 2.0 * PI / m as f64;
    let (ix, iy) = (Interpolant::new(cx), Interpolant::new(cy));
    let (ixs, iys) = (
        Interpolant::new(&fourier::derivative(cx, 1)),
        Interpolant::new(&fourier::derivative(cy, 1)),
    );
    px.iter()
        .zip(py)
        .map(|(&x, &y)| {
            let j = (0..m)
                .min_by(|&i, &k| {
                    let di = (cx[i] - x).hypot(cy[i] - y);
                    let dk = (cx[k] - x).hypot(cy[k] - y);
                    di.total_cmp(&dk)
                })
                .unwrap_or(0);
            let mut s = h * j as f64;
            for _ in 0..20 {
                let (xs, xss) = ixs.eval_d(s);
                let (ys, yss) = iys.eval_d(s);
                let (dx, dy) = (ix.eval(s) - x, iy.eval(s) - y);
                let f = dx * xs + dy * ys;
                let df = xs * xs + ys * ys + dx * xss + dy * yss;
                if df <= 0.0 {
                    break;
                }
                let ds = (-f / df).clamp(-h, h);
                s += ds;
                if ds.abs() < 1e-15 {
                    break;
                }
            }
            (ix.eval(s) - x).hypot(iy.eval(s) - y)
        })
        .fold(0.0f64, f64::max)
}

/// Redistribute markers to equal arc length using the trigonometric
/// interpolant of the chain.
pub fn equal_arclength(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = x.len();
    let (xs, ys) = (fourier::derivative(x, 1), fourier::derivative(y, 1));
    let speed: Vec<f64> = (0..m).map(|j| xs[j].hypot(ys[j])).collect();
    // arclength s(σ) = mean·σ + periodic part
    let mean = speed.iter().sum::<f64>() / m as f64;
    let total = 2.0 * PI * mean;
    let mut c = fourier::forward(&speed);
    c[0] = Default::default();
    for (j, z) in c.iter_mut().enumerate().skip(1) {
        let k = fourier::mode(j, m);
        if m % 2 == 0 && j == m / 2 {
            *z = Default::default();
        } else {
            *z /= rustfft::num_complex::Complex64::new(0.0, k as f64);
        }
    }
    let periodic = Interpolant::new(&fourier::inverse(&c));
    let sp = Interpolant::new(&speed);
    let s_of = |sig: f64| mean * sig + periodic.eval(sig) - periodic.eval(0.0);
    let ix = Interpolant::new(x);
    let iy = Interpolant::new(y);
    let mut nx = Vec::with_capacity(m);
    let mut ny = Vec::with_capacity(m);
    let h = 2.0 * PI / m as f64;
    for j in 0..m {
        let target = total * j as f64 / m as f64;
        let mut sig = j as f64 * h;
        // start from the uniform guess corrected once by the local speed
        sig -= (s_of(sig) - target) / sp.eval(sig).max(1e-300);
        for _ in 0..50 {
            let f = s_of(sig) - target;
            let d = sp.eval(sig);
            let step = f / d;
            sig -= step;
            if step.abs() < 1e-15 * (1.0 + sig.abs()) {
                break;
            }
        }
        nx.push(ix.eval(sig));
        ny.push(iy.eval(sig));
    }
    (nx, ny)
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

    fn ellipse(m: usize, phase: f64) -> (Vec<f64>, Vec<f64>) {
        let s = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64 + phase);
        (s.clone().map(|t| 2.0 * t.cos()).collect(), s.map(|t| t.sin()).collect())
    }

    #[test]
    fn curve_distance_ignores_marker_placement() {
        let (x, y) = ellipse(64, 0.0);
        let (u, v) = ellipse(96, 0.3);
        assert!(curve_distance(&x, &y, &u, &v) < 1e-12);
        let (w, z): (Vec<f64>, Vec<f64>) = u.iter().zip(&v).map(|(a, b)| (a * 1.001, *b)).unzip();
        let d = curve_distance(&x, &y, &w, &z);
        assert!((d - 2e-3).abs() < 1e-6, "{d}");
    }

    #[test]
    fn circle_diagnostics() {
        let (x, y) = circle(64, 1.0);
        assert!((spectral_area(&x, &y) - PI).abs() < 1e-13);
        assert!((chord_arc_ratio(&x, &y) - 2.0 / PI).abs() < 1e-13);
        let h = holder_seminorm(&x, &y, 0, 1.0);
        assert!((h.value - 1.0).abs() < 1e-12 && h.resolved);
        let c = centroid(&x, &y);
        assert!(c[0].abs() < 1e-14 && c[1].abs() < 1e-14);
        assert!(!self_intersects(&x, &y));
    }

    #[test]
    fn figure_eight_intersects() {
        let m = 64;
        let s = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64);
        let x: Vec<f64> = s.clone().map(|t| t.sin()).collect();
        let y: Vec<f64> = s.map(|t| (2.0 * t).sin()).collect();
        assert!(self_intersects(&x, &y));
    }

    #[test]
    fn principal_angle_of_rotated_ellipse() {
        let m = 128;
        let th: f64 = 0.4;
        let s = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64);
        let (x, y): (Vec<f64>, Vec<f64>) = s
            .map(|t| {
                let (a, b) = (t.cos(), 0.5 * t.sin());
                (a * th.cos() - b * th.sin(), a * th.sin() + b * th.cos())
            })
            .unzip();
        assert!((principal_angle(&x, &y) - th).abs() < 1e-12);
    }

    #[test]
    fn equal_arclength_on_clustered_circle() {
        let m = 128;
        let s = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64);
        let th: Vec<f64> = s.map(|t| t + 0.3 * t.sin()).collect();
        let x: Vec<f64> = th.iter().map(|t| t.cos()).collect();
        let y: Vec<f64> = th.iter().map(|t| t.sin()).collect();
        let (nx, ny) = equal_arclength(&x, &y);
        let want = 2.0 * (PI / m as f64).sin();
        for j in 0..m {
            let k = (j + 1) % m;
            let d = (nx[k] - nx[j]).hypot(ny[k] - ny[j]);
            assert!((d - want).abs() < 1e-8);
        }
        let a0 = spectral_area(&x, &y);
        assert!((spectral_area(&nx, &ny) - a0).abs() < 1e-10 * a0);
    }
}
