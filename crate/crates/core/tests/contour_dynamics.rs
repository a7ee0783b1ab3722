use std::f64::consts::PI;

use alphaflow_core::contour::{
    chord_arc_ratio, contour_velocity, geometry, holder_seminorm, marker_velocity, patch_l2_difference, reparametrize,
    run_contour, step, ContourConfig, ContourStepOptions, Kernel, PatchContour,
};
use alphaflow_core::special::bessel_k;
use alphaflow_core::spectral::{biot_savart, Grid, SpectralField};
use alphaflow_core::Error;
use proptest::prelude::*;

fn perturbed(m: usize) -> PatchContour {
    PatchContour::polar(m, 1.0, [0.0, 0.0], |t| {
        1.0 + 0.1 * (2.0 * t).cos() + 0.05 * (3.0 * t + 0.3).cos() + 0.02 * (5.0 * t + 1.1).cos()
    })
    .unwrap()
}

fn config(json: serde_json::Value) -> ContourConfig {
    serde_json::from_value(json).unwrap()
}

/// `I1` from its ascending series.
fn bessel_i1(z: f64) -> f64 {
    let (mut term, mut sum) = (0.5 * z, 0.5 * z);
    for k in 1..200 {
        term *= 0.25 * z * z / (k as f64 * (k + 1) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn max_radial_deviation(c: &PatchContour, r: f64) -> f64 {
    c.x()
        .iter()
        .zip(c.y())
        .map(|(x, y)| (x.hypot(*y) - r).abs())
        .fold(0.0, f64::max)
}

#[test]
fn rankine_boundary_speed() {
    let c = PatchContour::circle(128, 1.0, 1.0).unwrap();
    let (vx, vy) = marker_velocity(&c, Kernel::Log);
    for j in 0..c.len() {
        let (x, y) = (c.x()[j], c.y()[j]);
        // tangential, magnitude q0·R/2
        assert!((vx[j] * x + vy[j] * y).abs() < 1e-12);
        assert!(((-vx[j] * y + vy[j] * x) - 0.5).abs() < 1e-12);
    }
    let inside = contour_velocity(&c, Kernel::Log, &[[0.3, 0.0], [0.0, 0.0]]).unwrap();
    assert!((inside[0][1] - 0.15).abs() < 1e-10 && inside[1][0].hypot(inside[1][1]) < 1e-12);
}

#[test]
fn filtered_disk_boundary_speed() {
    // solving (1 − α²Δ)ω = χ radially gives Γ(R) = R²(1/2 − K1 I1) at r = R
    for &a in &[0.2, 0.1] {
        let want = 0.5 - bessel_k(1, 1.0 / a).unwrap() * bessel_i1(1.0 / a);
        // 512 markers put at least 8 per α along the boundary
        let c = PatchContour::circle(512, 1.0, 1.0).unwrap();
        let (vx, vy) = marker_velocity(&c, Kernel::Alpha(a));
        for j in (0..c.len()).step_by(17) {
            let (x, y) = (c.x()[j], c.y()[j]);
            assert!((vx[j] * x + vy[j] * y).abs() < 1e-10);
            let speed = -vx[j] * y + vy[j] * x;
            assert!((speed - want).abs() < 1e-10, "alpha {a}: {speed} vs {want}");
        }
    }
}

#[test]
fn far_field_point_vortex() {
    let a = 1.3;
    let c = PatchContour::ellipse(128, a, 1.0 / (PI * a), 2.0).unwrap();
    let area = c.area();
    assert!((area - 1.0).abs() < 1e-12);
    for p in [[10.0, 0.0], [0.0, -10.0], [6.0, 8.0]] {
        let v = contour_velocity(&c, Kernel::Log, &[p]).unwrap()[0];
        let want = 2.0 * area / (2.0 * PI * 10.0);
        let speed = v[0].hypot(v[1]);
        assert!((speed / want - 1.0).abs() < 0.01, "{p:?}: {speed} vs {want}");
    }
}

#[test]
fn alpha_kernel_matches_spectral_filtered_velocity() {
    // disk of radius 1 at the centre of the 2π torus; the spectral field is
    // made mean-free, which adds the background rotation −c·r/2
    let (n, alpha) = (512, 0.1);
    let g = Grid::periodic(n).unwrap();
    let sub = 4;
    let raw = SpectralField::scalar_from_fn(g, |x, y| {
        // area-weighted pixel coverage from a sub-grid
        let h = g.dx() / sub as f64;
        let mut hit = 0;
        for i in 0..sub {
            for j in 0..sub {
                let (px, py) = (
                    x - 0.5 * g.dx() + (i as f64 + 0.5) * h,
                    y - 0.5 * g.dx() + (j as f64 + 0.5) * h,
                );
                if (px - PI).hypot(py - PI) < 1.0 {
                    hit += 1;
                }
            }
        }
        hit as f64 / (sub * sub) as f64
    });
    let c_bg = raw.mean()[0];
    let q = SpectralField::from_physical(g, vec![raw.scalar_physical().iter().map(|v| v - c_bg).collect()]).unwrap();
    let u = biot_savart(&q, alpha).unwrap();
    let up = u.physical();
    let disk = PatchContour::circle(512, 1.0, 1.0).unwrap();
    for (di, dj) in [(40i64, 0i64), (0, 60), (-50, 20), (30, -30)] {
        let col = (n as i64 / 2 + di) as usize;
        let row = (n as i64 / 2 + dj) as usize;
        let (rx, ry) = (di as f64 * g.dx(), dj as f64 * g.dx());
        let cd = contour_velocity(&disk, Kernel::Alpha(alpha), &[[rx, ry]]).unwrap()[0];
        let want = [cd[0] + c_bg * ry / 2.0, cd[1] - c_bg * rx / 2.0];
        let got = [up[0][row * n + col], up[1][row * n + col]];
        let err = (got[0] - want[0]).hypot(got[1] - want[1]) / want[0].hypot(want[1]);
        assert!(err < 0.01, "probe ({rx}, {ry}): {got:?} vs {want:?}");
    }
}

#[test]
fn alpha_quadrature_converges_spectrally() {
    // markers of the M-chain are every other marker of the 2M-chain
    let reference = {
        let c = perturbed(1024);
        marker_velocity(&c, Kernel::Alpha(0.2))
    };
    let errs: Vec<f64> = [32usize, 64, 128]
        .iter()
        .map(|&m| {
            let (vx, vy) = marker_velocity(&perturbed(m), Kernel::Alpha(0.2));
            let stride = 1024 / m;
            (0..m)
                .map(|j| (vx[j] - reference.0[j * stride]).hypot(vy[j] - reference.1[j * stride]))
                .fold(0.0, f64::max)
        })
        .collect();
    for w in errs.windows(2) {
        // faster than M^{-4} means more than a factor 16 per doubling
        assert!(w[0] / w[1] > 16.0 || w[1] < 1e-13, "errors {errs:?}");
    }
}

#[test]
fn holder_seminorm_examples() {
    let c = PatchContour::circle(256, 1.0, 1.0).unwrap();
    let lip = holder_seminorm(&c, 0, 1.0).unwrap();
    assert!((lip.value - 1.0).abs() < 1e-6, "{}", lip.value);
    assert!(lip.resolved);
    assert!(holder_seminorm(&c, 4, 0.5).is_err());
    assert!(holder_seminorm(&c, 1, 0.0).is_err());
    assert!(holder_seminorm(&c, 1, 1.5).is_err());

    let coarse = holder_seminorm(&perturbed(128), 1, 0.5).unwrap().value;
    let fine = holder_seminorm(&perturbed(256), 1, 0.5).unwrap().value;
    assert!((fine / coarse - 1.0).abs() < 0.05, "{coarse} vs {fine}");
}

#[test]
fn chord_arc_examples() {
    let c = PatchContour::circle(256, 1.0, 1.0).unwrap();
    assert!((chord_arc_ratio(&c) - 2.0 / PI).abs() < 1e-12);

    // pinched neck of width 0.02 across half the parameter circle
    let dumbbell = PatchContour::polar(256, 1.0, [0.0, 0.0], |t| 1.0 - 0.99 * t.sin().powi(2)).unwrap();
    assert!(chord_arc_ratio(&dumbbell) < 0.01);
    assert!(matches!(
        contour_velocity(&dumbbell, Kernel::Log, &[[0.0, 0.0]]),
        Err(Error::DegenerateContour { .. })
    ));
}

#[test]
fn self_intersection_is_detected() {
    let c = perturbed(128);
    assert!(!geometry::self_intersects(c.x(), c.y()));
    // figure eight
    let (x, y): (Vec<f64>, Vec<f64>) = (0..128)
        .map(|j| {
            let s = 2.0 * PI * j as f64 / 128.0;
            (s.sin(), s.sin() * s.cos())
        })
        .unzip();
    assert!(geometry::self_intersects(&x, &y));
}

#[test]
fn step_examples() {
    let c = perturbed(64);
    let same = step(&c, 0.0, Kernel::Log, &ContourStepOptions::default()).unwrap();
    assert_eq!(same, c);
    let err = step(&c, 10.0, Kernel::Log, &ContourStepOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Cfl { .. }));
    assert!(step(&c, 0.01, Kernel::Alpha(-1.0), &ContourStepOptions::default()).is_err());
}

#[test]
fn reparametrize_examples() {
    let circle = PatchContour::circle(128, 1.0, 1.0).unwrap();
    let again = reparametrize(&circle);
    for j in 0..128 {
        assert!((again.x()[j] - circle.x()[j]).abs() < 1e-12);
        assert!((again.y()[j] - circle.y()[j]).abs() < 1e-12);
    }

    // markers clustered by a smooth reparametrization θ = σ + 0.3 sin σ
    let m = 128;
    let (x, y): (Vec<f64>, Vec<f64>) = (0..m)
        .map(|j| {
            let s = 2.0 * PI * j as f64 / m as f64;
            let t = s + 0.3 * s.sin();
            (t.cos(), t.sin())
        })
        .unzip();
    let clustered = PatchContour::from_xy(x, y, 1.0).unwrap();
    let even = reparametrize(&clustered);
    let arc = 2.0 * PI / m as f64;
    for j in 0..m {
        let k = (j + 1) % m;
        // chord of the equal arc 2π/M on the unit circle
        let chord = (even.x()[k] - even.x()[j]).hypot(even.y()[k] - even.y()[j]);
        assert!((chord - 2.0 * (0.5 * arc).sin()).abs() < 1e-8, "gap {j}: {chord}");
    }

    // the area contract needs the arclength reparametrization to stay resolved
    for c in [
        perturbed(256),
        PatchContour::ellipse(256, 2.0, 0.5, 1.0).unwrap(),
        clustered,
    ] {
        let r = reparametrize(&c);
        assert!(((r.area() - c.area()) / c.area()).abs() <= 1e-10);
    }
}

#[test]
fn circle_stays_circular_and_area_is_conserved() {
    for (kernel, alpha) in [("log", 0.0), ("alpha", 0.1)] {
        let run = run_contour(&config(serde_json::json!({
            "kernel": kernel, "alpha": alpha, "markers": 128, "horizon": 1.0, "outputs": 4,
            "initial": {"kind": "circle"}
        })))
        .unwrap();
        for (t, c) in &run.contours {
            assert!(max_radial_deviation(c, 1.0) < 1e-8, "{kernel} at t = {t}");
        }

        let run = run_contour(&config(serde_json::json!({
            "kernel": kernel, "alpha": alpha, "markers": 128, "horizon": 5.0, "outputs": 5,
            "initial": {"kind": "perturbed_disk"}
        })))
        .unwrap();
        let a0 = run.contours[0].1.area();
        for (t, c) in &run.contours {
            assert!(((c.area() - a0) / a0).abs() <= 1e-5, "{kernel} area at t = {t}");
        }
    }
}

#[test]
fn kirchhoff_ellipse_rotates_rigidly_short_run() {
    let run = run_contour(&config(serde_json::json!({
        "kernel": "log", "markers": 128, "horizon": 1.0, "outputs": 2,
        "initial": {"kind": "ellipse", "a": 2.0, "b": 1.0}
    })))
    .unwrap();
    for (t, c) in &run.contours {
        // Ω = q0·ab/(a+b)² = 2/9
        let th = 2.0 * t / 9.0;
        let exact: Vec<[f64; 2]> = (0..2048)
            .map(|j| {
                let s = 2.0 * PI * j as f64 / 2048.0;
                let (x, y) = (2.0 * s.cos(), s.sin());
                [x * th.cos() - y * th.sin(), x * th.sin() + y * th.cos()]
            })
            .collect();
        let d = geometry::hausdorff(&c.dense_polygon(8), &exact);
        assert!(d <= 1e-3, "t = {t}: {d}");
    }
}

#[test]
fn patch_l2_examples() {
    let c = perturbed(128);
    let zero = patch_l2_difference(&c, &c, None, 64).unwrap();
    assert!(zero.norm <= 1e-10);
    assert!(matches!(
        patch_l2_difference(&c, &c, Some(1.5), 64),
        Err(Error::BoxTooSmall(_))
    ));
    let other = PatchContour::circle(128, 1.0, 1.0).unwrap();
    assert!(patch_l2_difference(&c, &other, None, 64).unwrap().norm > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chord_arc_and_holder_scale_linearly(lambda in 0.1f64..10.0, amp in 0.0f64..0.2) {
        let c = PatchContour::polar(64, 1.0, [0.0, 0.0], |t| 1.0 + amp * (3.0 * t).cos()).unwrap();
        let s = PatchContour::from_xy(
            c.x().iter().map(|v| lambda * v).collect(),
            c.y().iter().map(|v| lambda * v).collect(),
            1.0,
        ).unwrap();
        let r = chord_arc_ratio(&s) / chord_arc_ratio(&c);
        prop_assert!((r / lambda - 1.0).abs() < 1e-12);
        for n in 0..3 {
            let h = holder_seminorm(&s, n, 0.5).unwrap().value / holder_seminorm(&c, n, 0.5).unwrap().value;
            prop_assert!((h / lambda - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn log_velocity_scales_and_translates(lambda in 0.2f64..5.0, shift in -3.0f64..3.0) {
        let c = perturbed(64);
        let map = |v: &[f64], off: f64| v.iter().map(|x| lambda * x + off).collect::<Vec<_>>();
        let s = PatchContour::from_xy(map(c.x(), shift), map(c.y(), -shift), 1.0).unwrap();
        let (vx, vy) = marker_velocity(&c, Kernel::Log);
        let (sx, sy) = marker_velocity(&s, Kernel::Log);
        for j in 0..64 {
            prop_assert!((sx[j] - lambda * vx[j]).abs() < 1e-10 * lambda);
            prop_assert!((sy[j] - lambda * vy[j]).abs() < 1e-10 * lambda);
        }
    }

    #[test]
    fn reparametrize_preserves_area(amp in 0.0f64..0.2, k in 2u32..6) {
        let c = PatchContour::polar(256, 1.0, [0.0, 0.0], |t| 1.0 + amp * (k as f64 * t).cos()).unwrap();
        let r = reparametrize(&c);
        prop_assert!(((r.area() - c.area()) / c.area()).abs() <= 1e-10);
    }
}
