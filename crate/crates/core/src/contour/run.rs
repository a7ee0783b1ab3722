use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    chord_arc_ratio, geometry, holder_seminorm, marker_velocity, reparametrize, step, ContourStepOptions, Kernel,
    PatchContour,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Log,
    Alpha,
}

fn default_one() -> f64 {
    1.0
}
fn default_half() -> f64 {
    0.5
}
fn default_outputs() -> usize {
    10
}
fn default_reparam() -> usize {
    10
}
fn default_true() -> bool {
    true
}
fn default_max_markers() -> usize {
    4096
}
fn default_floor() -> f64 {
    super::DEFAULT_CHORD_ARC_FLOOR
}
fn default_modes() -> Vec<[f64; 3]> {
    vec![[2.0, 0.1, 0.0], [3.0, 0.05, 0.3], [5.0, 0.02, 1.1]]
}

/// Initial patch boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Circle {
        #[serde(default = "default_one")]
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    /// Semi-axes `a` along x1 and `b` along x2.
    Ellipse { a: f64, b: f64 },
    /// `r(θ) = radius·(1 + Σ amp·cos(kθ + phase))` with modes given as
    /// `[k, amp, phase]`.
    PerturbedDisk {
        #[serde(default = "default_one")]
        radius: f64,
        #[serde(default = "default_modes")]
        modes: Vec<[f64; 3]>,
    },
    /// Markers from a contour CSV; the marker count in the file wins.
    Snapshot { path: PathBuf },
}

impl Shape {
    pub fn build(&self, m: usize, q0: f64) -> Result<PatchContour> {
        match self {
            Shape::Circle { radius, center } => PatchContour::polar(m, q0, *center, |_| *radius),
            Shape::Ellipse { a, b } => PatchContour::ellipse(m, *a, *b, q0),
            Shape::PerturbedDisk { radius, modes } => PatchContour::polar(m, q0, [0.0, 0.0], |t| {
                radius * (1.0 + modes.iter().map(|md| md[1] * (md[0] * t + md[2]).cos()).sum::<f64>())
            }),
            Shape::Snapshot { path } => read_contour_csv(path).map(|(c, _)| c),
        }
    }
}

/// Full description of one contour-dynamics run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourConfig {
    pub kernel: KernelKind,
    #[serde(default)]
    pub alpha: f64,
    /// Initial marker count.
    pub markers: usize,
    #[serde(default = "default_one")]
    pub q0: f64,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_half")]
    pub cfl: f64,
    #[serde(default = "default_one")]
    pub cfl_limit: f64,
    pub horizon: f64,
    #[serde(default = "default_outputs")]
    pub outputs: usize,
    /// Redistribute markers to equal arc length every this many steps
    /// (0 disables).
    #[serde(default = "default_reparam")]
    pub reparam_every: usize,
    /// Double the marker count whenever the chord-arc ratio has halved.
    #[serde(default = "default_true")]
    pub refine: bool,
    #[serde(default = "default_max_markers")]
    pub max_markers: usize,
    #[serde(default = "default_floor")]
    pub chord_arc_floor: f64,
    /// Exponent of the `C^{1,γ}` monitor.
    #[serde(default = "default_half")]
    pub holder_gamma: f64,
    /// Write a contour CSV at every output time.
    #[serde(default = "default_true")]
    pub snapshots: bool,
    pub initial: Shape,
}

impl ContourConfig {
    pub fn kernel(&self) -> Kernel {
        match self.kernel {
            KernelKind::Log => Kernel::Log,
            KernelKind::Alpha => Kernel::Alpha(self.alpha),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.markers < 8 || self.markers % 2 == 1 {
            return bad(format!("markers must be even and >= 8, got {}", self.markers));
        }
        if self.kernel == KernelKind::Alpha && !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha kernel needs alpha > 0, got {}", self.alpha));
        }
        if self.kernel == KernelKind::Log && self.alpha != 0.0 {
            return bad("alpha is only meaningful for the alpha kernel".into());
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if !(self.cfl > 0.0) || !(self.cfl_limit >= self.cfl) {
            return bad("need 0 < cfl <= cfl_limit".into());
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return bad(format!("horizon must be >= 0, got {}", self.horizon));
        }
        if self.outputs == 0 {
            return bad("outputs must be at least 1".into());
        }
        if !(self.holder_gamma > 0.0 && self.holder_gamma <= 1.0) {
            return bad(format!("holder_gamma must be in (0, 1], got {}", self.holder_gamma));
        }
        if !(self.chord_arc_floor >= 0.0) {
            return bad("chord_arc_floor must be >= 0".into());
        }
        match &self.initial {
            Shape::Circle { radius, .. } if !(*radius > 0.0) => bad("circle radius must be positive".into()),
            Shape::Ellipse { a, b } if !(*a > 0.0 && *b > 0.0) => bad("ellipse axes must be positive".into()),
            Shape::PerturbedDisk { radius, modes } => {
                let amp: f64 = modes.iter().map(|m| m[1].abs()).sum();
                if !(*radius > 0.0) || amp >= 1.0 {
                    return bad("perturbed disk needs radius > 0 and total amplitude < 1".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// One row of `monitors.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorRow {
    pub t: f64,
    pub chord_arc: f64,
    pub area: f64,
    pub holder_1_gamma: f64,
    pub max_speed: f64,
    pub markers: usize,
    pub holder_resolved: bool,
}

#[derive(Debug, Clone)]
pub struct ContourRun {
    pub dt: f64,
    /// `(t, contour)` at every output time.
    pub contours: Vec<(f64, PatchContour)>,
    pub monitors: Vec<MonitorRow>,
}

impl ContourRun {
    pub fn last(&self) -> &PatchContour {
        &self.contours.last().expect("run holds the initial contour").1
    }
}

fn monitor(c: &PatchContour, t: f64, kernel: Kernel, gamma: f64) -> Result<MonitorRow> {
    if geometry::self_intersects(c.x(), c.y()) {
        return Err(Error::SelfIntersection { t });
    }
    let (vx, vy) = marker_velocity(c, kernel);
    let hold = holder_seminorm(c, 1, gamma)?;
    Ok(MonitorRow {
        t,
        chord_arc: chord_arc_ratio(c),
        area: c.area(),
        holder_1_gamma: hold.value,
        max_speed: vx.iter().zip(&vy).fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b))),
        markers: c.len(),
        holder_resolved: hold.resolved,
    })
}

fn plan(c: &PatchContour, cfg: &ContourConfig, max_speed: f64) -> (f64, usize) {
    let interval = cfg.horizon / cfg.outputs as f64;
    if interval == 0.0 {
        return (0.0, 0);
    }
    let dt_max = cfg.dt.unwrap_or(if max_speed > 0.0 {
        cfg.cfl * c.min_spacing() / max_speed
    } else {
        interval
    });
    let per = (interval / dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (interval / per as f64, per)
}

/// Initial time step of a run of `cfg` started from `c`: the configured
/// `dt` or the CFL step, shrunk to fit the output interval.
pub fn planned_dt(c: &PatchContour, cfg: &ContourConfig) -> f64 {
    let (vx, vy) = marker_velocity(c, cfg.kernel());
    let speed = vx.iter().zip(&vy).fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)));
    plan(c, cfg, speed).0
}

/// Integrate a contour configuration to its horizon.
pub fn run_contour(cfg: &ContourConfig) -> Result<ContourRun> {
    cfg.validate()?;
    run_contour_from(cfg.initial.build(cfg.markers, cfg.q0)?, cfg)
}

/// Integrate `initial` with the settings of `cfg`; `cfg.initial` and
/// `cfg.markers` are ignored.
pub fn run_contour_from(initial: PatchContour, cfg: &ContourConfig) -> Result<ContourRun> {
    cfg.validate()?;
    let mut c = initial;
    if cfg.reparam_every > 0 {
        c = reparametrize(&c);
    }
    let kernel = cfg.kernel();
    let opts = ContourStepOptions {
        cfl_limit: cfg.cfl_limit,
        chord_arc_floor: cfg.chord_arc_floor,
    };
    let first = monitor(&c, 0.0, kernel, cfg.holder_gamma)?;
    let (mut dt, mut per) = plan(&c, cfg, first.max_speed);
    let dt0 = dt;
    let mut monitors = vec![first];
    let mut contours = vec![(0.0, c.clone())];
    let mut ca_ref = first.chord_arc;
    let mut steps = 0usize;
    let intervals = if per == 0 { 0 } else { cfg.outputs };
    for k in 1..=intervals {
        let mut left = per;
        while left > 0 {
            c = step(&c, dt, kernel, &opts).map_err(|e| Error::Simulation {
                alpha: kernel.alpha().unwrap_or(0.0),
                step: steps + 1,
                source: Box::new(e),
            })?;
            steps += 1;
            left -= 1;
            if cfg.reparam_every > 0 && steps % cfg.reparam_every == 0 {
                c = reparametrize(&c);
                if cfg.refine && c.len() * 2 <= cfg.max_markers {
                    let ca = chord_arc_ratio(&c);
                    if ca < 0.5 * ca_ref {
                        c = c.refined(c.len() * 2);
                        ca_ref = chord_arc_ratio(&c);
                        dt *= 0.5;
                        per *= 2;
                        left *= 2;
                    }
                }
            }
        }
        let t = cfg.horizon * k as f64 / cfg.outputs as f64;
        monitors.push(monitor(&c, t, kernel, cfg.holder_gamma)?);
        contours.push((t, c.clone()));
    }
    Ok(ContourRun {
        dt: dt0,
        contours,
        monitors,
    })
}

pub fn monitors_csv(rows: &[MonitorRow]) -> String {
    let mut out = String::from("t,chord_arc,area,holder_1_gamma,max_speed\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e}",
            r.t, r.chord_arc, r.area, r.holder_1_gamma, r.max_speed
        );
    }
    out
}

/// Contour snapshot: a `M,q0,t` header line and its values, then an
/// `x1,x2` header and one row per marker.
pub fn write_contour_csv(path: &Path, c: &PatchContour, t: f64) -> Result<()> {
    let mut out = format!("M,q0,t\n{},{:e},{:e}\nx1,x2\n", c.len(), c.q0(), t);
    for (x, y) in c.x().iter().zip(c.y()) {
        let _ = writeln!(out, "{x:e},{y:e}");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_contour_csv(path: &Path) -> Result<(PatchContour, f64)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |m: &str| Error::format(path, m);
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("M,q0,t") {
        return Err(bad("expected header M,q0,t"));
    }
    let meta: Vec<&str> = lines
        .next()
        .ok_or_else(|| bad("missing M,q0,t values"))?
        .split(',')
        .collect();
    if meta.len() != 3 {
        return Err(bad("M,q0,t line needs three values"));
    }
    let m: usize = meta[0].trim().parse().map_err(|_| bad("M is not an integer"))?;
    let q0: f64 = meta[1].trim().parse().map_err(|_| bad("q0 is not a number"))?;
    let t: f64 = meta[2].trim().parse().map_err(|_| bad("t is not a number"))?;
    if lines.next().map(str::trim) != Some("x1,x2") {
        return Err(bad("expected header x1,x2"));
    }
    let mut pts = Vec::with_capacity(m);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let mut it = line.split(',');
        let mut num = || -> Result<f64> {
            it.next()
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| bad(&format!("bad marker row {line:?}")))
        };
        pts.push([num()?, num()?]);
    }
    if pts.len() != m {
        return Err(bad(&format!("header says {m} markers, found {}", pts.len())));
    }
    Ok((PatchContour::new(&pts, q0)?, t))
}

/// Write `monitors.csv` and, if configured, one contour CSV per output.
pub fn write_contour_outputs(run: &ContourRun, cfg: &ContourConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("monitors.csv");
    fs::write(&path, monitors_csv(&run.monitors)).map_err(|e| Error::io(&path, e))?;
    if cfg.snapshots {
        for (k, (t, c)) in run.contours.iter().enumerate() {
            write_contour_csv(&dir.join(format!("contour_{k:04}.csv")), c, *t)?;
        }
    }
    Ok(())
}
