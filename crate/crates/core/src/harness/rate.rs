use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_loglog, LogLogFit};
use crate::contour::{
    patch_l2_difference, patch_l2_filtered_difference, planned_dt, reparametrize, run_contour_from, ContourConfig,
    ContourRun, KernelKind, MonitorRow,
};
use crate::error::{Error, Result};
use crate::euler::{
    difference_norms, plan_steps, run_from, Model, ModelKind, NormRow, SimConfig, SimState, Trajectory,
};
use crate::spectral::Grid;

fn default_sobolev() -> Vec<f64> {
    vec![2.0, 3.0]
}
fn default_resolution() -> usize {
    256
}
fn default_times() -> Vec<f64> {
    vec![1.0]
}
fn default_true() -> bool {
    true
}
fn default_multiplier() -> usize {
    2
}
fn default_threshold() -> f64 {
    0.1
}

/// Which pair of models is compared and how the difference is measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StudyKind {
    /// Spectral Euler against Euler-α; `‖v − v^α‖_{H^s}` for each `s`.
    Spectral {
        config: SimConfig,
        #[serde(default = "default_sobolev")]
        sobolev: Vec<f64>,
    },
    /// Contour dynamics against CD-α; the `L²` velocity difference over a box.
    Patch {
        config: ContourConfig,
        #[serde(default = "default_resolution")]
        resolution: usize,
        #[serde(default)]
        box_half_width: Option<f64>,
        /// Compare against the filtered velocity `u^α` instead of `v^α`.
        #[serde(default)]
        filtered: bool,
    },
}

/// Re-run of the study at a finer resolution to estimate discretization
/// error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardConfig {
    #[serde(default = "default_true")]
    pub enabled: bool,
    /// Resolution multiplier; the time step shrinks by the same factor.
    #[serde(default = "default_multiplier")]
    pub multiplier: usize,
    /// A slope counts only if the discretization estimate is at most this
    /// fraction of the smallest α-error in the fit.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

impl Default for GuardConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            multiplier: 2,
            threshold: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateStudyConfig {
    pub study: StudyKind,
    /// Strictly decreasing.
    pub alphas: Vec<f64>,
    /// Evaluation times; each must be an output time of the base run.
    #[serde(default = "default_times")]
    pub times: Vec<f64>,
    #[serde(default)]
    pub guard: GuardConfig,
    /// Fit a slope through two α values (three are required otherwise).
    #[serde(default)]
    pub force_fit: bool,
}

/// Fewest α values for a slope without `force_fit`.
pub const MIN_FIT_POINTS: usize = 3;

impl RateStudyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.alphas.is_empty() {
            return bad("alpha list is empty".into());
        }
        if self.alphas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return bad("alpha values must be positive".into());
        }
        if self.alphas.windows(2).any(|w| w[1] >= w[0]) {
            return bad("alpha list must be strictly decreasing".into());
        }
        if self.times.is_empty() {
            return bad("no evaluation times".into());
        }
        if self.guard.multiplier < 2 || !(self.guard.threshold > 0.0) {
            return bad("guard needs multiplier >= 2 and a positive threshold".into());
        }
        let (horizon, outputs) = match &self.study {
            StudyKind::Spectral { config, sobolev } => {
                euler_config(config).validate()?;
                if sobolev.is_empty() || sobolev.iter().any(|s| !s.is_finite()) {
                    return bad("sobolev exponent list must be non-empty and finite".into());
                }
                (config.horizon, config.outputs)
            }
            StudyKind::Patch { config, resolution, .. } => {
                log_config(config).validate()?;
                if *resolution < 2 {
                    return bad(format!("evaluation resolution must be >= 2, got {resolution}"));
                }
                (config.horizon, config.outputs)
            }
        };
        for &t in &self.times {
            output_index(t, horizon, outputs).ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "evaluation time {t} is not an output time (horizon {horizon}, {outputs} outputs)"
                ))
            })?;
        }
        Ok(())
    }
}

fn output_index(t: f64, horizon: f64, outputs: usize) -> Option<usize> {
    if horizon == 0.0 {
        return (t == 0.0).then_some(0);
    }
    let k = (t / horizon * outputs as f64).round();
    let ok = k >= 0.0 && k <= outputs as f64 && (k * horizon / outputs as f64 - t).abs() <= 1e-12 * horizon.max(1.0);
    ok.then_some(k as usize)
}

fn euler_config(base: &SimConfig) -> SimConfig {
    SimConfig {
        model: ModelKind::Euler,
        alpha: 0.0,
        ..base.clone()
    }
}

fn alpha_config(base: &SimConfig, alpha: f64) -> SimConfig {
    SimConfig {
        model: ModelKind::EulerAlpha,
        alpha,
        ..base.clone()
    }
}

fn log_config(base: &ContourConfig) -> ContourConfig {
    ContourConfig {
        kernel: KernelKind::Log,
        alpha: 0.0,
        ..base.clone()
    }
}

fn kernel_config(base: &ContourConfig, alpha: f64, dt: f64) -> ContourConfig {
    ContourConfig {
        kernel: KernelKind::Alpha,
        alpha,
        dt: Some(dt),
        ..base.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub alpha: f64,
    pub t: f64,
    pub norm: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeRow {
    pub t: f64,
    pub norm: String,
    /// `None` when there are too few α values or a zero error.
    pub fit: Option<LogLogFit>,
    /// `max_α |e(α) − e_fine(α)|` from the resolution guard.
    pub disc_err: Option<f64>,
    /// Guard verdict; `None` when the guard is disabled.
    pub conclusive: Option<bool>,
    /// Errors strictly decrease along the α list.
    pub monotone: bool,
}

impl SlopeRow {
    /// The fit, unless the guard rejected it.
    pub fn reported_fit(&self) -> Option<LogLogFit> {
        if self.conclusive == Some(false) {
            None
        } else {
            self.fit
        }
    }
}

/// Norm history of one run of the study (base resolution).
#[derive(Debug, Clone)]
pub struct RunDiagnostics {
    /// `None` for the Euler reference.
    pub alpha: Option<f64>,
    pub norms: Vec<NormRow>,
    pub monitors: Vec<MonitorRow>,
}

#[derive(Debug, Clone)]
pub struct RateStudyResult {
    pub dt: f64,
    pub errors: Vec<ErrorRow>,
    pub guard_errors: Vec<ErrorRow>,
    pub slopes: Vec<SlopeRow>,
    pub runs: Vec<RunDiagnostics>,
}

impl RateStudyResult {
    pub fn slope(&self, t: f64, norm: &str) -> Option<&SlopeRow> {
        self.slopes.iter().find(|r| r.t == t && r.norm == norm)
    }

    pub fn series(&self, t: f64, norm: &str) -> Vec<(f64, f64)> {
        self.errors
            .iter()
            .filter(|r| r.t == t && r.norm == norm)
            .map(|r| (r.alpha, r.value))
            .collect()
    }
}

/// Error table for one resolution level.
struct Level {
    dt: f64,
    errors: Vec<ErrorRow>,
    runs: Vec<RunDiagnostics>,
}

/// Run the Euler reference and one Euler-α run per α, at the base
/// resolution and (if enabled) at the guard resolution, then fit slopes.
pub fn rate_study(cfg: &RateStudyConfig) -> Result<RateStudyResult> {
    cfg.validate()?;
    let base = run_level(cfg, 1)?;
    let guard = if cfg.guard.enabled {
        Some(run_level(cfg, cfg.guard.multiplier)?)
    } else {
        None
    };
    let mut keys: Vec<(f64, String)> = Vec::new();
    for r in &base.errors {
        if !keys.iter().any(|(t, n)| *t == r.t && *n == r.norm) {
            keys.push((r.t, r.norm.clone()));
        }
    }
    let min_points = if cfg.force_fit { 2 } else { MIN_FIT_POINTS };
    let slopes = keys
        .into_iter()
        .map(|(t, norm)| {
            let pick = |rows: &[ErrorRow]| -> Vec<(f64, f64)> {
                rows.iter()
                    .filter(|r| r.t == t && r.norm == norm)
                    .map(|r| (r.alpha, r.value))
                    .collect()
            };
            let pairs = pick(&base.errors);
            let fit = if pairs.len() >= min_points {
                fit_loglog(&pairs).ok()
            } else {
                None
            };
            let monotone = pairs.windows(2).all(|w| w[1].1 < w[0].1);
            let (disc_err, conclusive) = match &guard {
                Some(g) => {
                    let fine = pick(&g.errors);
                    let disc = pairs
                        .iter()
                        .zip(&fine)
                        .map(|(a, b)| (a.1 - b.1).abs())
                        .fold(0.0f64, f64::max);
                    let smallest = pairs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
                    (Some(disc), Some(disc <= cfg.guard.threshold * smallest))
                }
                None => (None, None),
            };
            SlopeRow {
                t,
                norm,
                fit,
                disc_err,
                conclusive,
                monotone,
            }
        })
        .collect();
    Ok(RateStudyResult {
        dt: base.dt,
        errors: base.errors,
        guard_errors: guard.map(|g| g.errors).unwrap_or_default(),
        slopes,
        runs: base.runs,
    })
}

fn run_level(cfg: &RateStudyConfig, mult: usize) -> Result<Level> {
    match &cfg.study {
        StudyKind::Spectral { config, sobolev } => spectral_level(cfg, config, sobolev, mult),
        StudyKind::Patch {
            config,
            resolution,
            box_half_width,
            filtered,
        } => patch_level(cfg, config, *resolution, *box_half_width, *filtered, mult),
    }
}

fn spectral_level(cfg: &RateStudyConfig, base: &SimConfig, sobolev: &[f64], mult: usize) -> Result<Level> {
    let ecfg = euler_config(base);
    let grid = Grid::new(base.n, base.length)?;
    let q0 = crate::euler::initial_vorticity(&base.initial, grid)?;
    let (dt0, per0) = plan_steps(&ecfg, &SimState::new(q0.clone(), Model::Euler)?);
    let q = if mult == 1 { q0 } else { q0.resample(base.n * mult)? };
    let level_cfg = SimConfig {
        n: base.n * mult,
        ..ecfg
    };
    let (dt, per) = (dt0 / mult as f64, per0 * mult);
    let run_one = |model: Model| -> Result<Trajectory> {
        let c = match model {
            Model::Euler => level_cfg.clone(),
            Model::EulerAlpha(a) => alpha_config(&level_cfg, a),
        };
        run_from(SimState::new(q.clone(), model)?, &c, dt, per)
    };
    let reference = run_one(Model::Euler)?;
    let runs: Vec<Trajectory> = cfg
        .alphas
        .par_iter()
        .map(|&a| run_one(Model::EulerAlpha(a)))
        .collect::<Result<_>>()?;
    let mut errors = Vec::new();
    for (a, traj) in cfg.alphas.iter().zip(&runs) {
        let rows = difference_norms(&reference, traj, sobolev)?;
        for &t in &cfg.times {
            let k = output_index(t, base.horizon, base.outputs).expect("validated");
            let t_out = reference.states[k].t;
            for &(rt, s, v) in &rows {
                if rt == t_out {
                    errors.push(ErrorRow {
                        alpha: *a,
                        t,
                        norm: format!("h{s}"),
                        value: v,
                    });
                }
            }
        }
    }
    let mut diags = vec![RunDiagnostics {
        alpha: None,
        norms: reference.norms,
        monitors: Vec::new(),
    }];
    diags.extend(cfg.alphas.iter().zip(runs).map(|(a, t)| RunDiagnostics {
        alpha: Some(*a),
        norms: t.norms,
        monitors: Vec::new(),
    }));
    Ok(Level {
        dt,
        errors,
        runs: diags,
    })
}

fn patch_level(
    cfg: &RateStudyConfig,
    base: &ContourConfig,
    resolution: usize,
    box_half_width: Option<f64>,
    filtered: bool,
    mult: usize,
) -> Result<Level> {
    let ecfg = log_config(base);
    let c0 = base.initial.build(base.markers, base.q0)?;
    let c = if mult == 1 { c0 } else { c0.refined(base.markers * mult) };
    let level_cfg = |dt: Option<f64>| ContourConfig {
        markers: c.len(),
        max_markers: base.max_markers * mult,
        dt,
        ..ecfg.clone()
    };
    // planned at the base resolution so every level and every α share it
    // up to the refinement factor
    let dt_base = match base.dt {
        Some(dt) => dt,
        None => {
            let mut start = base.initial.build(base.markers, base.q0)?;
            if base.reparam_every > 0 {
                start = reparametrize(&start);
            }
            planned_dt(&start, &ecfg)
        }
    };
    let dt = dt_base / mult as f64;
    let reference = run_contour_from(c.clone(), &level_cfg(Some(dt)))?;
    let runs: Vec<ContourRun> = cfg
        .alphas
        .par_iter()
        .map(|&a| run_contour_from(c.clone(), &kernel_config(&level_cfg(Some(dt)), a, dt)))
        .collect::<Result<_>>()?;
    let name = if filtered { "l2_filtered" } else { "l2" };
    let mut errors = Vec::new();
    for (a, run) in cfg.alphas.iter().zip(&runs) {
        for &t in &cfg.times {
            let k = output_index(t, base.horizon, base.outputs).expect("validated");
            let (ce, ca) = (&reference.contours[k].1, &run.contours[k].1);
            let d = if filtered {
                patch_l2_filtered_difference(ce, ca, *a, box_half_width, resolution * mult)?
            } else {
                patch_l2_difference(ce, ca, box_half_width, resolution * mult)?
            };
            errors.push(ErrorRow {
                alpha: *a,
                t,
                norm: name.to_string(),
                value: d.norm,
            });
        }
    }
    let mut diags = vec![RunDiagnostics {
        alpha: None,
        norms: Vec::new(),
        monitors: reference.monitors,
    }];
    diags.extend(cfg.alphas.iter().zip(runs).map(|(a, r)| RunDiagnostics {
        alpha: Some(*a),
        norms: Vec::new(),
        monitors: r.monitors,
    }));
    Ok(Level {
        dt,
        errors,
        runs: diags,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn errors_csv(rows: &[ErrorRow]) -> String {
    let mut out = String::from("alpha,t,norm,value\n");
    for r in rows {
        let _ = writeln!(out, "{:e},{:e},{},{:e}", r.alpha, r.t, r.norm, r.value);
    }
    out
}

pub fn slopes_csv(rows: &[SlopeRow]) -> String {
    let mut out = String::from("t,norm,slope,intercept,r2,disc_err,conclusive\n");
    for r in rows {
        let fit = r.reported_fit();
        let _ = writeln!(
            out,
            "{:e},{},{},{},{},{},{}",
            r.t,
            r.norm,
            fmt_opt(fit.map(|f| f.slope)),
            fmt_opt(fit.map(|f| f.intercept)),
            fmt_opt(fit.map(|f| f.r2)),
            fmt_opt(r.disc_err),
            match r.conclusive {
                Some(true) => "true",
                Some(false) => "false",
                None => "unchecked",
            }
        );
    }
    out
}

pub fn summary_text(cfg: &RateStudyConfig, res: &RateStudyResult) -> String {
    let mut out = String::new();
    let kind = match &cfg.study {
        StudyKind::Spectral { config, .. } => format!("spectral, N = {}", config.n),
        StudyKind::Patch { config, .. } => format!("patch, M = {}", config.markers),
    };
    let _ = writeln!(out, "rate study ({kind})");
    let alphas: Vec<String> = cfg.alphas.iter().map(|a| format!("{a}")).collect();
    let _ = writeln!(out, "alphas: {}", alphas.join(", "));
    let _ = writeln!(out, "dt: {:e}", res.dt);
    if cfg.guard.enabled {
        let _ = writeln!(
            out,
            "resolution guard: x{} resolution, dt / {}, threshold {}",
            cfg.guard.multiplier, cfg.guard.multiplier, cfg.guard.threshold
        );
    } else {
        let _ = writeln!(out, "resolution guard: disabled");
    }
    for r in &res.slopes {
        let head = format!("t = {} {}:", r.t, r.norm);
        let line = match (r.conclusive, r.fit) {
            (Some(false), _) => format!(
                "{head} inconclusive, discretization estimate {} exceeds {} of the smallest error",
                fmt_opt(r.disc_err),
                cfg.guard.threshold
            ),
            (_, None) => format!("{head} no slope (too few alpha values or a zero error)"),
            (c, Some(f)) => format!(
                "{head} slope {:.4}, r2 {:.6}{}",
                f.slope,
                f.r2,
                if c.is_none() { ", guard not run" } else { "" }
            ),
        };
        let _ = writeln!(out, "{line}");
        let _ = writeln!(out, "  errors decrease monotonically in alpha: {}", r.monotone);
    }
    // the bounds are sup over [0, T]; only the sampled times are seen here
    let mut norms: Vec<&str> = Vec::new();
    for r in &res.errors {
        if !norms.contains(&r.norm.as_str()) {
            norms.push(&r.norm);
        }
    }
    for norm in norms {
        for &a in &cfg.alphas {
            let sup = res
                .errors
                .iter()
                .filter(|r| r.norm == norm && r.alpha == a)
                .map(|r| r.value)
                .fold(0.0f64, f64::max);
            let _ = writeln!(out, "max over sampled times, {norm}, alpha {a}: {sup:e}");
        }
    }
    out
}

/// Write `errors.csv`, `slopes.csv`, `summary.txt` and, when the guard
/// ran, `guard_errors.csv`.
pub fn write_rate_study(cfg: &RateStudyConfig, res: &RateStudyResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = vec![
        ("errors.csv", errors_csv(&res.errors)),
        ("slopes.csv", slopes_csv(&res.slopes)),
        ("summary.txt", summary_text(cfg, res)),
    ];
    if !res.guard_errors.is_empty() {
        files.push(("guard_errors.csv", errors_csv(&res.guard_errors)));
    }
    for (name, body) in files {
        let p = dir.join(name);
        fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
    }
    Ok(())
}
