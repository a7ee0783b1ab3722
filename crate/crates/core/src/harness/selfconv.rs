use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::contour::{geometry, planned_dt, reparametrize, run_contour_from, ContourConfig};
use crate::error::{Error, Result};
use crate::euler::{initial_vorticity, plan_steps, run_from, SimConfig, SimState};
use crate::spectral::{sobolev_norm, Grid};

/// Smallest observed order accepted as convergence: the differences must
/// at least halve per level. Slower shrinkage means the levels are not yet
/// in the asymptotic regime.
pub const MIN_ORDER: f64 = 1.0;

/// The problem refined by [`self_convergence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Problem {
    Spectral { config: SimConfig },
    Contour { config: ContourConfig },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// Double `N` (or `M`) and halve `dt` per level.
    #[default]
    SpaceTime,
    /// Halve `dt` per level at fixed resolution.
    Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfConvergenceConfig {
    pub problem: Problem,
    pub levels: usize,
    #[serde(default)]
    pub refinement: Refinement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRow {
    pub level: usize,
    /// `N` or `M`.
    pub resolution: usize,
    pub dt: f64,
    /// Difference to the next finer level at the horizon.
    pub diff: Option<f64>,
    /// `log2(diff[l−1] / diff[l])`.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfConvergence {
    pub rows: Vec<LevelRow>,
    /// Every observed order is at least [`MIN_ORDER`] (or the differences
    /// are at rounding level).
    pub converging: bool,
    /// Differences at or below this are treated as rounding noise.
    pub noise_floor: f64,
}

impl SelfConvergence {
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("level,resolution,dt,diff,order\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{:e},{},{}",
                r.level,
                r.resolution,
                r.dt,
                opt(r.diff),
                opt(r.order)
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let orders: Vec<String> = self.orders().iter().map(|o| format!("{o:.3}")).collect();
        let mut out = format!("levels: {}\nobserved orders: {}\n", self.rows.len(), orders.join(", "));
        if self.converging {
            out.push_str("differences at least halve per level\n");
        } else {
            out.push_str("NOT CONVERGING: differences fail to halve per level\n");
        }
        out
    }
}

impl SelfConvergenceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels < 2 {
            return Err(Error::InvalidConfig(format!(
                "self-convergence needs at least 2 levels, got {}",
                self.levels
            )));
        }
        match &self.problem {
            Problem::Spectral { config } => config.validate(),
            Problem::Contour { config } => config.validate(),
        }
    }
}

/// Re-run one problem at dyadically refined resolution and/or time step and
/// compare consecutive levels at the horizon: the `L²` norm of the
/// vorticity difference for spectral runs, the distance between the
/// boundary curves for contour runs.
pub fn self_convergence(cfg: &SelfConvergenceConfig) -> Result<SelfConvergence> {
    cfg.validate()?;
    let space = cfg.refinement == Refinement::SpaceTime;
    let factor = |l: usize| 1usize << l;
    let (resolutions, dts, diffs, scale) = match &cfg.problem {
        Problem::Spectral { config } => {
            let grid = Grid::new(config.n, config.length)?;
            let q0 = initial_vorticity(&config.initial, grid)?;
            let start = SimState::new(q0.clone(), config.model())?;
            let (dt0, per0) = plan_steps(config, &start);
            let mut finals = Vec::new();
            let (mut res, mut dts) = (Vec::new(), Vec::new());
            for l in 0..cfg.levels {
                let n = if space { config.n * factor(l) } else { config.n };
                let q = if n == config.n { q0.clone() } else { q0.resample(n)? };
                let level_cfg = SimConfig { n, ..config.clone() };
                let dt = dt0 / factor(l) as f64;
                let traj = run_from(SimState::new(q, config.model())?, &level_cfg, dt, per0 * factor(l))?;
                finals.push(traj.last().q.clone());
                res.push(n);
                dts.push(dt);
            }
            let n_max = *res.last().expect("levels >= 2");
            let finals: Vec<_> = finals
                .into_iter()
                .map(|q| {
                    if q.grid().n() == n_max {
                        Ok(q)
                    } else {
                        q.resample(n_max)
                    }
                })
                .collect::<Result<_>>()?;
            let diffs: Vec<f64> = finals
                .windows(2)
                .map(|w| w[0].axpby(1.0, &w[1], -1.0).map(|d| sobolev_norm(&d, 0.0)))
                .collect::<Result<_>>()?;
            let scale = sobolev_norm(&finals[0], 0.0);
            (res, dts, diffs, scale)
        }
        Problem::Contour { config } => {
            let c0 = config.initial.build(config.markers, config.q0)?;
            let dt0 = match config.dt {
                Some(dt) => dt,
                None => {
                    let start = if config.reparam_every > 0 {
                        reparametrize(&c0)
                    } else {
                        c0.clone()
                    };
                    planned_dt(&start, config)
                }
            };
            let mut finals = Vec::new();
            let (mut res, mut dts) = (Vec::new(), Vec::new());
            for l in 0..cfg.levels {
                let m = if space {
                    config.markers * factor(l)
                } else {
                    config.markers
                };
                let dt = dt0 / factor(l) as f64;
                let level_cfg = ContourConfig {
                    markers: m,
                    max_markers: config.max_markers * factor(l),
                    dt: Some(dt),
                    ..config.clone()
                };
                let c = if m == config.markers { c0.clone() } else { c0.refined(m) };
                finals.push(run_contour_from(c, &level_cfg)?.last().clone());
                res.push(m);
                dts.push(dt);
            }
            let diffs = finals
                .windows(2)
                .map(|w| geometry::curve_distance(w[0].x(), w[0].y(), w[1].x(), w[1].y()))
                .collect();
            (res, dts, diffs, finals[0].diameter())
        }
    };
    let noise_floor = 1e-12 * scale.max(1.0);
    let converging = diffs
        .windows(2)
        .all(|w| w[1] <= noise_floor || w[0] / w[1] >= 2f64.powf(MIN_ORDER));
    let rows = (0..cfg.levels)
        .map(|l| {
            let diff = diffs.get(l).copied();
            let order = (l >= 1 && l < diffs.len())
                .then(|| (diffs[l - 1] / diffs[l]).log2())
                .filter(|o| o.is_finite());
            LevelRow {
                level: l,
                resolution: resolutions[l],
                dt: dts[l],
                diff,
                order,
            }
        })
        .collect();
    Ok(SelfConvergence {
        rows,
        converging,
        noise_floor,
    })
}
