//! Pseudospectral integration of the 2D vorticity equations
//!
//! ```text
//! ∂q/∂t + (u·∇)q = 0,   u = K ∗ q            (Euler)
//! ∂q/∂t + (u·∇)q = 0,   u = (1 − α²Δ)⁻¹ K ∗ q (Euler-α)
//! ```
//!
//! on the periodic square, with classical RK4 in time and 2/3-rule
//! dealiasing of the advection product.

mod config;
mod initial;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rustfft::num_complex::Complex64;

pub use config::{InitialData, Model, ModelKind, SimConfig};
pub use initial::{band_limited, initial_vorticity};

use crate::error::{Error, Result};
use crate::spectral::norms::{besov_norm, lp_norm, sobolev_norm, BesovSum};
use crate::spectral::ops::{biot_savart_unchecked, dealias_in_place, ensure_mean_free};
use crate::spectral::{fft, max_gradient_norm, snapshot, Grid, SpectralField};

/// Vorticity at one instant.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub q: SpectralField,
    pub model: Model,
    pub steps: usize,
}

impl SimState {
    /// Wrap a mean-free scalar vorticity at `t = 0`.
    pub fn new(q: SpectralField, model: Model) -> Result<Self> {
        if !q.is_scalar() {
            return Err(Error::MalformedField("vorticity must be scalar".into()));
        }
        ensure_mean_free(&q)?;
        if !(model.alpha() >= 0.0) {
            return Err(Error::Domain {
                what: "alpha must be >= 0",
                value: model.alpha(),
            });
        }
        let mut q = q;
        q.ensure_spectral();
        Ok(Self {
            t: 0.0,
            q,
            model,
            steps: 0,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.q.grid()
    }

    /// Velocity advecting the vorticity (filtered for Euler-α).
    pub fn advecting_velocity(&self) -> SpectralField {
        biot_savart_unchecked(&self.q, self.model.alpha())
    }

    /// Unfiltered velocity `K ∗ q`.
    pub fn velocity(&self) -> SpectralField {
        biot_savart_unchecked(&self.q, 0.0)
    }
}

/// Per-step settings that are not part of the state.
#[derive(Debug, Clone, Copy)]
pub struct StepOptions {
    pub dealias: bool,
    /// Largest accepted `dt·max|u|/Δx`.
    pub cfl_limit: f64,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            dealias: true,
            cfl_limit: 1.0,
        }
    }
}

/// Advection tendency `−u·∇q` and the largest advecting speed on the grid.
fn tendency(grid: &Grid, qhat: &[Complex64], alpha: f64, dealias: bool) -> (Vec<Complex64>, f64) {
    let n = grid.n();
    let a2 = alpha * alpha;
    let len = grid.len();
    let mut u1 = vec![Complex64::default(); len];
    let mut u2 = vec![Complex64::default(); len];
    let mut q1 = vec![Complex64::default(); len];
    let mut q2 = vec![Complex64::default(); len];
    for idx in 1..len {
        let (r, c) = (idx / n, idx % n);
        let (k1, k2) = (grid.xi_odd(c), grid.xi_odd(r));
        let iq = Complex64::new(-qhat[idx].im, qhat[idx].re);
        q1[idx] = iq * k1;
        q2[idx] = iq * k2;
        let ksq = grid.xi_sq(idx);
        let psi = -qhat[idx] / (ksq * (1.0 + a2 * ksq));
        let ipsi = Complex64::new(-psi.im, psi.re);
        u1[idx] = -ipsi * k2;
        u2[idx] = ipsi * k1;
    }
    let u1 = fft::inverse_real(n, &u1);
    let u2 = fft::inverse_real(n, &u2);
    let q1 = fft::inverse_real(n, &q1);
    let q2 = fft::inverse_real(n, &q2);
    let mut speed = 0.0f64;
    let prod: Vec<f64> = (0..len)
        .map(|i| {
            speed = speed.max(u1[i].hypot(u2[i]));
            -(u1[i] * q1[i] + u2[i] * q2[i])
        })
        .collect();
    let mut out = fft::forward_real(n, &prod);
    if dealias {
        dealias_in_place(grid, &mut out);
    }
    out[0] = Complex64::default();
    (out, speed)
}

/// Right-hand side `−u·∇q` of the vorticity equation for the state's model.
pub fn rhs(state: &SimState, dealias: bool) -> SpectralField {
    let q = state.q.scalar_spectral();
    let (out, _) = tendency(state.grid(), &q, state.model.alpha(), dealias);
    SpectralField::from_spectral(*state.grid(), vec![out]).expect("shape is fixed")
}

/// Largest time step allowed by `cfl` for the state's advecting velocity,
/// or `None` when the velocity vanishes.
pub fn cfl_step(state: &SimState, cfl: f64) -> Option<f64> {
    let speed = max_speed(&state.advecting_velocity());
    if speed > 0.0 {
        Some(cfl * state.grid().dx() / speed)
    } else {
        None
    }
}

fn max_speed(v: &SpectralField) -> f64 {
    let p = v.physical();
    p[0].iter().zip(&p[1]).fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)))
}

/// One classical RK4 step.
pub fn step(state: &SimState, dt: f64, opts: &StepOptions) -> Result<SimState> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::Domain {
            what: "time step must be finite and >= 0",
            value: dt,
        });
    }
    if dt == 0.0 {
        return Ok(state.clone());
    }
    let grid = *state.grid();
    let alpha = state.model.alpha();
    let q0 = state.q.scalar_spectral();
    let (k1, speed) = tendency(&grid, &q0, alpha, opts.dealias);
    if speed > 0.0 {
        let limit = opts.cfl_limit * grid.dx() / speed;
        if dt > limit {
            return Err(Error::Cfl {
                dt,
                limit,
                max_speed: speed,
                spacing: grid.dx(),
            });
        }
    }
    let stage = |k: &[Complex64], h: f64| -> Vec<Complex64> { q0.iter().zip(k).map(|(q, k)| q + k * h).collect() };
    let (k2, _) = tendency(&grid, &stage(&k1, 0.5 * dt), alpha, opts.dealias);
    let (k3, _) = tendency(&grid, &stage(&k2, 0.5 * dt), alpha, opts.dealias);
    let (k4, _) = tendency(&grid, &stage(&k3, dt), alpha, opts.dealias);
    let w = dt / 6.0;
    let mut next: Vec<Complex64> = (0..grid.len())
        .map(|i| q0[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w)
        .collect();
    next[0] = q0[0];
    if next.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite(format!(
            "vorticity after step {} (t = {})",
            state.steps + 1,
            state.t + dt
        )));
    }
    Ok(SimState {
        t: state.t + dt,
        q: SpectralField::from_spectral(grid, vec![next])?,
        model: state.model,
        steps: state.steps + 1,
    })
}

/// One `(t, name, value)` row of a norm report.
#[derive(Debug, Clone, PartialEq)]
pub struct NormRow {
    pub t: f64,
    pub name: &'static str,
    pub value: f64,
}

/// Norm names emitted by [`norm_report`], in order.
pub const NORM_NAMES: [&str; 8] = [
    "q_l1",
    "q_l2",
    "q_linf",
    "v_linf",
    "u_linf",
    "grad_v_linf",
    "grad_u_linf",
    "q_besov_half_inf",
];

/// Diagnostics at one instant: `‖q‖_{L^p}` for `p ∈ {1, 2, ∞}`, sup and
/// gradient sup of the unfiltered velocity `v = K ∗ q` and of the advecting
/// velocity `u` (equal for Euler), and `‖q‖_{Ḃ^{1/2}_{2,∞}}`.
pub fn norm_report(state: &SimState) -> Result<Vec<NormRow>> {
    let q = &state.q;
    let v = state.velocity();
    let u = state.advecting_velocity();
    let values = [
        lp_norm(q, 1.0)?,
        lp_norm(q, 2.0)?,
        lp_norm(q, f64::INFINITY)?,
        lp_norm(&v, f64::INFINITY)?,
        lp_norm(&u, f64::INFINITY)?,
        max_gradient_norm(&v)?,
        max_gradient_norm(&u)?,
        besov_norm(q, 0.5, BesovSum::Sup),
    ];
    Ok(NORM_NAMES
        .iter()
        .zip(values)
        .map(|(&name, value)| NormRow {
            t: state.t,
            name,
            value,
        })
        .collect())
}

/// States at the output times plus the norm stream.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub model: Model,
    pub dt: f64,
    pub states: Vec<SimState>,
    pub norms: Vec<NormRow>,
}

impl Trajectory {
    pub fn output_times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &SimState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Values of one named norm over the output times.
    pub fn series(&self, name: &str) -> Vec<(f64, f64)> {
        self.norms
            .iter()
            .filter(|r| r.name == name)
            .map(|r| (r.t, r.value))
            .collect()
    }
}

/// Time step used by `run`: the configured `dt`, or `cfl·Δx/max|u|` at the
/// initial time, shrunk so an integer number of steps fills each output
/// interval. Returns `(dt, steps per interval)`.
pub fn plan_steps(config: &SimConfig, initial: &SimState) -> (f64, usize) {
    let interval = config.horizon / config.outputs as f64;
    if interval == 0.0 {
        return (0.0, 0);
    }
    let dt_max = config.dt.or_else(|| cfl_step(initial, config.cfl)).unwrap_or(interval);
    let steps = (interval / dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (interval / steps as f64, steps)
}

/// Integrate `config` to its horizon.
pub fn run(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let grid = Grid::new(config.n, config.length)?;
    let q0 = initial_vorticity(&config.initial, grid)?;
    let state = SimState::new(q0, config.model())?;
    let (dt, per) = plan_steps(config, &state);
    run_from(state, config, dt, per)
}

/// Integrate from `state` with a fixed `dt` and `per` steps per output
/// interval.
pub fn run_from(state: SimState, config: &SimConfig, dt: f64, per: usize) -> Result<Trajectory> {
    let opts = StepOptions {
        dealias: config.dealias,
        cfl_limit: config.cfl_limit,
    };
    let model = state.model;
    let mut norms = norm_report(&state)?;
    let mut states = vec![state];
    let intervals = if config.horizon == 0.0 { 0 } else { config.outputs };
    let mut cur = states[0].clone();
    for k in 1..=intervals {
        for _ in 0..per {
            cur = step(&cur, dt, &opts).map_err(|e| Error::Simulation {
                alpha: model.alpha(),
                step: cur.steps + 1,
                source: Box::new(e),
            })?;
        }
        // pin the clock to the exact output time
        cur.t = config.horizon * k as f64 / config.outputs as f64;
        norms.extend(norm_report(&cur)?);
        states.push(cur.clone());
    }
    Ok(Trajectory {
        model,
        dt,
        states,
        norms,
    })
}

/// `‖vA − vB‖_{H^s}` at every shared output time, each velocity rebuilt
/// unfiltered from its own vorticity. Rows are `(t, s, value)`.
pub fn difference_norms(a: &Trajectory, b: &Trajectory, s_list: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    if a.states.len() != b.states.len() {
        return Err(Error::Mismatch(format!(
            "trajectories have {} and {} output times",
            a.states.len(),
            b.states.len()
        )));
    }
    let mut rows = Vec::new();
    for (sa, sb) in a.states.iter().zip(&b.states) {
        if (sa.t - sb.t).abs() > 1e-12 * sa.t.abs().max(1.0) {
            return Err(Error::Mismatch(format!("output times differ: {} vs {}", sa.t, sb.t)));
        }
        sa.q.check_compatible(&sb.q)?;
        let dq = sa.q.axpby(1.0, &sb.q, -1.0)?;
        let dv = biot_savart_unchecked(&dq, 0.0);
        for &s in s_list {
            rows.push((sa.t, s, sobolev_norm(&dv, s)));
        }
    }
    Ok(rows)
}

/// Serialize norm rows as `t,name,value` CSV.
pub fn norms_csv(rows: &[NormRow]) -> String {
    let mut out = String::from("t,name,value\n");
    for r in rows {
        let _ = writeln!(out, "{:e},{},{:e}", r.t, r.name, r.value);
    }
    out
}

/// Write `norms.csv` and, if configured, one snapshot per output time into
/// `dir`.
pub fn write_outputs(traj: &Trajectory, config: &SimConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("norms.csv");
    fs::write(&path, norms_csv(&traj.norms)).map_err(|e| Error::io(&path, e))?;
    if config.snapshots {
        for (k, s) in traj.states.iter().enumerate() {
            let p = dir.join(format!("q_{k:04}.spfd"));
            snapshot::write(&p, &s.q, snapshot::Representation::Spectral)?;
        }
    }
    Ok(())
}
