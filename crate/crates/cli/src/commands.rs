use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use alphaflow_core::contour::{run_contour as run_cd, write_contour_outputs, ContourConfig, Shape};
use alphaflow_core::euler::{run, write_outputs, InitialData, SimConfig};
use alphaflow_core::harness::{
    besov_check as check, rate_study as study, self_convergence as refine, write_rate_study, BesovProfile, Problem,
    RateStudyConfig, SelfConvergenceConfig, StudyKind,
};
use alphaflow_core::special::bessel_k;
use alphaflow_core::Error;

use crate::output::{self, io_err};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "ALPHAFLOW_WORKERS";

pub fn init_workers() -> Result<(), Error> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::InvalidConfig(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}")))?;
    // a second initialization (only possible in tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Raw bytes and parsed value of a JSON config.
fn load<T: DeserializeOwned>(path: &Path) -> Result<(Vec<u8>, T), Error> {
    let raw = fs::read(path).map_err(|e| io_err(path, e))?;
    let value = serde_json::from_slice(&raw).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok((raw, value))
}

/// Relative data paths inside a config are taken relative to the config
/// file, not the working directory.
fn rebase(path: &mut PathBuf, config: &Path) {
    if path.is_relative() {
        if let Some(dir) = config.parent() {
            *path = dir.join(&*path);
        }
    }
}

fn rebase_sim(cfg: &mut SimConfig, config: &Path) {
    if let InitialData::Snapshot { path } = &mut cfg.initial {
        rebase(path, config);
    }
}

fn rebase_contour(cfg: &mut ContourConfig, config: &Path) {
    if let Shape::Snapshot { path } = &mut cfg.initial {
        rebase(path, config);
    }
}

fn seeds(cfg: &SimConfig) -> Vec<u64> {
    match cfg.initial {
        InitialData::BandLimited { seed, .. } => vec![seed],
        _ => Vec::new(),
    }
}

fn note(verbose: u8, msg: impl AsRef<str>) {
    if verbose > 0 {
        eprintln!("{}", msg.as_ref());
    }
}

pub fn run_spectral(config: &Path, out: &Path, verbose: u8) -> Result<(), Error> {
    let (raw, mut cfg): (_, SimConfig) = load(config)?;
    cfg.validate()?;
    rebase_sim(&mut cfg, config);
    output::provenance(out, "run-spectral", config, &raw, seeds(&cfg))?;
    note(
        verbose,
        format!(
            "run-spectral: {} N = {}, T = {}",
            cfg.model().name(),
            cfg.n,
            cfg.horizon
        ),
    );
    let traj = run(&cfg)?;
    write_outputs(&traj, &cfg, out)?;
    note(verbose, format!("wrote {}", out.display()));
    Ok(())
}

pub fn run_contour(config: &Path, out: &Path, verbose: u8) -> Result<(), Error> {
    let (raw, mut cfg): (_, ContourConfig) = load(config)?;
    cfg.validate()?;
    rebase_contour(&mut cfg, config);
    output::provenance(out, "run-contour", config, &raw, Vec::new())?;
    note(
        verbose,
        format!("run-contour: M = {}, T = {}", cfg.markers, cfg.horizon),
    );
    let res = run_cd(&cfg)?;
    write_contour_outputs(&res, &cfg, out)?;
    note(verbose, format!("wrote {}", out.display()));
    Ok(())
}

pub fn rate_study(config: &Path, out: &Path, verbose: u8) -> Result<(), Error> {
    let (raw, mut cfg): (_, RateStudyConfig) = load(config)?;
    cfg.validate()?;
    let seeds = match &mut cfg.study {
        StudyKind::Spectral { config: c, .. } => {
            rebase_sim(c, config);
            seeds(c)
        }
        StudyKind::Patch { config: c, .. } => {
            rebase_contour(c, config);
            Vec::new()
        }
    };
    output::provenance(out, "rate-study", config, &raw, seeds)?;
    note(verbose, format!("rate-study: alphas {:?}", cfg.alphas));
    let res = study(&cfg)?;
    write_rate_study(&cfg, &res, out)?;
    note(verbose, format!("wrote {}", out.display()));
    Ok(())
}

pub fn self_convergence(config: &Path, out: &Path, verbose: u8) -> Result<(), Error> {
    let (raw, mut cfg): (_, SelfConvergenceConfig) = load(config)?;
    cfg.validate()?;
    let seeds = match &mut cfg.problem {
        Problem::Spectral { config: c } => {
            rebase_sim(c, config);
            seeds(c)
        }
        Problem::Contour { config: c } => {
            rebase_contour(c, config);
            Vec::new()
        }
    };
    output::provenance(out, "self-convergence", config, &raw, seeds)?;
    note(verbose, format!("self-convergence: {} levels", cfg.levels));
    let res = refine(&cfg)?;
    output::write(&out.join("levels.csv"), res.csv())?;
    output::write(&out.join("summary.txt"), res.summary())?;
    note(verbose, format!("wrote {}", out.display()));
    Ok(())
}

pub fn besov_check(resolutions: &[usize], profile: BesovProfile, out: Option<&Path>) -> Result<(), Error> {
    let report = check(resolutions, profile)?;
    emit(out, "besov.csv", &report.csv())
}

pub fn bessel_table(order: u32, min: f64, max: f64, points: usize, out: Option<&Path>) -> Result<(), Error> {
    if points == 0 || !(min > 0.0) || !(max >= min) || !max.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "need points >= 1 and 0 < min <= max, got points = {points}, min = {min}, max = {max}"
        )));
    }
    if points == 1 && max != min {
        return Err(Error::InvalidConfig("a single point needs min == max".into()));
    }
    let mut body = String::from("z,value\n");
    for i in 0..points {
        let z = if points == 1 {
            min
        } else {
            min + (max - min) * i as f64 / (points - 1) as f64
        };
        let _ = writeln!(body, "{z:e},{:e}", bessel_k(order, z)?);
    }
    emit(out, "bessel_table.csv", &body)
}

fn emit(out: Option<&Path>, name: &str, body: &str) -> Result<(), Error> {
    match out {
        Some(dir) => {
            output::create_dir(dir)?;
            output::write(&dir.join(name), body)
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
