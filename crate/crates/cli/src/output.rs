//! Run directories: byte-identical config copy and a manifest.

use std::fs;
use std::path::Path;

use serde::Serialize;

use alphaflow_core::Error;

pub fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write(path: &Path, body: impl AsRef<[u8]>) -> Result<(), Error> {
    fs::write(path, body).map_err(|e| io_err(path, e))
}

pub fn create_dir(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    /// Path of the config as given on the command line.
    pub config_source: String,
    /// Name of the copy inside the run directory.
    pub config_copy: &'static str,
    pub seeds: Vec<u64>,
    pub workers: usize,
    pub dependencies: Vec<(&'static str, &'static str)>,
}

pub const CONFIG_COPY: &str = "config.json";

/// Copy the raw config bytes and write `manifest.json` into `dir`.
pub fn provenance(dir: &Path, subcommand: &str, config: &Path, raw: &[u8], seeds: Vec<u64>) -> Result<(), Error> {
    create_dir(dir)?;
    write(&dir.join(CONFIG_COPY), raw)?;
    let manifest = Manifest {
        tool: "alphaflow",
        version: env!("CARGO_PKG_VERSION"),
        subcommand,
        config_source: config.display().to_string(),
        config_copy: CONFIG_COPY,
        seeds,
        workers: rayon::current_num_threads(),
        dependencies: vec![("alphaflow-core", alphaflow_core::VERSION)],
    };
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&dir.join("manifest.json"), body + "\n")
}
