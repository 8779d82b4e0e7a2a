//! Batch driver for hyperlat experiments.
//!
//! A run is described by a [`Manifest`]: a command, its parameters, an optional
//! output directory and an optional cache directory. The binary builds the
//! manifest from flags or reads it from a JSON file; [`run`] executes it.
//!
//! Count rows have a fixed CSV schema `n, radius_sq, count, method, borderline,
//! seconds`, mirrored field-for-field in JSON lines.

mod cache;
mod commands;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cache::{cache_key, Cache, CacheKey};
pub use commands::{geometric_radii, parse_mu, run, CountRow, Outcome, TransformRow};

/// Environment variable holding the default cache directory.
pub const CACHE_ENV: &str = "HYPERLAT_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
#[value(rename_all = "lower")]
pub enum Command {
    Count,
    Scan,
    Fit,
    Constant,
    Transform,
    Spectrum,
    Optimize,
    Baselines,
}

/// Command-specific parameters; each command reads the fields it needs and
/// rejects a manifest missing a required one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Exact `"p/q"` for COUNT.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_sq: Option<String>,
    /// Explicit radius list for SCAN and FIT; overrides the geometric grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii_sq: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_steps: Option<usize>,
    /// Radius for TRANSFORM.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// `"re,im;re,im;…"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Residue series depth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Regime exponent for the envelope.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Upper end of the BASELINES table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Base points for COUNT/SCAN; identity when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub command: Command,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
}

impl Manifest {
    pub fn new(command: Command, parameters: Parameters) -> Self {
        Self {
            command,
            parameters,
            output_path: None,
            cache_dir: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Manifest(e.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cache entry {path} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for a bad manifest, 3 for numeric failure or a corrupt cache, 1 for
    /// anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Manifest(_) => 2,
            CliError::Numeric(_) | CliError::CacheCorrupt { .. } => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub(crate) fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}
