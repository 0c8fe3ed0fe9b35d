//! Key-value configuration file (TOML syntax).
//!
//! ```toml
//! newton_tol = 1e-12            # Gauss-Newton residual tolerance
//! gap_factor = 1e3              # required singular-value gap
//! precision_ladder = [64, 256, 1024]
//! groebner_term_budget = 1000000
//! groebner = "fast"             # off | fast | full
//! output_dir = "out"
//! jobs = 4                      # worker threads, 0 = all cores
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

pub const DEFAULT_NEWTON_TOL: f64 = 1e-12;
pub const DEFAULT_OUTPUT_DIR: &str = "out";

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub newton_tol: Option<f64>,
    pub gap_factor: Option<f64>,
    pub precision_ladder: Option<Vec<usize>>,
    pub groebner_term_budget: Option<usize>,
    pub groebner: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub fn parse(text: &str) -> Result<FileConfig> {
    toml::from_str(text).context("malformed configuration")
}

pub fn load(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            parse(&text)
        }
    }
}
