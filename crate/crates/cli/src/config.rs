use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;
use spectra_graft::VerifyOptions;

/// Overrides the enumeration cap; a `--cap` flag wins over it.
pub const CAP_ENV: &str = "SPECTRA_GRAFT_CAP";

/// Settings from a TOML file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub cap: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub samples_per_tree: Option<usize>,
    pub contraction_exhaustive_max: Option<usize>,
    pub branch_move_exhaustive_max: Option<usize>,
    pub quadratic_form_vectors: Option<usize>,
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(value) = std::env::var(CAP_ENV) {
            let cap = value
                .trim()
                .parse()
                .with_context(|| format!("{CAP_ENV}={value:?} is not a non-negative integer"))?;
            self.cap = Some(cap);
        }
        Ok(())
    }

    pub fn options(&self) -> VerifyOptions {
        let d = VerifyOptions::default();
        VerifyOptions {
            cap: self.cap.unwrap_or(d.cap),
            tol: self.tol.unwrap_or(d.tol),
            seed: self.seed.unwrap_or(d.seed),
            contraction_exhaustive_max: self.contraction_exhaustive_max.unwrap_or(d.contraction_exhaustive_max),
            branch_move_exhaustive_max: self.branch_move_exhaustive_max.unwrap_or(d.branch_move_exhaustive_max),
            samples_per_tree: self.samples_per_tree.unwrap_or(d.samples_per_tree),
            quadratic_form_vectors: self.quadratic_form_vectors.unwrap_or(d.quadratic_form_vectors),
        }
    }
}
