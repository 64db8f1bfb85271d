use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sierpinski_weyl::catalog::CatalogConfig;
use sierpinski_weyl::decimation::PsiConfig;
use sierpinski_weyl::graph::{GROUPING_TOL, MAX_LEVEL};
use sierpinski_weyl::julia::{LIST_CAP, MEASURE_CAP};
use sierpinski_weyl::verify::VerifyConfig;
use sierpinski_weyl::weyl::DEFAULT_L_MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Settings shared by every subcommand. Loaded from a TOML file, then
/// overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub psi_tol: f64,
    pub psi_max_iterations: usize,
    pub comparison_tol: f64,
    pub grouping_tol: f64,
    pub l_max: usize,
    pub max_cycles: usize,
    pub cover_depth: u32,
    pub oracle_level: u32,
    /// When set, each command writes `<output_dir>/<command>.<ext>` instead
    /// of standard output.
    pub output_dir: Option<PathBuf>,
    pub format: Format,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let catalog = CatalogConfig::default();
        Self {
            psi_tol: catalog.psi.tol,
            psi_max_iterations: catalog.psi.max_iterations,
            comparison_tol: catalog.comparison_tol,
            grouping_tol: GROUPING_TOL,
            l_max: DEFAULT_L_MAX,
            max_cycles: catalog.max_cycles,
            cover_depth: 10,
            oracle_level: 4,
            output_dir: None,
            format: Format::Csv,
            verify: VerifyConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        let v = &self.verify;
        for (name, value) in [
            ("psi_tol", self.psi_tol),
            ("comparison_tol", self.comparison_tol),
            ("grouping_tol", self.grouping_tol),
            ("verify.exhaustion_tol", v.exhaustion_tol),
            ("verify.correspondence_tol", v.correspondence_tol),
            ("verify.oracle_tol", v.oracle_tol),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                bail!("{name} must be positive, got {value}");
            }
        }
        if self.psi_max_iterations == 0 || self.max_cycles == 0 || self.l_max == 0 {
            bail!("psi_max_iterations, max_cycles and l_max must be at least 1");
        }
        if self.cover_depth > LIST_CAP {
            bail!(
                "cover_depth {} exceeds the cap of {LIST_CAP}",
                self.cover_depth
            );
        }
        if self.oracle_level > MAX_LEVEL || v.oracle_level > MAX_LEVEL {
            bail!("oracle level exceeds the cap of {MAX_LEVEL}");
        }
        if v.julia_depth > MEASURE_CAP {
            bail!(
                "verify.julia_depth {} exceeds the cap of {MEASURE_CAP}",
                v.julia_depth
            );
        }
        if v.exhaustion_depth > LIST_CAP {
            bail!(
                "verify.exhaustion_depth {} exceeds the cap of {LIST_CAP}",
                v.exhaustion_depth
            );
        }
        Ok(())
    }

    pub fn catalog_config(&self) -> CatalogConfig {
        CatalogConfig {
            psi: PsiConfig {
                tol: self.psi_tol,
                max_iterations: self.psi_max_iterations,
            },
            comparison_tol: self.comparison_tol,
            max_cycles: self.max_cycles,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: RunConfig =
            toml::from_str("l_max = 64\nformat = \"json\"\n[verify]\nn_max = 8\n").unwrap();
        assert_eq!(cfg.l_max, 64);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.verify.n_max, 8);
        assert_eq!(cfg.verify.j_max, VerifyConfig::default().j_max);
        assert_eq!(cfg.psi_tol, 1e-14);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(toml::from_str::<RunConfig>("lmax = 3").is_err());
        let cfg = RunConfig {
            comparison_tol: 0.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            oracle_level: 7,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
