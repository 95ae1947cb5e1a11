use std::path::{Path, PathBuf};

use rbm_decoder::bench::CompareConfig;
use rbm_decoder::decoders::DEFAULT_MAX_SWEEPS;
use rbm_decoder::{Hyperparams, Lattice};
use serde::{Deserialize, Serialize};

/// Run configuration read from a JSON document. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub hyper: Hyperparams,
    /// Grid for `grid`; the built-in grid for the dataset's lattice when absent.
    pub grid: Option<Vec<Hyperparams>>,
    pub validation: ValidationConfig,
    pub compare: CompareConfig,
    /// Append-only per-epoch training log.
    pub train_log: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationConfig {
    pub size: usize,
    pub max_sweeps: usize,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            size: 2000,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load_or_default(path: Option<&Path>) -> Result<Self, ConfigError> {
        path.map_or_else(|| Ok(Config::default()), Config::load)
    }

    pub fn grid_for(&self, lattice: &Lattice) -> Vec<Hyperparams> {
        self.grid.clone().unwrap_or_else(|| Hyperparams::default_grid(lattice))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let c: Config = serde_json::from_str("{}").unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.validation.size, 2000);
    }

    #[test]
    fn partial_sections_keep_other_defaults() {
        let c: Config = serde_json::from_str(r#"{"hyper": {"epochs": 3}, "compare": {"M": 50}}"#).unwrap();
        assert_eq!(c.hyper.epochs, 3);
        assert_eq!(c.hyper.n_h, Hyperparams::default().n_h);
        assert_eq!(c.compare.m, 50);
        assert_eq!(c.compare.p_values.len(), 11);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"hyperparams": {}}"#).is_err());
        assert!(serde_json::from_str::<Config>(r#"{"hyper": {"lr": 0.1}}"#).is_err());
    }

    #[test]
    fn grid_falls_back_to_builtin() {
        let lat = Lattice::new(2).unwrap();
        assert_eq!(Config::default().grid_for(&lat).len(), 144);
        let c: Config = serde_json::from_str(r#"{"grid": [{"n_h": 3}]}"#).unwrap();
        assert_eq!(c.grid_for(&lat)[0].n_h, 3);
    }
}
