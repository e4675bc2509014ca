use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::WeightNormalization;
use crate::params::{ModelParams, SimGrid};

pub const DEFAULT_SWEEP: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
pub const DEFAULT_Q_GRID: [f64; 7] = [1000.0, 1500.0, 2000.0, 2500.0, 3000.0, 3500.0, 4000.0];

/// Everything a batch run needs. Missing keys take the E-mini defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub grid: SimGrid,
    pub n_paths: usize,
    pub master_seed: u64,
    pub conditioned: bool,
    /// Factors applied to `(tau_m, tau_q)` together in SNR sweeps.
    pub sweep: Option<Vec<f64>>,
    /// Order sizes drawn uniformly in regression studies.
    pub q_grid: Option<Vec<f64>>,
    pub output_dir: PathBuf,
    /// Pair paths `2k` and `2k + 1` with mirrored mid noise.
    pub antithetic: bool,
    pub weight_normalization: WeightNormalization,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            grid: SimGrid::default(),
            n_paths: 100_000,
            master_seed: 42,
            conditioned: false,
            sweep: None,
            q_grid: None,
            output_dir: PathBuf::from("out"),
            antithetic: true,
            weight_normalization: WeightNormalization::Analytic,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("malformed config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidConfig(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid.validate(self.params.horizon)?;
        if self.n_paths == 0 {
            return Err(Error::InvalidConfig("n_paths must be >= 1".into()));
        }
        if let Some(s) = &self.sweep {
            if s.is_empty() {
                return Err(Error::InvalidConfig("sweep must not be empty".into()));
            }
            if s.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
                return Err(Error::InvalidConfig("sweep factors must be > 0".into()));
            }
        }
        if let Some(q) = &self.q_grid {
            if q.is_empty() {
                return Err(Error::InvalidConfig("q_grid must not be empty".into()));
            }
            if q.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidConfig("q_grid sizes must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn sweep_factors(&self) -> Vec<f64> {
        self.sweep.clone().unwrap_or_else(|| DEFAULT_SWEEP.to_vec())
    }

    pub fn order_sizes(&self) -> Vec<f64> {
        self.q_grid
            .clone()
            .unwrap_or_else(|| DEFAULT_Q_GRID.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_json_is_default() {
        let cfg = ExperimentConfig::from_json_str("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.params, ModelParams::default());
    }

    #[test]
    fn partial_params_override() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"params": {"lambda": 0.01}, "n_paths": 10, "conditioned": true, "weight_normalization": "per_path"}"#,
        )
        .unwrap();
        assert_eq!(cfg.params.lambda, 0.01);
        assert_eq!(cfg.params.q_total, 2000.0);
        assert_eq!(cfg.n_paths, 10);
        assert!(cfg.conditioned);
        assert_eq!(cfg.weight_normalization, WeightNormalization::PerPath);
    }

    #[test]
    fn rejects_invalid() {
        for text in [
            "{",
            r#"{"n_paths": 0}"#,
            r#"{"unknown_key": 1}"#,
            r#"{"params": {"tau_m": -1}}"#,
            r#"{"params": {"horizon": 100}}"#,
            r#"{"sweep": []}"#,
            r#"{"sweep": [1.0, -2.0]}"#,
            r#"{"q_grid": [0.0]}"#,
        ] {
            assert!(ExperimentConfig::from_json_str(text).is_err(), "{text}");
        }
        assert!(ExperimentConfig::from_file(Path::new("/nonexistent/cfg.json")).is_err());
    }
}
