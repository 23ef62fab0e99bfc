use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::SpectralBounds;
use crate::means::{MeanKind, SolverSettings};
use crate::param::ExtendedParam;

use super::ConfigError;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 16;

/// Grid and tolerances of a verification run. Every field has a default, so
/// a config file only needs to list overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub n_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub trials_per_case: usize,
    pub bounds: SpectralBounds,
    pub mean_kinds: Vec<MeanKind>,
    pub param_grid: Vec<ExtendedParam>,
    pub exponent_grid: Vec<f64>,
    pub rel_tol: f64,
    pub solver: SolverSettings,
    /// Where inputs of failing trials are written; `None` disables dumps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_dir: Option<PathBuf>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            dims: vec![2, 3, 5],
            n_values: vec![2, 3, 4],
            k_values: vec![2, 3],
            trials_per_case: 50,
            bounds: SpectralBounds::new(1.0, 4.0).expect("valid default bounds"),
            mean_kinds: vec![
                MeanKind::Arithmetic,
                MeanKind::Harmonic,
                MeanKind::Power(0.5),
                MeanKind::Power(-0.5),
                MeanKind::Power(1.0),
                MeanKind::Power(-1.0),
                MeanKind::Karcher,
                MeanKind::Agh,
            ],
            param_grid: [
                f64::NEG_INFINITY,
                -3.0,
                -1.0,
                0.0,
                1.0,
                3.0,
                f64::INFINITY,
            ]
            .into_iter()
            .map(|x| ExtendedParam::new(x).expect("grid values are not NaN"))
            .collect(),
            exponent_grid: vec![-1.0, -0.5, 0.0, 0.5],
            rel_tol: crate::order::DEFAULT_REL_TOL,
            solver: SolverSettings::default(),
            dump_dir: None,
        }
    }
}

impl TrialConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        if self.trials_per_case == 0 {
            return invalid("trials_per_case must be at least 1".into());
        }
        for (name, empty) in [
            ("dims", self.dims.is_empty()),
            ("n_values", self.n_values.is_empty()),
            ("k_values", self.k_values.is_empty()),
            ("mean_kinds", self.mean_kinds.is_empty()),
            ("param_grid", self.param_grid.is_empty()),
            ("exponent_grid", self.exponent_grid.is_empty()),
        ] {
            if empty {
                return invalid(format!("{name} must not be empty"));
            }
        }
        if let Some(d) = self.dims.iter().find(|d| !(1..=MAX_DIM).contains(*d)) {
            return invalid(format!("dimension {d} outside 1..={MAX_DIM}"));
        }
        if self.n_values.contains(&0) || self.k_values.contains(&0) {
            return invalid("tuple sizes must be at least 1".into());
        }
        if let Some(p) = self.exponent_grid.iter().find(|p| !(-1.0..=1.0).contains(*p)) {
            return invalid(format!("exponent {p} outside [-1, 1]"));
        }
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return invalid(format!("rel_tol must be finite and >= 0, got {}", self.rel_tol));
        }
        self.solver
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Hex SHA-256 prefix of the canonical JSON form. The dump directory is
    /// excluded since it does not affect results.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.dump_dir = None;
        let json = serde_json::to_string(&c).expect("config is serializable");
        let hash = Sha256::digest(json.as_bytes());
        hash[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Finite grid parameters with the given sign (`≥ 0` or `< 0`).
    pub(crate) fn finite_params(&self, negative: bool) -> Vec<f64> {
        self.param_grid
            .iter()
            .filter_map(|p| match *p {
                ExtendedParam::Finite(x) if (x < 0.0) == negative => Some(x),
                _ => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let cfg = TrialConfig::default();
        cfg.validate().unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(TrialConfig::from_json(&json).unwrap(), cfg);
        assert_eq!(cfg.finite_params(false), vec![0.0, 1.0, 3.0]);
        assert_eq!(cfg.finite_params(true), vec![-3.0, -1.0]);
    }

    #[test]
    fn partial_configs_fill_defaults() {
        let cfg = TrialConfig::from_json(r#"{"seed": 7, "bounds": [2.0, 2.0]}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.trials_per_case, 50);
        assert_eq!(cfg.bounds.big_m(), 2.0);
    }

    #[test]
    fn invalid_configs() {
        assert!(TrialConfig::from_json(r#"{"trials_per_case": 0}"#).is_err());
        assert!(TrialConfig::from_json(r#"{"dims": []}"#).is_err());
        assert!(TrialConfig::from_json(r#"{"dims": [17]}"#).is_err());
        assert!(TrialConfig::from_json(r#"{"exponent_grid": [1.5]}"#).is_err());
        assert!(TrialConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(TrialConfig::from_json(r#"{"mean_kinds": ["geometric"]}"#).is_err());
    }

    #[test]
    fn digest_ignores_dump_dir() {
        let a = TrialConfig::default();
        let mut b = a.clone();
        b.dump_dir = Some("/tmp/x".into());
        assert_eq!(a.digest(), b.digest());
        b.seed = 43;
        assert_ne!(a.digest(), b.digest());
    }
}
