use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::qcore::{Arith, DEFAULT_TOL};

/// Run configuration shared by every suite and subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub arith: Arith,
    pub tol: f64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { arith: Arith::Float, tol: DEFAULT_TOL, seed: 20240607 }
    }
}

impl Config {
    pub fn from_json_str(s: &str) -> Result<Config> {
        let cfg: Config = serde_json::from_str(s).map_err(|e| Error::Schema(format!("config: {e}")))?;
        cfg.validate()
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Config::from_json_str(&text)
    }

    /// Command-line values take precedence over the file.
    pub fn with_overrides(mut self, arith: Option<Arith>, tol: Option<f64>, seed: Option<u64>) -> Result<Config> {
        if let Some(a) = arith {
            self.arith = a;
        }
        if let Some(t) = tol {
            self.tol = t;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
        self.validate()
    }

    fn validate(self) -> Result<Config> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Schema(format!("tol must be a positive finite number, got {}", self.tol)));
        }
        Ok(self)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain struct")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c = Config::from_json_str(r#"{"arith": "exact"}"#).unwrap();
        assert_eq!(c.arith, Arith::Exact);
        assert_eq!(c.tol, DEFAULT_TOL);
    }

    #[test]
    fn flags_win() {
        let c = Config::from_json_str(r#"{"tol": 1e-6, "seed": 3}"#).unwrap();
        let c = c.with_overrides(Some(Arith::Exact), None, Some(9)).unwrap();
        assert_eq!((c.arith, c.tol, c.seed), (Arith::Exact, 1e-6, 9));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Config::from_json_str(r#"{"tolerance": 1}"#).unwrap_err().kind(), "SchemaError");
        assert!(Config::default().with_overrides(None, Some(-1.0), None).is_err());
    }
}
