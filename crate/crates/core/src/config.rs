//! Plain-text model files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! model = damek-ricci
//! m = 2
//! k = 1
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::density::{make_custom, make_damek_ricci, make_euclidean, make_real_hyperbolic, DensityModel};
use crate::error::{Error, Result};
use crate::spherical::DEFAULT_ZERO_TOL;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    pub model: String,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub k: Option<u32>,
    pub theta: Option<String>,
    /// Tolerance for declaring `φ_λ(r) = 0`.
    pub zero_tol: f64,
}

const KEYS: [&str; 6] = ["model", "n", "m", "k", "theta", "zero_tol"];

impl ModelConfig {
    pub fn new(model: &str) -> Self {
        Self {
            model: model.to_string(),
            n: None,
            m: None,
            k: None,
            theta: None,
            zero_tol: DEFAULT_ZERO_TOL,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", no + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", no + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", no + 1)));
            }
        }
        let int = |key: &str| -> Result<Option<u32>> {
            entries
                .get(key)
                .map(|v| v.parse().map_err(|_| Error::Config(format!("`{key}` must be a nonnegative integer, got `{v}`"))))
                .transpose()
        };
        let model = entries
            .get("model")
            .cloned()
            .ok_or_else(|| Error::Config("missing `model`".into()))?;
        let zero_tol = match entries.get("zero_tol") {
            None => DEFAULT_ZERO_TOL,
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|t| *t > 0.0)
                .ok_or_else(|| Error::Config(format!("`zero_tol` must be a positive number, got `{v}`")))?,
        };
        Ok(Self {
            model,
            n: int("n")?,
            m: int("m")?,
            k: int("k")?,
            theta: entries.get("theta").cloned(),
            zero_tol,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn build(&self) -> Result<DensityModel> {
        let need = |v: Option<u32>, key: &str| v.ok_or_else(|| Error::Config(format!("model `{}` needs `{key}`", self.model)));
        match self.model.as_str() {
            "euclidean" => Ok(make_euclidean(need(self.n, "n")?)),
            "hyperbolic" | "real-hyperbolic" => make_real_hyperbolic(need(self.n, "n")?),
            "damek-ricci" => make_damek_ricci(need(self.m, "m")?, need(self.k, "k")?),
            "custom" => {
                let theta = self
                    .theta
                    .as_deref()
                    .ok_or_else(|| Error::Config("model `custom` needs `theta`".into()))?;
                make_custom(need(self.n, "n")?, theta)
            }
            other => Err(Error::Config(format!(
                "unknown model `{other}` (euclidean, hyperbolic, damek-ricci, custom)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds() {
        let c = ModelConfig::parse("# H = 2\nmodel = damek-ricci\nm = 2\n k=1 \n").unwrap();
        let m = c.build().unwrap();
        assert!((m.h() - 2.0).abs() < 1e-12);
        assert_eq!(c.zero_tol, DEFAULT_ZERO_TOL);
        let c = ModelConfig::parse("model = custom\nn = 1\ntheta = sinh(r)\nzero_tol = 1e-7").unwrap();
        assert!((c.build().unwrap().h() - 1.0).abs() < 1e-10);
        assert_eq!(c.zero_tol, 1e-7);
    }

    #[test]
    fn rejects_bad_files() {
        for text in ["model = euclidean\nn = -1", "model = torus\nn = 1", "n = 2", "model = euclidean\ncolour = red", "model euclidean", "model = custom\nn = 1\ntheta = 1 - r"] {
            let r = ModelConfig::parse(text).and_then(|c| c.build());
            assert!(r.is_err(), "{text}");
        }
    }
}
