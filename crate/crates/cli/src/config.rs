//! Tolerances and defaults, from built-in values, an optional `key = value`
//! file and the `AFFINE_ELASTICA_TOL` environment variable, in that order.

use std::path::Path;

pub const TOL_ENV: &str = "AFFINE_ELASTICA_TOL";

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct JobConfig {
    /// RMS residual bound of the verification suites, scaled by the
    /// curvature magnitude where the residual carries units.
    pub tol: f64,
    /// Bound on |x′y″ − x″y′ − 1|.
    pub unimodular_tol: f64,
    /// Closure gap bound, relative to the curve diameter.
    pub closure_tol: f64,
    /// Default sample count for synthesized curves.
    pub samples: usize,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            tol: 1e-5,
            unimodular_tol: 1e-6,
            closure_tol: 1e-5,
            samples: 1601,
        }
    }
}

impl JobConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let mut cfg = JobConfig::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            cfg.apply_text(&text)?;
        }
        if let Ok(v) = std::env::var(TOL_ENV) {
            cfg.tol = parse_positive(TOL_ENV, &v)?;
        }
        Ok(cfg)
    }

    fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", ln + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "tol" => self.tol = parse_positive(key, value)?,
                "unimodular_tol" => self.unimodular_tol = parse_positive(key, value)?,
                "closure_tol" => self.closure_tol = parse_positive(key, value)?,
                "samples" => {
                    self.samples = value
                        .parse()
                        .ok()
                        .filter(|&n: &usize| n >= 64)
                        .ok_or_else(|| format!("samples must be an integer >= 64, got {value}"))?
                }
                _ => return Err(format!("config line {}: unknown key '{key}'", ln + 1)),
            }
        }
        Ok(())
    }
}

fn parse_positive(key: &str, v: &str) -> Result<f64, String> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite() && *x > 0.0)
        .ok_or_else(|| format!("{key} must be a positive number, got '{v}'"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys_and_comments() {
        let mut c = JobConfig::default();
        c.apply_text("# tolerances\ntol = 1e-7\nsamples=800 # denser\n\n")
            .unwrap();
        assert_eq!(c.tol, 1e-7);
        assert_eq!(c.samples, 800);
        assert_eq!(c.closure_tol, 1e-5);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let mut c = JobConfig::default();
        assert!(c
            .apply_text("tolerance = 1")
            .unwrap_err()
            .contains("unknown key"));
        assert!(c.apply_text("tol = -1").is_err());
        assert!(c.apply_text("samples = 3").is_err());
        assert!(c.apply_text("tol").is_err());
    }
}
