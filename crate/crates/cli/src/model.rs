use std::path::Path;

use biflab::return_map::ModelFamily;
use serde::Deserialize;

use crate::CliError;

/// Model file contents. `mu1`/`mu2` may be left out when the rescaled parameters are held fixed.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub lambda: f64,
    #[serde(default)]
    pub beta1: f64,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub b: f64,
    pub d: f64,
    pub x_plus: f64,
    pub y_minus: f64,
}

impl ModelConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn has_mu(&self) -> bool {
        self.mu1.is_some() && self.mu2.is_some()
    }

    pub fn build(&self) -> Result<ModelFamily, CliError> {
        Ok(ModelFamily::simplified(
            self.lambda,
            self.beta1,
            self.mu1.unwrap_or(0.0),
            self.mu2.unwrap_or(0.0),
            self.b,
            self.d,
            self.x_plus,
            self.y_minus,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"lambda": 0.5, "b": 1, "d": 1, "x_plus": 1, "y_minus": 1, "gamma": 2}"#;
        assert!(serde_json::from_str::<ModelConfig>(bad).is_err());
        let good = r#"{"lambda": 0.5, "b": 1, "d": 1, "x_plus": 1, "y_minus": 1}"#;
        let m: ModelConfig = serde_json::from_str(good).unwrap();
        assert!(!m.has_mu());
        assert_eq!(m.beta1, 0.0);
    }
}
