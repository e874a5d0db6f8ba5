//! Run configuration, loaded from a single JSON document.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::intops::Scheme;
use crate::quadrule::QuadConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorConfig {
    pub scheme: Scheme,
    pub beta: f64,
    pub n: usize,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        OperatorConfig {
            scheme: Scheme::Trapezoid,
            beta: 1.0,
            n: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurvesConfig {
    pub s_samples: usize,
    pub sigma_grid: Vec<f64>,
}

impl Default for CurvesConfig {
    fn default() -> Self {
        CurvesConfig {
            s_samples: 101,
            sigma_grid: crate::curves::sigma_grid_9(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZeroTolerances {
    /// `|G|` below this counts as a zero.
    pub zero_abs: f64,
    /// `|sigma - 1/2|` below this counts as on the line.
    pub on_line: f64,
}

impl Default for ZeroTolerances {
    fn default() -> Self {
        ZeroTolerances {
            zero_abs: 1e-8,
            on_line: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZerosConfig {
    pub t_max: f64,
    pub tolerances: ZeroTolerances,
}

impl Default for ZerosConfig {
    fn default() -> Self {
        ZerosConfig {
            t_max: 30.0,
            tolerances: ZeroTolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub quad: QuadConfig,
    pub operator: OperatorConfig,
    pub curves: CurvesConfig,
    pub zeros: ZerosConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.operator.n < 8 {
            return bad(format!("operator.n = {} < 8", self.operator.n));
        }
        if !(self.operator.beta > 0.0) || !self.operator.beta.is_finite() {
            return bad(format!(
                "operator.beta = {} must be positive",
                self.operator.beta
            ));
        }
        if self.curves.s_samples < 2 {
            return bad("curves.s_samples must be at least 2".into());
        }
        if self
            .curves
            .sigma_grid
            .iter()
            .any(|s| !(*s > 0.0 && *s < 1.0))
        {
            return bad("curves.sigma_grid must lie in (0, 1)".into());
        }
        if !(self.zeros.t_max > 0.0 && self.zeros.t_max <= 60.0) {
            return bad(format!(
                "zeros.t_max = {} outside (0, 60]",
                self.zeros.t_max
            ));
        }
        let t = &self.zeros.tolerances;
        if !(t.zero_abs > 0.0 && t.on_line > 0.0) {
            return bad("zero tolerances must be positive".into());
        }
        Ok(())
    }
}
