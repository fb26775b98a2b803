//! Scene files: the JSON run description the CLI consumes. Parsing is
//! strict — unknown keys are rejected so typos fail loudly.

use crate::catalog::{self, CatalogError};
use crate::chart::{Chart, ChartError};
use crate::exprlang::parse;
use crate::verifiers::{Tolerances, CHECK_IDS};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read scene file: {0}")]
    Io(#[from] std::io::Error),
    #[error("scene parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scene: {0}")]
    Invalid(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("expression error in chart component: {0}")]
    Expr(#[from] crate::exprlang::ExprError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Chart,
    Spectrum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Chart description: either a catalog entry or raw component
/// expressions over an explicit box domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expressions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    pub orientation_flip: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub c: f64,
}

/// Partial tolerance override; omitted fields keep defaults.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_eq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_constraint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_pos: Option<f64>,
}

impl ToleranceOverrides {
    pub fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            tol: self.tol.unwrap_or(d.tol),
            tol_eq: self.tol_eq.unwrap_or(d.tol_eq),
            tol_constraint: self.tol_constraint.unwrap_or(d.tol_constraint),
            tol_pos: self.tol_pos.unwrap_or(d.tol_pos),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            format: OutputFormat::Json,
            path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectra: Option<Vec<SpectrumSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<usize>>,
    /// Check identifiers to run; empty means all applicable.
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub oracle_validation: bool,
    #[serde(default)]
    pub ambient_c: f64,
    #[serde(default)]
    pub output: OutputSpec,
}

impl Scene {
    /// True when `id` is enabled (empty check list enables everything).
    pub fn check_enabled(&self, id: &str) -> bool {
        self.checks.is_empty() || self.checks.iter().any(|c| c == id)
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        for c in &self.checks {
            if !CHECK_IDS.contains(&c.as_str()) {
                return Err(SceneError::Invalid(format!(
                    "unknown check identifier {c:?} (known: {})",
                    CHECK_IDS.join(", ")
                )));
            }
        }
        match self.mode {
            Mode::Chart => {
                let chart = self
                    .chart
                    .as_ref()
                    .ok_or_else(|| SceneError::Invalid("chart mode needs a chart".into()))?;
                let grid = self
                    .grid
                    .as_ref()
                    .ok_or_else(|| SceneError::Invalid("chart mode needs a grid".into()))?;
                if grid.iter().any(|m| *m < 2) {
                    return Err(SceneError::Invalid(
                        "grid resolution must be >= 2 per axis".into(),
                    ));
                }
                if chart.catalog.is_some() == chart.expressions.is_some() {
                    return Err(SceneError::Invalid(
                        "chart needs exactly one of `catalog` or `expressions`".into(),
                    ));
                }
                if chart.expressions.is_some() && chart.domain.is_none() {
                    return Err(SceneError::Invalid(
                        "raw-expression charts need a `domain`".into(),
                    ));
                }
                if self.ambient_c != 0.0 {
                    return Err(SceneError::Invalid(
                        "ambient_c applies to spectrum mode only; chart ambient is flat".into(),
                    ));
                }
            }
            Mode::Spectrum => {
                let spectra = self
                    .spectra
                    .as_ref()
                    .ok_or_else(|| SceneError::Invalid("spectrum mode needs `spectra`".into()))?;
                if spectra.is_empty() {
                    return Err(SceneError::Invalid("`spectra` is empty".into()));
                }
                if spectra.iter().any(|s| s.lambdas.len() < 2) {
                    return Err(SceneError::Invalid("each spectrum needs n >= 2".into()));
                }
            }
        }
        Ok(())
    }

    /// Materialize the chart (chart mode only), checking the grid arity
    /// against the chart dimension.
    pub fn build_chart(&self) -> Result<Chart, SceneError> {
        let spec = self
            .chart
            .as_ref()
            .ok_or_else(|| SceneError::Invalid("scene has no chart".into()))?;
        let chart = if let Some(name) = &spec.catalog {
            let params = spec.params.clone().unwrap_or_else(|| Value::Object(Default::default()));
            let mut chart = catalog::make_chart(name, &params)?;
            if spec.orientation_flip {
                chart.orientation_flip = !chart.orientation_flip;
            }
            if let Some(domain) = &spec.domain {
                if domain.len() != chart.n {
                    return Err(SceneError::Invalid(format!(
                        "domain override has {} axes, chart has {}",
                        domain.len(),
                        chart.n
                    )));
                }
                chart.domain = domain.clone();
            }
            chart
        } else {
            let exprs = spec.expressions.as_ref().unwrap();
            let domain = spec.domain.clone().unwrap();
            let n = domain.len();
            let default_vars: Vec<String> = if n == 2 {
                vec!["u".into(), "v".into()]
            } else {
                (0..n).map(|i| format!("x{i}")).collect()
            };
            let var_names = spec.variables.clone().unwrap_or(default_vars);
            if var_names.len() != n {
                return Err(SceneError::Invalid(format!(
                    "{} variables for {} domain axes",
                    var_names.len(),
                    n
                )));
            }
            let vars: Vec<&str> = var_names.iter().map(String::as_str).collect();
            let components = exprs
                .iter()
                .map(|src| parse(src, &vars))
                .collect::<Result<Vec<_>, _>>()?;
            Chart::new(n, components, domain, spec.orientation_flip)?
        };
        let grid = self.grid.as_ref().unwrap();
        if grid.len() != chart.n {
            return Err(SceneError::Invalid(format!(
                "grid has {} axes, chart has {}",
                grid.len(),
                chart.n
            )));
        }
        Ok(chart)
    }
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene, SceneError> {
    let text = std::fs::read_to_string(path)?;
    parse_scene(&text)
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let scene: Scene = serde_json::from_str(text)?;
    scene.validate()?;
    Ok(scene)
}
