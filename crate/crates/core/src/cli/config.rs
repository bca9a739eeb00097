use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::riccati::ModelParams;
use crate::scattering::ScatteringNumerics;
use crate::specialfns::Tolerance;

/// The whole run description, one JSON document. Each command reads the
/// sections it needs and ignores the rest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<SeedConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineConfig>,
    /// Radial or line grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    /// Angular momenta for multi-series outputs; defaults to `model.ell`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ells: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed: Option<EmbedConfig>,
    #[serde(default)]
    pub numerics: ScatteringNumerics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
    /// Bound on the re-substitution residual that p2g reports against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_tol: Option<f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    /// `κ/r + κ²/(N−1)²` with κ from the model.
    CoulombPlusConst,
    /// `κ/r` with κ from the model.
    PureCoulomb,
    Zero,
    Tabulated { r: Vec<f64>, u: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeedConfig {
    /// The known solution at the first grid point.
    ClosedForm,
    /// `(N−1)/(2r)`.
    Flat,
    Value { w_start: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    /// `R = r`.
    Flat,
    /// Coulomb geometry through the model anchor `(r₀, R₀)`.
    Coulomb,
    Ellis { throat: f64 },
    Tabulated { r: Vec<f64>, radius: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LineConfig {
    Ellis { throat: f64 },
    Tabulated { w: Vec<f64>, radius: Vec<f64> },
    SquareBarrier { height: f64, halfwidth: f64 },
    Zero,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridConfig {
    pub fn points(&self, what: &str) -> Result<Vec<f64>, CliError> {
        let (a, b, n) = (self.start, self.end, self.count);
        if n == 0 {
            return Err(CliError::Config(format!("{what}: grid is empty")));
        }
        if !a.is_finite() || !b.is_finite() || (n > 1 && !(b > a)) {
            return Err(CliError::Config(format!("{what}: need finite start < end, got [{a}, {b}]")));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let last = (n - 1) as f64;
        let pts = match self.spacing {
            Spacing::Linear => (0..n).map(|i| a + (b - a) * i as f64 / last).collect(),
            Spacing::Log => {
                if !(a > 0.0) {
                    return Err(CliError::Config(format!("{what}: log spacing needs start > 0")));
                }
                let span = (b / a).ln();
                (0..n).map(|i| a * (span * i as f64 / last).exp()).collect::<Vec<_>>()
            }
        };
        let mut pts: Vec<f64> = pts;
        pts[n - 1] = b;
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedConfig {
    pub k: f64,
    pub kappa: f64,
    #[serde(default = "default_dims")]
    pub dims: u32,
    pub rho_start: f64,
    pub rho_end: f64,
    pub count: usize,
}

fn default_dims() -> u32 {
    3
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    /// CSV data plus an SVG plot.
    Svg,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    /// Read a config file and apply `key.path=value` overrides.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut doc: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        serde_json::from_value(doc).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn model(&self) -> Result<ModelParams, CliError> {
        let m = self.model.ok_or_else(|| CliError::Config("missing `model` section".into()))?;
        m.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(m)
    }

    pub fn ells(&self) -> Result<Vec<u32>, CliError> {
        match &self.ells {
            Some(v) if v.is_empty() => Err(CliError::Config("`ells` is empty".into())),
            Some(v) => Ok(v.clone()),
            None => Ok(vec![self.model.map_or(0, |m| m.ell)]),
        }
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerance.unwrap_or_default()
    }

    /// The config as recorded in output metadata; the output directory is
    /// left out so that a run is reproducible wherever it writes.
    pub fn resolved(&self) -> Value {
        let mut c = self.clone();
        c.output.dir = None;
        serde_json::to_value(&c).expect("config serializes")
    }
}

/// `a.b.c=value`; the value is parsed as JSON, falling back to a string.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{assignment}`")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    if value.is_object() || value.is_array() {
        return Err(CliError::Config(format!("--set only overrides scalars, got `{assignment}`")));
    }
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("bad key `{key}`")));
    }
    for part in &parts[..parts.len() - 1] {
        if node.is_null() {
            *node = Value::Object(Default::default());
        }
        node = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("`{key}`: `{part}` is not inside an object")))?
            .entry(part.to_string())
            .or_insert(Value::Null);
    }
    if node.is_null() {
        *node = Value::Object(Default::default());
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| CliError::Config(format!("`{key}` does not name an object field")))?;
    obj.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overrides_set_nested_scalars() {
        let mut doc = json!({"model": {"dims": 3}});
        apply_override(&mut doc, "model.dims=4").unwrap();
        apply_override(&mut doc, "line.kind=ellis").unwrap();
        apply_override(&mut doc, "line.throat=1.5").unwrap();
        assert_eq!(doc, json!({"model": {"dims": 4}, "line": {"kind": "ellis", "throat": 1.5}}));
    }

    #[test]
    fn overrides_reject_bad_input() {
        let mut doc = json!({"model": 3});
        assert!(apply_override(&mut doc, "model").is_err());
        assert!(apply_override(&mut doc, "model.dims=2").is_err());
        assert!(apply_override(&mut doc, "a..b=1").is_err());
        assert!(apply_override(&mut doc, "x=[1,2]").is_err());
    }

    #[test]
    fn grids() {
        let g = GridConfig {
            start: 1.0,
            end: 100.0,
            count: 3,
            spacing: Spacing::Log,
        };
        let p = g.points("g").unwrap();
        assert!((p[1] - 10.0).abs() < 1e-12);
        assert_eq!(p[2], 100.0);
        let empty = GridConfig { count: 0, ..g };
        assert!(empty.points("g").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let v = json!({"modle": {}});
        assert!(serde_json::from_value::<RunConfig>(v).is_err());
    }
}
