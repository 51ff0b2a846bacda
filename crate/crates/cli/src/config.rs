//! The run-configuration document: one JSON file carrying the stable
//! parameters, the domain tree (the geometry schema verbatim), the
//! command-specific points/targets/budgets, and optional run plumbing
//! (seed, walks, workers, output path).
//!
//! Parsing reports the path of the offending node on error, and every
//! command validates its preconditions against the parsed document before
//! any sampling starts.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use stablepot::analysis::{LadderBudget, ShellBudget};
use stablepot::geometry::DomainSpec;
use stablepot::kernels::levy_density;
use stablepot::{Point, StableParams, WalkConfig};

use crate::CliError;

/// Payoff menu for `solve`: functions of the exit position.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PayoffSpec {
    /// Indicator of a region given in the domain schema.
    IndicatorOfSet { region: DomainSpec },
    /// Jump-kernel weight `ν(·, y0)`.
    LevyWeight { y0: Vec<f64> },
    /// A single coordinate of the exit position.
    Coordinate { index: usize },
    Constant { value: f64 },
}

impl PayoffSpec {
    /// Validates against the ambient dimension and returns the evaluator.
    pub fn build(
        &self,
        params: &StableParams,
    ) -> Result<Box<dyn Fn(&[f64]) -> f64 + Sync + '_>, CliError> {
        let d = params.d();
        match self {
            PayoffSpec::IndicatorOfSet { region } => {
                region
                    .validate(d)
                    .map_err(|e| CliError::config(format!("payoff.region: {e}")))?;
                Ok(Box::new(move |z: &[f64]| {
                    f64::from(region.contains(&Point::from(z)))
                }))
            }
            PayoffSpec::LevyWeight { y0 } => {
                if y0.len() != d {
                    return Err(CliError::config(format!(
                        "payoff.y0: expected {d} coordinates, got {}",
                        y0.len()
                    )));
                }
                let y0 = Point::new(y0.clone());
                let params = *params;
                Ok(Box::new(move |z: &[f64]| {
                    levy_density(&params, &Point::from(z), &y0)
                }))
            }
            PayoffSpec::Coordinate { index } => {
                if *index >= d {
                    return Err(CliError::config(format!(
                        "payoff.index: {index} out of range for dimension {d}"
                    )));
                }
                let index = *index;
                Ok(Box::new(move |z: &[f64]| z[index]))
            }
            PayoffSpec::Constant { value } => {
                let value = *value;
                Ok(Box::new(move |_: &[f64]| value))
            }
        }
    }
}

/// Classification target: a boundary point or the point at infinity.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Point(Vec<f64>),
    Named(String),
}

/// Ball specification for the inversion audits.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallDoc {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Walk tuning overrides; missing fields keep the library defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkDoc {
    pub shrink: Option<f64>,
    pub max_steps: Option<u64>,
    pub min_radius: Option<f64>,
}

impl WalkDoc {
    pub fn build(&self) -> WalkConfig {
        let mut cfg = WalkConfig::default();
        if let Some(s) = self.shrink {
            cfg.shrink = s;
        }
        if let Some(m) = self.max_steps {
            cfg.max_steps = m;
        }
        if let Some(r) = self.min_radius {
            cfg.min_radius = r;
        }
        cfg
    }
}

/// Shell-probe budget overrides for boundary-point classification.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellBudgetDoc {
    pub shells: Option<usize>,
    pub points_per_shell: Option<usize>,
    pub walks_per_point: Option<u64>,
}

impl ShellBudgetDoc {
    pub fn build(&self, walks_flag: Option<u64>) -> ShellBudget {
        let mut b = ShellBudget::default();
        if let Some(s) = self.shells {
            b.shells = s;
        }
        if let Some(p) = self.points_per_shell {
            b.points_per_shell = p;
        }
        if let Some(w) = self.walks_per_point.or(walks_flag) {
            b.walks_per_point = w;
        }
        b
    }
}

/// Budget-ladder overrides for the accessibility of infinity.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderBudgetDoc {
    pub levels: Option<usize>,
    pub base_walks: Option<u64>,
    pub base_max_steps: Option<u64>,
    pub walk_growth: Option<u64>,
    pub step_growth: Option<u64>,
}

impl LadderBudgetDoc {
    pub fn build(&self, walks_flag: Option<u64>) -> LadderBudget {
        let mut b = LadderBudget::default();
        if let Some(l) = self.levels {
            b.levels = l;
        }
        if let Some(w) = self.base_walks.or(walks_flag) {
            b.base_walks = w;
        }
        if let Some(m) = self.base_max_steps {
            b.base_max_steps = m;
        }
        if let Some(g) = self.walk_growth {
            b.walk_growth = g;
        }
        if let Some(g) = self.step_growth {
            b.step_growth = g;
        }
        b
    }
}

/// The parsed configuration document. Fields beyond `dimension`, `alpha`,
/// and `domain` are command-specific; each command checks for the ones it
/// needs and rejects the run before any sampling if they are missing or
/// ill-formed.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub dimension: usize,
    pub alpha: f64,
    pub domain: DomainSpec,

    // Estimator commands.
    pub points: Option<Vec<Vec<f64>>>,
    pub payoff: Option<PayoffSpec>,
    pub target: Option<TargetSpec>,
    pub pole: Option<Vec<f64>>,

    // Martin kernel.
    pub x: Option<Vec<f64>>,
    pub x0: Option<Vec<f64>>,
    pub boundary_point: Option<Vec<f64>>,
    pub radii: Option<Vec<f64>>,

    // Classification.
    pub probe: Option<Vec<f64>>,
    pub shell_budget: Option<ShellBudgetDoc>,
    pub ladder_budget: Option<LadderBudgetDoc>,

    // Audits.
    pub radius: Option<f64>,
    pub configs: Option<usize>,
    pub cut: Option<f64>,
    pub sample_points: Option<usize>,
    pub center: Option<Vec<f64>>,
    pub inner_radius: Option<f64>,
    pub outer_radius: Option<f64>,
    pub charge: Option<Vec<f64>>,
    pub pairs: Option<usize>,
    pub ball: Option<BallDoc>,
    pub tolerance: Option<f64>,
    pub split_radius: Option<f64>,

    // Run plumbing (command-line flags take precedence).
    pub walks: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<String>,
    pub walk: Option<WalkDoc>,
}

impl ConfigDoc {
    /// Loads and structurally validates a configuration document. Parse
    /// errors carry the JSON path of the offending node.
    pub fn load(path: &Path) -> Result<(ConfigDoc, StableParams), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let mut de = serde_json::Deserializer::from_str(&text);
        let doc: ConfigDoc = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            CliError::config(format!("config node `{}`: {}", e.path(), e.inner()))
        })?;
        let params = StableParams::new(doc.dimension, doc.alpha)
            .map_err(|e| CliError::config(format!("config node `alpha`: {e}")))?;
        doc.domain
            .validate(doc.dimension)
            .map_err(|e| CliError::config(format!("config node `domain`: {e}")))?;
        Ok((doc, params))
    }

    /// A required point-valued field, dimension-checked.
    pub fn point(&self, field: &str, d: usize) -> Result<Point, CliError> {
        let coords = match field {
            "pole" => &self.pole,
            "x" => &self.x,
            "x0" => &self.x0,
            "boundary_point" => &self.boundary_point,
            "probe" => &self.probe,
            "center" => &self.center,
            "charge" => &self.charge,
            _ => unreachable!("unknown point field {field}"),
        }
        .as_ref()
        .ok_or_else(|| CliError::config(format!("config field `{field}` is required")))?;
        if coords.len() != d {
            return Err(CliError::config(format!(
                "config node `{field}`: expected {d} coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Point::new(coords.clone()))
    }

    /// The required start-point list, dimension-checked.
    pub fn start_points(&self, d: usize) -> Result<Vec<Point>, CliError> {
        let raw = self
            .points
            .as_ref()
            .ok_or_else(|| CliError::config("config field `points` is required"))?;
        if raw.is_empty() {
            return Err(CliError::config("config field `points` must be non-empty"));
        }
        raw.iter()
            .enumerate()
            .map(|(i, coords)| {
                if coords.len() != d {
                    return Err(CliError::config(format!(
                        "config node `points[{i}]`: expected {d} coordinates, got {}",
                        coords.len()
                    )));
                }
                Ok(Point::new(coords.clone()))
            })
            .collect()
    }

    pub fn require<T: Copy>(&self, field: &str, value: Option<T>) -> Result<T, CliError> {
        value.ok_or_else(|| CliError::config(format!("config field `{field}` is required")))
    }
}
