//! JSON run configuration (`schema_version: 1`).
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "chain": { "template": "field-junction", "n": 50, "alpha": 1.0 },
//!   "baths": { "t": 10.0, "delta_t": 5.0 },
//!   "sweep": {
//!     "axes": [
//!       { "param": "h1", "min": -10.0, "max": 10.0, "steps": 101 },
//!       { "param": "h2", "min": -10.0, "max": 10.0, "steps": 101 }
//!     ]
//!   }
//! }
//! ```
//!
//! Unknown keys are rejected at every level. Parameters driven by a sweep
//! axis may be left out of `chain` and `baths`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::bath::{BathPair, Temperature};
use crate::chain::ChainSpec;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    Custom,
    BoundaryPerturbed,
    FieldJunction,
    CouplingJunction,
    Graded,
}

impl Template {
    pub const ALL: [Template; 5] = [
        Template::Custom,
        Template::BoundaryPerturbed,
        Template::FieldJunction,
        Template::CouplingJunction,
        Template::Graded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Template::Custom => "custom",
            Template::BoundaryPerturbed => "boundary-perturbed",
            Template::FieldJunction => "field-junction",
            Template::CouplingJunction => "coupling-junction",
            Template::Graded => "graded",
        }
    }

    /// Real-valued parameters, all of which can be swept.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Template::Custom => &["gamma"],
            Template::BoundaryPerturbed => &["h", "alpha", "gamma"],
            Template::FieldJunction => &["h1", "h2", "alpha", "gamma"],
            Template::CouplingJunction => &["alpha1", "alpha2", "h", "gamma"],
            Template::Graded => &["h_base", "h_slope", "alpha_base", "alpha_slope", "gamma"],
        }
    }

    fn from_name(name: &str) -> Option<Template> {
        Template::ALL.into_iter().find(|t| t.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathForm {
    /// `t_left`, `t_right` given directly.
    Explicit,
    /// Mean `t` and difference `delta_t = T_L − T_R`.
    MeanDifference,
}

impl BathForm {
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            BathForm::Explicit => &["t_left", "t_right"],
            BathForm::MeanDifference => &["t", "delta_t"],
        }
    }
}

/// One sweep axis; several parameters may be tied to the same values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub params: Vec<String>,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// `min + i·(max − min)/(steps − 1)` for `i = 0..steps`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + i as f64 * span / last })
            .collect()
    }

    pub fn label(&self) -> String {
        self.params.join("+")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub template: Template,
    /// Site count; for `custom` it is the length of `fields`.
    pub sites: usize,
    pub fields: Vec<f64>,
    pub couplings: Vec<f64>,
    pub bath_form: BathForm,
    /// Fixed real parameters of the chain and baths by name.
    pub params: BTreeMap<String, f64>,
    pub axes: Option<[Axis; 2]>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    fn lookup(&self, name: &str, overrides: &[(&str, f64)]) -> Result<f64, ConfigError> {
        overrides
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .or_else(|| self.params.get(name).copied())
            .ok_or_else(|| schema(owner(name), format!("missing parameter `{name}`")))
    }

    /// Chain and baths at one point, with `overrides` replacing fixed values.
    pub fn point(&self, overrides: &[(&str, f64)]) -> Result<(ChainSpec, BathPair), ConfigError> {
        let get = |name: &str| self.lookup(name, overrides);
        let n = self.sites;
        let chain = match self.template {
            Template::Custom => ChainSpec::custom(self.fields.clone(), self.couplings.clone(), get("gamma")?),
            Template::BoundaryPerturbed => ChainSpec::boundary_perturbed(n, get("h")?, get("alpha")?, get("gamma")?),
            Template::FieldJunction => {
                ChainSpec::field_junction(n, get("h1")?, get("h2")?, get("alpha")?, get("gamma")?)
            }
            Template::CouplingJunction => {
                ChainSpec::coupling_junction(n, get("alpha1")?, get("alpha2")?, get("h")?, get("gamma")?)
            }
            Template::Graded => ChainSpec::graded(
                n,
                get("h_base")?,
                get("h_slope")?,
                get("alpha_base")?,
                get("alpha_slope")?,
                get("gamma")?,
            ),
        }
        .map_err(|e| schema("chain", e.to_string()))?;

        let (left, right) = match self.bath_form {
            BathForm::Explicit => (get("t_left")?, get("t_right")?),
            BathForm::MeanDifference => {
                let (t, dt) = (get("t")?, get("delta_t")?);
                (t + 0.5 * dt, t - 0.5 * dt)
            }
        };
        let temperature = |v: f64, which: &str| {
            Temperature::new(v).map_err(|e| schema(format!("baths.{which}"), e.to_string()))
        };
        let baths = BathPair::new(temperature(left, "t_left")?, temperature(right, "t_right")?);
        Ok((chain, baths))
    }
}

fn owner(name: &str) -> String {
    if BathForm::Explicit.parameters().contains(&name) || BathForm::MeanDifference.parameters().contains(&name) {
        format!("baths.{name}")
    } else {
        format!("chain.{name}")
    }
}

pub fn parse_config(text: &[u8]) -> Result<RunConfig, ConfigError> {
    let value: Value = serde_json::from_slice(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let root = object(&value, "config")?;
    check_keys(root, "config", &["schema_version", "chain", "baths", "sweep", "output", "threads"])?;

    match root.get("schema_version") {
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(schema("schema_version", format!("unsupported version {v}, expected {SCHEMA_VERSION}"))),
        None => return Err(schema("schema_version", "required")),
    }

    let chain = object(required(root, "chain", "config")?, "chain")?;
    let template_name = required(chain, "template", "chain")?
        .as_str()
        .ok_or_else(|| schema("chain.template", "expected a string"))?;
    let template = Template::from_name(template_name).ok_or_else(|| {
        let known: Vec<_> = Template::ALL.iter().map(|t| t.name()).collect();
        schema("chain.template", format!("unknown template `{template_name}`; expected one of {}", known.join(", ")))
    })?;

    let mut allowed: Vec<&str> = vec!["template"];
    allowed.extend(template.parameters());
    if template == Template::Custom {
        allowed.extend(["fields", "couplings"]);
    } else {
        allowed.push("n");
    }
    check_keys(chain, "chain", &allowed)?;

    let mut params = BTreeMap::new();
    params.insert("gamma".to_string(), 1.0);
    for &name in template.parameters() {
        if let Some(v) = chain.get(name) {
            params.insert(name.to_string(), finite_number(v, &format!("chain.{name}"))?);
        }
    }

    let (sites, fields, couplings) = if template == Template::Custom {
        let fields = number_array(required(chain, "fields", "chain")?, "chain.fields")?;
        let couplings = number_array(required(chain, "couplings", "chain")?, "chain.couplings")?;
        (fields.len(), fields, couplings)
    } else {
        let n = required(chain, "n", "chain")?
            .as_u64()
            .ok_or_else(|| schema("chain.n", "expected a non-negative integer"))?;
        (n as usize, Vec::new(), Vec::new())
    };

    let baths = object(required(root, "baths", "config")?, "baths")?;
    let explicit = baths.contains_key("t_left") || baths.contains_key("t_right");
    let bath_form = if explicit { BathForm::Explicit } else { BathForm::MeanDifference };
    check_keys(baths, "baths", bath_form.parameters())
        .map_err(|_| schema("baths", "use either {t_left, t_right} or {t, delta_t}"))?;
    for &name in bath_form.parameters() {
        if let Some(v) = baths.get(name) {
            let field = format!("baths.{name}");
            let value = match bath_form {
                BathForm::Explicit => temperature_value(v, &field)?,
                BathForm::MeanDifference => finite_number(v, &field)?,
            };
            params.insert(name.to_string(), value);
        }
    }

    let axes = match root.get("sweep") {
        None => None,
        Some(sweep) => Some(parse_sweep(sweep, template, bath_form)?),
    };

    let output = match root.get("output") {
        None => None,
        Some(v) => Some(PathBuf::from(v.as_str().ok_or_else(|| schema("output", "expected a string"))?)),
    };
    let threads = match root.get("threads") {
        None => None,
        Some(v) => match v.as_u64() {
            Some(n) if n >= 1 => Some(n as usize),
            _ => return Err(schema("threads", "expected a positive integer")),
        },
    };

    let config = RunConfig {
        template,
        sites,
        fields,
        couplings,
        bath_form,
        params,
        axes,
        output,
        threads,
    };
    check_complete(&config)?;
    Ok(config)
}

/// Every parameter must be either fixed or swept, and the chain must be
/// buildable at the grid's first point.
fn check_complete(config: &RunConfig) -> Result<(), ConfigError> {
    let swept: Vec<&str> = config
        .axes
        .iter()
        .flatten()
        .flat_map(|a| a.params.iter().map(String::as_str))
        .collect();
    let needed = config.template.parameters().iter().chain(config.bath_form.parameters());
    for &name in needed {
        if !config.params.contains_key(name) && !swept.contains(&name) {
            return Err(schema(owner(name), format!("missing parameter `{name}`")));
        }
    }
    let first: Vec<(&str, f64)> = config
        .axes
        .iter()
        .flatten()
        .flat_map(|a| a.params.iter().map(move |p| (p.as_str(), a.min)))
        .collect();
    config.point(&first).map(|_| ())
}

fn parse_sweep(value: &Value, template: Template, bath_form: BathForm) -> Result<[Axis; 2], ConfigError> {
    let sweep = object(value, "sweep")?;
    check_keys(sweep, "sweep", &["axes"])?;
    let axes = required(sweep, "axes", "sweep")?
        .as_array()
        .ok_or_else(|| schema("sweep.axes", "expected an array"))?;
    if axes.len() != 2 {
        return Err(schema("sweep.axes", format!("expected exactly 2 axes, got {}", axes.len())));
    }
    let mut parsed = Vec::with_capacity(2);
    let mut seen: Vec<String> = Vec::new();
    for (i, axis) in axes.iter().enumerate() {
        let path = format!("sweep.axes[{i}]");
        let obj = object(axis, &path)?;
        check_keys(obj, &path, &["param", "min", "max", "steps"])?;
        let params: Vec<String> = match required(obj, "param", &path)? {
            Value::String(s) => vec![s.clone()],
            Value::Array(items) if !items.is_empty() => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| schema(format!("{path}.param"), "expected parameter names"))
                })
                .collect::<Result<_, _>>()?,
            _ => return Err(schema(format!("{path}.param"), "expected a name or a non-empty list of names")),
        };
        for p in &params {
            let valid = template.parameters().contains(&p.as_str()) || bath_form.parameters().contains(&p.as_str());
            if !valid {
                return Err(schema(
                    format!("{path}.param"),
                    format!("unknown parameter `{p}` for template {}", template.name()),
                ));
            }
            if seen.contains(p) {
                return Err(schema(format!("{path}.param"), format!("`{p}` is swept twice")));
            }
            seen.push(p.clone());
        }
        let min = finite_number(required(obj, "min", &path)?, &format!("{path}.min"))?;
        let max = finite_number(required(obj, "max", &path)?, &format!("{path}.max"))?;
        if min > max {
            return Err(schema(format!("{path}.max"), format!("max {max} is below min {min}")));
        }
        let steps = required(obj, "steps", &path)?
            .as_u64()
            .ok_or_else(|| schema(format!("{path}.steps"), "expected a positive integer"))?;
        if steps == 0 {
            return Err(schema(format!("{path}.steps"), "must be at least 1"));
        }
        parsed.push(Axis {
            params,
            min,
            max,
            steps: steps as usize,
        });
    }
    let second = parsed.pop().expect("two axes");
    let first = parsed.pop().expect("two axes");
    Ok([first, second])
}

fn object<'a>(value: &'a Value, field: &str) -> Result<&'a Map<String, Value>, ConfigError> {
    value.as_object().ok_or_else(|| schema(field, "expected an object"))
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, parent: &str) -> Result<&'a Value, ConfigError> {
    let field = if parent == "config" { key.to_string() } else { format!("{parent}.{key}") };
    obj.get(key).ok_or_else(|| schema(field, "required"))
}

fn check_keys(obj: &Map<String, Value>, parent: &str, allowed: &[&str]) -> Result<(), ConfigError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            let field = if parent == "config" { key.clone() } else { format!("{parent}.{key}") };
            return Err(schema(field, format!("unknown key; allowed: {}", allowed.join(", "))));
        }
    }
    Ok(())
}

fn finite_number(value: &Value, field: &str) -> Result<f64, ConfigError> {
    match value.as_f64() {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(schema(field, "expected a finite number")),
    }
}

/// A temperature: a number, `"zero"` or `"inf"`.
fn temperature_value(value: &Value, field: &str) -> Result<f64, ConfigError> {
    match value {
        Value::String(s) if s == "zero" => Ok(0.0),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::Number(_) => finite_number(value, field),
        _ => Err(schema(field, "expected a number, \"zero\" or \"inf\"")),
    }
}

fn number_array(value: &Value, field: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .as_array()
        .ok_or_else(|| schema(field, "expected an array of numbers"))?
        .iter()
        .enumerate()
        .map(|(i, v)| finite_number(v, &format!("{field}[{i}]")))
        .collect()
}
