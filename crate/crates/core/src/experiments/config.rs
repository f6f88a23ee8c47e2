//! JSON sweep configuration.
//!
//! Numeric fields accept JSON numbers or the strings `"sqrt(s)"`,
//! `"s^-K"` for an integer `K`, and `"s^-n"` (using the top-level `n`).
//! Grids are either arrays of such values or a range object
//! `{"from": a, "to": b, "points": k, "scale": "log" | "linear"}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certificates::{BracketOptions, DelocSearch, LocOptions};
use crate::disorder::DisorderModel;
use crate::error::{Error, Result};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Annealed,
    Variance,
    Mc,
    CertifyDeloc,
    CertifyLoc,
    Bracket,
    Green,
    Lemma22,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Annealed => "annealed",
            Task::Variance => "variance",
            Task::Mc => "mc",
            Task::CertifyDeloc => "certify_deloc",
            Task::CertifyLoc => "certify_loc",
            Task::Bracket => "bracket",
            Task::Green => "green",
            Task::Lemma22 => "lemma22",
        }
    }

    fn uses_beta(&self) -> bool {
        !matches!(self, Task::Annealed | Task::Green)
    }

    fn uses_h(&self) -> bool {
        matches!(self, Task::Annealed | Task::Variance | Task::Mc | Task::CertifyDeloc | Task::CertifyLoc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelBase {
    pub s: u32,
    pub b: f64,
}

impl ModelBase {
    pub fn at(&self, beta: f64, h: f64) -> ModelParams {
        ModelParams { s: self.s, b: self.b, beta, h }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecursionControls {
    /// Levels iterated by the `annealed` and `variance` tasks.
    pub n_max: usize,
    /// Relative tolerance of the accelerated pure free energy.
    pub rel_tol: f64,
}

impl Default for RecursionControls {
    fn default() -> Self {
        RecursionControls { n_max: 200, rel_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McControls {
    pub pool_size: usize,
    pub replicas: usize,
    pub max_level: u32,
}

impl Default for McControls {
    fn default() -> Self {
        McControls {
            pool_size: crate::pool::DEFAULT_POOL_SIZE,
            replicas: crate::pool::DEFAULT_REPLICAS,
            max_level: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lemma22Controls {
    pub c5_grid: Vec<f64>,
    pub cap: usize,
}

impl Default for Lemma22Controls {
    fn default() -> Self {
        Lemma22Controls { c5_grid: vec![0.01, 0.02, 0.05, 0.1, 0.2], cap: crate::annealed::DEFAULT_N1_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertificateControls {
    pub deloc: DelocSearch,
    pub loc: LocOptions,
    pub bracket: BracketOptions,
    pub lemma22: Lemma22Controls,
}

/// A fully resolved sweep description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: ModelBase,
    pub disorder: DisorderModel,
    pub task: Task,
    pub beta_grid: Vec<f64>,
    pub h_grid: Vec<f64>,
    /// System level for `s^-n` keywords and the `green` task.
    pub n: Option<u32>,
    pub recursion: RecursionControls,
    pub mc: McControls,
    pub certificates: CertificateControls,
    pub seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    s: u32,
    b: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    model: RawModel,
    #[serde(default = "gaussian")]
    disorder: DisorderModel,
    task: Task,
    #[serde(default)]
    beta_grid: Option<Value>,
    #[serde(default)]
    h_grid: Option<Value>,
    #[serde(default)]
    n: Option<u32>,
    #[serde(default)]
    recursion: RecursionControls,
    #[serde(default)]
    mc: McControls,
    #[serde(default)]
    certificates: CertificateControls,
    #[serde(default)]
    seed: Option<u64>,
}

fn gaussian() -> DisorderModel {
    DisorderModel::Gaussian
}

/// Resolves one numeric entry given `s` and the optional level `n`.
pub fn resolve_number(v: &Value, s: u32, n: Option<u32>) -> std::result::Result<f64, String> {
    match v {
        Value::Number(x) => x.as_f64().ok_or_else(|| format!("{x} is not representable")),
        Value::String(text) => {
            let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            let sf = s as f64;
            if t == "sqrt(s)" {
                return Ok(sf.sqrt());
            }
            if let Some(exp) = t.strip_prefix("s^-") {
                let k = if exp == "n" {
                    n.ok_or("\"s^-n\" needs the top-level field n")?
                } else {
                    exp.parse::<u32>().map_err(|_| format!("bad exponent in \"{text}\""))?
                };
                return Ok(sf.powi(-(k as i32)));
            }
            t.parse::<f64>().map_err(|_| format!("unrecognized number \"{text}\""))
        }
        other => Err(format!("expected a number or keyword, got {other}")),
    }
}

fn resolve_grid(v: &Value, s: u32, n: Option<u32>) -> std::result::Result<Vec<f64>, String> {
    match v {
        Value::Array(items) => items.iter().map(|x| resolve_number(x, s, n)).collect(),
        Value::Object(map) => {
            let get = |k: &str| map.get(k).ok_or(format!("range needs \"{k}\""));
            let from = resolve_number(get("from")?, s, n)?;
            let to = resolve_number(get("to")?, s, n)?;
            let points = get("points")?.as_u64().ok_or("\"points\" must be a positive integer")? as usize;
            let scale = map.get("scale").and_then(Value::as_str).unwrap_or("linear");
            if let Some(k) = map.keys().find(|k| !["from", "to", "points", "scale"].contains(&k.as_str())) {
                return Err(format!("unknown range field \"{k}\""));
            }
            if points == 0 {
                return Err("\"points\" must be >= 1".into());
            }
            match scale {
                "log" if from > 0.0 && to > 0.0 => Ok(crate::certificates::log_grid(from, to, points)),
                "log" => Err("log ranges need positive endpoints".into()),
                "linear" if points == 1 => Ok(vec![from]),
                "linear" => Ok((0..points)
                    .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
                    .collect()),
                other => Err(format!("unknown scale \"{other}\"")),
            }
        }
        other => Err(format!("expected an array or a range object, got {other}")),
    }
}

impl SweepSpec {
    /// Every problem with the spec, empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let probe = self.model.at(0.0, 0.0);
        if let Err(e) = probe.validate() {
            bad.push(format!("model: {e}"));
        }
        let t = self.task;
        if t.uses_beta() && self.beta_grid.is_empty() {
            bad.push(format!("beta_grid must be nonempty for task {}", t.name()));
        }
        if t.uses_h() && self.h_grid.is_empty() {
            bad.push(format!("h_grid must be nonempty for task {}", t.name()));
        }
        if let Some(b) = self.beta_grid.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
            bad.push(format!("beta_grid entries must be finite and >= 0, got {b}"));
        }
        if let Some(h) = self.h_grid.iter().find(|h| !h.is_finite()) {
            bad.push(format!("h_grid entries must be finite, got {h}"));
        }
        if t == Task::Mc {
            if self.seed.is_none() {
                bad.push("seed is mandatory for the mc task".into());
            }
            if self.mc.pool_size == 0 {
                bad.push("mc.pool_size must be >= 1".into());
            }
            if self.mc.replicas < 2 {
                bad.push("mc.replicas must be >= 2".into());
            }
            if !self.disorder.can_sample() {
                bad.push(format!("disorder {} cannot be sampled", self.disorder.name()));
            }
        }
        if t == Task::Green && self.n.is_none() {
            bad.push("the green task needs the top-level field n".into());
        }
        if t == Task::Lemma22 {
            if self.certificates.lemma22.c5_grid.is_empty() {
                bad.push("certificates.lemma22.c5_grid must be nonempty".into());
            }
            if !probe.is_marginal() {
                bad.push("the lemma22 task needs b = sqrt(s)".into());
            }
            if self.beta_grid.contains(&0.0) {
                bad.push("the lemma22 task needs beta > 0".into());
            }
        }
        if matches!(t, Task::CertifyDeloc | Task::Bracket) {
            if let Err(e) = self.certificates.deloc.validate() {
                bad.push(format!("certificates.deloc: {e}"));
            }
        }
        bad
    }

    pub fn validate(&self) -> Result<()> {
        let bad = self.violations();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(bad))
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)
            .map_err(|e| Error::Validation(vec![format!("line {}, column {}: {e}", e.line(), e.column())]))?;
        let s = raw.model.s;
        let mut bad = Vec::new();
        let b = resolve_number(&raw.model.b, s, raw.n).unwrap_or_else(|e| {
            bad.push(format!("model.b: {e}"));
            f64::NAN
        });
        let mut grid = |name: &str, v: &Option<Value>| match v {
            None => Vec::new(),
            Some(v) => resolve_grid(v, s, raw.n).unwrap_or_else(|e| {
                bad.push(format!("{name}: {e}"));
                Vec::new()
            }),
        };
        let beta_grid = grid("beta_grid", &raw.beta_grid);
        let h_grid = grid("h_grid", &raw.h_grid);
        let spec = SweepSpec {
            model: ModelBase { s, b },
            disorder: raw.disorder,
            task: raw.task,
            beta_grid,
            h_grid,
            n: raw.n,
            recursion: raw.recursion,
            mc: raw.mc,
            certificates: raw.certificates,
            seed: raw.seed,
        };
        if b.is_finite() {
            bad.extend(spec.violations());
        }
        if bad.is_empty() {
            Ok(spec)
        } else {
            Err(Error::Validation(bad))
        }
    }
}

pub fn load_config(path: &Path) -> Result<SweepSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    SweepSpec::from_json(&text)
}
