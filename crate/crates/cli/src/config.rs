use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use klr_core::cartan::{CartanDatum, DominantWeight, QCoeff, RootElement};
use klr_core::klr::MAX_HEIGHT;
use klr_core::Field;

use crate::JobError;

pub const CONFIG_SCHEMA: &str = include_str!("../../../docs/config.schema.json");
pub const REPORT_SCHEMA: &str = include_str!("../../../docs/report.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    VerifyRelations,
    BiweightBasis,
    FullBasis,
    CocenterBasis,
    CenterCheck,
    AnnihilatorCheck,
    TraceCheck,
    IotaCheck,
    Sweep,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::VerifyRelations,
        Task::BiweightBasis,
        Task::FullBasis,
        Task::CocenterBasis,
        Task::CenterCheck,
        Task::AnnihilatorCheck,
        Task::TraceCheck,
        Task::IotaCheck,
        Task::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::VerifyRelations => "verify-relations",
            Task::BiweightBasis => "biweight-basis",
            Task::FullBasis => "full-basis",
            Task::CocenterBasis => "cocenter-basis",
            Task::CenterCheck => "center-check",
            Task::AnnihilatorCheck => "annihilator-check",
            Task::TraceCheck => "trace-check",
            Task::IotaCheck => "iota-check",
            Task::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown task {s:?}"))
    }
}

/// Integer or `"p/q"` literal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarLit {
    Int(i64),
    Text(String),
}

impl ScalarLit {
    pub fn to_field<F: Field>(&self) -> Result<F, JobError> {
        match self {
            ScalarLit::Int(v) => Ok(F::from_i64(*v)),
            ScalarLit::Text(s) => F::parse(s).ok_or_else(|| JobError::Parse(format!("bad scalar {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CartanSpec {
    Preset(PresetSpec),
    Explicit(ExplicitSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub preset: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    #[serde(default)]
    pub q_coeffs: Vec<(String, String, u32, u32, ScalarLit)>,
    #[serde(default)]
    pub a_coeffs: BTreeMap<String, Vec<ScalarLit>>,
}

impl CartanSpec {
    pub fn name(&self) -> String {
        match self {
            CartanSpec::Preset(p) => p.preset.to_ascii_uppercase(),
            CartanSpec::Explicit(_) => "custom".into(),
        }
    }

    pub fn build<F: Field>(&self) -> Result<CartanDatum<F>, JobError> {
        match self {
            CartanSpec::Preset(p) => CartanDatum::preset(&p.preset).ok_or_else(|| JobError::Parse(format!("unknown preset {:?}", p.preset))),
            CartanSpec::Explicit(e) => {
                let label = |s: &str| {
                    e.labels.iter().position(|l| l == s).ok_or_else(|| JobError::Parse(format!("unknown label {s:?} in cartan block")))
                };
                let mut q = Vec::new();
                for (i, j, p, qq, v) in &e.q_coeffs {
                    q.push(QCoeff { i: label(i)?, j: label(j)?, p: *p, q: *qq, value: v.to_field()? });
                }
                let mut d = CartanDatum::new(e.labels.clone(), e.matrix.clone(), e.symmetrizers.clone(), &q)
                    .map_err(|err| JobError::Parse(format!("invalid cartan block: {err}")))?;
                for (l, coeffs) in &e.a_coeffs {
                    let vals = coeffs.iter().map(ScalarLit::to_field).collect::<Result<Vec<F>, _>>()?;
                    d = d.with_a_coeffs(label(l)?, vals).map_err(|err| JobError::Parse(err.to_string()))?;
                }
                Ok(d)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiweightSpec {
    pub target: Vec<String>,
    pub source: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub lambdas: Option<Vec<BTreeMap<String, u32>>>,
    pub lambda_max: Option<u32>,
    pub betas: Option<Vec<BTreeMap<String, u32>>>,
    pub beta_max_height: Option<u32>,
    pub multiplicity_free: Option<bool>,
    pub checks: Option<Vec<Task>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    #[default]
    Rational,
    Gf32003,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub field: FieldChoice,
    pub max_height: Option<usize>,
    pub max_dimension: Option<usize>,
    pub samples: Option<usize>,
    pub output: Option<String>,
}

impl Options {
    pub const DEFAULT_MAX_HEIGHT: usize = 4;
    pub const DEFAULT_MAX_DIMENSION: usize = 4000;
    pub const DEFAULT_SAMPLES: usize = 200;

    pub fn max_height(&self) -> usize {
        self.max_height.unwrap_or(Self::DEFAULT_MAX_HEIGHT).min(MAX_HEIGHT)
    }

    pub fn max_dimension(&self) -> usize {
        self.max_dimension.unwrap_or(Self::DEFAULT_MAX_DIMENSION)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(Self::DEFAULT_SAMPLES)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub cartan: CartanSpec,
    pub lambda: Option<BTreeMap<String, u32>>,
    pub beta: Option<BTreeMap<String, u32>>,
    pub gamma: Option<Vec<String>>,
    pub task: Task,
    pub biweight: Option<BiweightSpec>,
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub options: Options,
}

/// Validate `text` against the shipped schema, then deserialize it.
pub fn parse_config(text: &str) -> Result<JobConfig, JobError> {
    let value: Value = serde_json::from_str(text).map_err(|e| JobError::Parse(format!("config is not valid JSON: {e}")))?;
    let schema: Value = serde_json::from_str(CONFIG_SCHEMA).expect("bundled schema is valid JSON");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("bundled schema compiles");
    if let Err(errors) = compiled.validate(&value) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        return Err(JobError::Parse(format!("config does not match schema: {}", msgs.join("; "))));
    }
    serde_json::from_value(value).map_err(|e| JobError::Parse(format!("config rejected: {e}")))
}

/// Check a produced report against the shipped report schema.
pub fn validate_report(report: &Value) -> Result<(), String> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).expect("bundled schema is valid JSON");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("bundled schema compiles");
    compiled.validate(report).map_err(|errs| errs.map(|e| e.to_string()).collect::<Vec<_>>().join("; "))
}

/// A single `(beta, Lambda)` instance resolved against the datum labels.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub beta: RootElement,
    pub lambda: DominantWeight,
    pub gamma: Option<Vec<usize>>,
}

pub fn label_vector(labels: &[String], map: &BTreeMap<String, u32>, what: &str) -> Result<Vec<u32>, JobError> {
    let mut out = vec![0; labels.len()];
    for (k, &v) in map {
        let i = labels.iter().position(|l| l == k).ok_or_else(|| JobError::Parse(format!("unknown label {k:?} in {what}")))?;
        out[i] = v;
    }
    Ok(out)
}

pub fn label_sequence(labels: &[String], seq: &[String], what: &str) -> Result<Vec<usize>, JobError> {
    seq.iter()
        .map(|k| labels.iter().position(|l| l == k).ok_or_else(|| JobError::Parse(format!("unknown label {k:?} in {what}"))))
        .collect()
}

impl JobConfig {
    /// The single instance named by the top-level `beta`/`lambda`.
    pub fn instance(&self, labels: &[String]) -> Result<InstanceSpec, JobError> {
        let beta = self.beta.as_ref().ok_or_else(|| JobError::Parse(format!("task {} needs \"beta\"", self.task)))?;
        let beta = RootElement::new(label_vector(labels, beta, "beta")?);
        let lambda = match &self.lambda {
            Some(l) => DominantWeight::new(label_vector(labels, l, "lambda")?),
            None => DominantWeight::zero(labels.len()),
        };
        let gamma = self.gamma.as_ref().map(|g| label_sequence(labels, g, "gamma")).transpose()?;
        if beta.height() == 0 {
            return Err(JobError::Parse("beta must be nonzero".into()));
        }
        Ok(InstanceSpec { beta, lambda, gamma })
    }

    /// Instances of a sweep in a stable order: betas outer, lambdas inner.
    pub fn sweep_instances(&self, labels: &[String]) -> Result<Vec<InstanceSpec>, JobError> {
        let sw = self.sweep.clone().unwrap_or_default();
        let r = labels.len();
        let lambdas: Vec<Vec<u32>> = match (&sw.lambdas, sw.lambda_max) {
            (Some(list), _) => list.iter().map(|m| label_vector(labels, m, "sweep.lambdas")).collect::<Result<_, _>>()?,
            (None, Some(c)) => grid(r, c),
            (None, None) => match &self.lambda {
                Some(l) => vec![label_vector(labels, l, "lambda")?],
                None => Vec::new(),
            },
        };
        let mf = sw.multiplicity_free.unwrap_or(true);
        let betas: Vec<Vec<u32>> = match (&sw.betas, sw.beta_max_height) {
            (Some(list), _) => list.iter().map(|m| label_vector(labels, m, "sweep.betas")).collect::<Result<_, _>>()?,
            (None, Some(h)) => roots(r, h).into_iter().filter(|b| !mf || b.iter().all(|&m| m <= 1)).collect(),
            (None, None) => match &self.beta {
                Some(b) => vec![label_vector(labels, b, "beta")?],
                None => Vec::new(),
            },
        };
        let mut out = Vec::new();
        for b in &betas {
            if b.iter().all(|&m| m == 0) {
                return Err(JobError::Parse("sweep betas must be nonzero".into()));
            }
            for l in &lambdas {
                out.push(InstanceSpec { beta: RootElement::new(b.clone()), lambda: DominantWeight::new(l.clone()), gamma: None });
            }
        }
        Ok(out)
    }

    pub fn sweep_checks(&self) -> Vec<Task> {
        self.sweep
            .as_ref()
            .and_then(|s| s.checks.clone())
            .unwrap_or_else(|| vec![Task::CenterCheck, Task::AnnihilatorCheck, Task::IotaCheck])
    }
}

fn grid(r: usize, c: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out.into_iter().flat_map(|w: Vec<u32>| (0..=c).map(move |x| [w.clone(), vec![x]].concat())).collect();
    }
    out
}

fn roots(r: usize, h: u32) -> Vec<Vec<u32>> {
    grid(r, h).into_iter().filter(|b| (1..=h).contains(&b.iter().sum::<u32>())).collect()
}
