//! Run configuration: TOML (or JSON, e.g. a generate sidecar) files whose keys
//! mirror the command-line flags, with a single `[model]` section.
//!
//! ```toml
//! voters = 100
//! candidates = 5
//! seed = 7
//! replicates = 1000
//! rules = ["range", "mj", "deepest:1"]
//!
//! [model]
//! name = "copula"
//! rho = 0.5
//! ```

use std::path::{Path, PathBuf};

use evalvote_core::analysis::ExperimentConfig;
use evalvote_core::generators::{
    BetaSource, CorrelationSource, DistanceMapping, GeneratorConfig, MeanSource, DEFAULT_SIGMA,
};
use evalvote_core::rules::Rule;
use evalvote_core::CorrelationMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dataio::{read_matrix_csv, DataError};
use crate::error::CliError;

pub const MODEL_NAMES: [&str; 6] = ["uniform", "dirichlet", "copula", "normal", "beta", "spatial"];

/// The `[model]` section. Every field is optional so that files and flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Full correlation matrix, row by row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_corr: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_params: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mapping: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_beta: Option<f64>,
}

/// Top-level run settings shared by `generate` and `experiment`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub model: ModelSpec,
    /// Written into generate sidecars; ignored when read back.
    #[serde(default, skip_serializing)]
    pub resolved: Option<Value>,
}

fn overlay<T: Clone>(base: &mut Option<T>, flag: &Option<T>) {
    if flag.is_some() {
        base.clone_from(flag);
    }
}

impl ModelSpec {
    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(&mut self, flags: &ModelSpec) {
        overlay(&mut self.name, &flags.name);
        overlay(&mut self.rho, &flags.rho);
        overlay(&mut self.corr, &flags.corr);
        overlay(&mut self.corr_file, &flags.corr_file);
        overlay(&mut self.random_corr, &flags.random_corr);
        overlay(&mut self.sigma, &flags.sigma);
        overlay(&mut self.means, &flags.means);
        overlay(&mut self.alpha, &flags.alpha);
        overlay(&mut self.beta, &flags.beta);
        overlay(&mut self.sample_params, &flags.sample_params);
        overlay(&mut self.dim, &flags.dim);
        overlay(&mut self.mapping, &flags.mapping);
        overlay(&mut self.lambda, &flags.lambda);
        overlay(&mut self.map_beta, &flags.map_beta);
    }

    fn set_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |set: bool, key| {
            if set {
                keys.push(key)
            }
        };
        mark(self.rho.is_some(), "rho");
        mark(self.corr.is_some(), "corr");
        mark(self.corr_file.is_some(), "corr-file");
        mark(self.random_corr == Some(true), "random-corr");
        mark(self.sigma.is_some(), "sigma");
        mark(self.means.is_some(), "means");
        mark(self.alpha.is_some(), "alpha");
        mark(self.beta.is_some(), "beta");
        mark(self.sample_params == Some(true), "sample-params");
        mark(self.dim.is_some(), "dim");
        mark(self.mapping.is_some(), "mapping");
        mark(self.lambda.is_some(), "lambda");
        mark(self.map_beta.is_some(), "map-beta");
        keys
    }

    /// Turns the section into a generator for `d` candidates, rejecting keys that
    /// do not belong to the model and mutually exclusive combinations.
    pub fn to_generator(&self, d: usize) -> Result<GeneratorConfig, CliError> {
        let name = self.name.as_deref().ok_or_else(|| CliError::usage("no model given (--model)"))?;
        let allowed: &[&str] = match name {
            "uniform" | "dirichlet" => &[],
            "copula" => &["rho", "corr", "corr-file", "random-corr"],
            "normal" => &["sigma", "means", "sample-params"],
            "beta" => &["alpha", "beta", "sample-params"],
            "spatial" => &["dim", "mapping", "lambda", "map-beta"],
            other => {
                return Err(CliError::usage(format!(
                    "unknown model `{other}` (expected one of {})",
                    MODEL_NAMES.join(", ")
                )))
            }
        };
        let keys = self.set_keys();
        if let Some(bad) = keys.iter().find(|k| !allowed.contains(k)) {
            return Err(CliError::usage(format!("--{bad} does not apply to the {name} model")));
        }
        let exclusive = |group: &[&str]| -> Result<(), CliError> {
            let present: Vec<String> = group.iter().filter(|k| keys.contains(k)).map(|k| format!("--{k}")).collect();
            if present.len() > 1 {
                return Err(CliError::usage(format!("conflicting options: {}", present.join(" and "))));
            }
            Ok(())
        };
        let config = match name {
            "uniform" => GeneratorConfig::Uniform,
            "dirichlet" => GeneratorConfig::Dirichlet,
            "copula" => {
                exclusive(&["rho", "corr", "corr-file", "random-corr"])?;
                let correlation = if let Some(rho) = self.rho {
                    CorrelationSource::Constant(rho)
                } else if let Some(rows) = &self.corr {
                    CorrelationSource::Matrix(matrix_from_rows(rows)?)
                } else if let Some(path) = &self.corr_file {
                    let (dim, values) = read_matrix_csv(path)?;
                    CorrelationSource::Matrix(
                        CorrelationMatrix::new(dim, values)
                            .map_err(|e| DataError::Shape { path: path.clone(), message: e.to_string() })?,
                    )
                } else {
                    CorrelationSource::Random
                };
                GeneratorConfig::Copula { correlation }
            }
            "normal" => {
                exclusive(&["means", "sample-params"])?;
                let means = match &self.means {
                    Some(m) => MeanSource::Fixed(broadcast(m, d, "means")?),
                    None => MeanSource::SampleUniform,
                };
                GeneratorConfig::Normal { means, sigma: self.sigma.unwrap_or(DEFAULT_SIGMA) }
            }
            "beta" => {
                exclusive(&["alpha", "sample-params"])?;
                exclusive(&["beta", "sample-params"])?;
                let params = match (&self.alpha, &self.beta) {
                    (Some(a), Some(b)) => {
                        let a = broadcast(a, d, "alpha")?;
                        let b = broadcast(b, d, "beta")?;
                        BetaSource::Fixed(a.into_iter().zip(b).collect())
                    }
                    (None, None) => BetaSource::SampleQuadrant,
                    _ => return Err(CliError::usage("--alpha and --beta must be given together")),
                };
                GeneratorConfig::Beta { params }
            }
            _ => {
                let mapping = match self.mapping.as_deref().unwrap_or("sigmoid") {
                    "linear" => {
                        exclusive(&["mapping", "lambda"])?;
                        exclusive(&["mapping", "map-beta"])?;
                        DistanceMapping::Linear
                    }
                    "sigmoid" => DistanceMapping::Sigmoid {
                        lambda: self.lambda.unwrap_or(DistanceMapping::DEFAULT_LAMBDA),
                        beta: self.map_beta.unwrap_or(DistanceMapping::DEFAULT_BETA),
                    },
                    other => {
                        return Err(CliError::usage(format!("unknown mapping `{other}` (expected linear or sigmoid)")))
                    }
                };
                GeneratorConfig::Spatial { dim: self.dim, mapping }
            }
        };
        Ok(config)
    }
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<CorrelationMatrix, CliError> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(CliError::usage("correlation matrix rows must all have one entry per candidate"));
    }
    Ok(CorrelationMatrix::new(d, rows.concat())?)
}

/// A single value is repeated for every candidate.
fn broadcast(values: &[f64], d: usize, key: &str) -> Result<Vec<f64>, CliError> {
    match values.len() {
        1 => Ok(vec![values[0]; d]),
        n if n == d => Ok(values.to_vec()),
        n => Err(CliError::usage(format!("--{key} has {n} values for {d} candidates"))),
    }
}

impl RunSpec {
    /// Reads a TOML file, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_owned(), source })?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
        }
    }

    pub fn overlay(&mut self, flags: &RunSpec) {
        overlay(&mut self.voters, &flags.voters);
        overlay(&mut self.candidates, &flags.candidates);
        overlay(&mut self.seed, &flags.seed);
        overlay(&mut self.replicates, &flags.replicates);
        overlay(&mut self.rules, &flags.rules);
        overlay(&mut self.workers, &flags.workers);
        self.model.overlay(&flags.model);
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::usage("a --seed is required; runs are never seeded from the clock"))
    }

    pub fn voters(&self) -> Result<usize, CliError> {
        self.voters.ok_or_else(|| CliError::usage("--voters is required"))
    }

    pub fn candidates(&self) -> Result<usize, CliError> {
        self.candidates.ok_or_else(|| CliError::usage("--candidates is required"))
    }

    pub fn parse_rules(&self) -> Result<Vec<Rule>, CliError> {
        let specs = self.rules.as_ref().filter(|r| !r.is_empty()).ok_or_else(|| CliError::usage("no --rules given"))?;
        specs.iter().map(|s| s.parse::<Rule>().map_err(|e| CliError::usage(e.to_string()))).collect()
    }

    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let candidates = self.candidates()?;
        let config = ExperimentConfig {
            model: self.model.to_generator(candidates)?,
            voters: self.voters()?,
            candidates,
            replicates: self.replicates.ok_or_else(|| CliError::usage("--replicates is required"))?,
            rules: self.parse_rules()?,
            master_seed: self.require_seed()?,
        };
        config.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(config)
    }

    /// The generate sidecar: this spec plus the resolved model.
    pub fn sidecar(&self, resolved: Value) -> Value {
        let mut value = serde_json::to_value(self).expect("run spec serializes");
        value["resolved"] = resolved;
        value
    }
}
