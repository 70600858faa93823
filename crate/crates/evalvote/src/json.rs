//! Canonical JSON reports.
//!
//! Object keys are sorted, floats are written with 17 significant digits in
//! scientific notation, non-finite floats become `null`, and the output is
//! indented by two spaces with a trailing newline. Identical values therefore
//! always produce identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use evalvote_core::analysis::{CorrelationEstimate, ExperimentConfig, ExperimentReport, HistogramData, RuleStats};
use evalvote_core::generators::{BetaSource, CorrelationSource, DistanceMapping, GeneratorConfig, MeanSource};
use evalvote_core::rules::{ElectionResult, Rule};
use evalvote_core::CorrelationMatrix;
use serde_json::{json, Map, Value};

use crate::dataio::DataError;

/// Serializes `value` canonically.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = String::new();
    emit(value, 0, &mut out);
    out.push('\n');
    out
}

fn emit(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                write!(out, "{i}").unwrap();
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // flat numeric arrays stay on one line
            if items.iter().all(|v| !v.is_array() && !v.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    emit(item, indent, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(indent + 1, out);
                emit(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                pad(indent + 1, out);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                emit(&map[key.as_str()], indent + 1, out);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// `{:.16e}` for finite values, `null` otherwise.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_owned()
    }
}

/// A float as a JSON value, `null` when non-finite.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

fn opt_float(x: Option<f64>) -> Value {
    x.map_or(Value::Null, float)
}

/// Types with a canonical JSON form.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

/// Writes the canonical form of `value` to `path`.
pub fn write_report_json(value: &impl ToJson, path: &Path) -> Result<(), DataError> {
    write_value(&value.to_json(), path)
}

pub fn write_value(value: &Value, path: &Path) -> Result<(), DataError> {
    std::fs::write(path, to_canonical_string(value)).map_err(|source| DataError::Io { path: path.to_owned(), source })
}

fn rule_parameters(rule: &Rule) -> Value {
    match rule {
        Rule::Approval { threshold } => json!({ "threshold": float(*threshold) }),
        Rule::Deepest(spec) => json!({ "p": float(spec.p()) }),
        _ => json!({}),
    }
}

impl ToJson for Rule {
    fn to_json(&self) -> Value {
        json!({ "id": self.id(), "parameters": rule_parameters(self), "spec": self.to_string() })
    }
}

impl ToJson for ElectionResult {
    fn to_json(&self) -> Value {
        let tie = match &self.tie {
            None => Value::Null,
            Some(t) => json!({
                "tied": t.tied.iter().map(|c| c + 1).collect::<Vec<_>>(),
                "trace": t.trace,
            }),
        };
        json!({
            "rule": self.rule.id(),
            "parameters": rule_parameters(&self.rule),
            "winner": self.winner + 1,
            "scores": floats(&self.scores),
            "tie": tie,
        })
    }
}

impl ToJson for CorrelationMatrix {
    fn to_json(&self) -> Value {
        let d = self.dim();
        Value::Array((0..d).map(|i| floats(&self.values()[i * d..(i + 1) * d])).collect())
    }
}

impl ToJson for DistanceMapping {
    fn to_json(&self) -> Value {
        match *self {
            DistanceMapping::Linear => json!({ "mapping": "linear" }),
            DistanceMapping::Sigmoid { lambda, beta } => {
                json!({ "mapping": "sigmoid", "lambda": float(lambda), "map-beta": float(beta) })
            }
        }
    }
}

/// Model description using the same keys as the `[model]` config section.
impl ToJson for GeneratorConfig {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name()));
        match self {
            GeneratorConfig::Uniform | GeneratorConfig::Dirichlet => {}
            GeneratorConfig::Copula { correlation } => match correlation {
                CorrelationSource::Matrix(c) => {
                    m.insert("corr".into(), c.to_json());
                }
                CorrelationSource::Constant(rho) => {
                    m.insert("rho".into(), float(*rho));
                }
                CorrelationSource::Random => {
                    m.insert("random-corr".into(), json!(true));
                }
            },
            GeneratorConfig::Normal { means, sigma } => {
                m.insert("sigma".into(), float(*sigma));
                match means {
                    MeanSource::Fixed(v) => m.insert("means".into(), floats(v)),
                    MeanSource::SampleUniform => m.insert("sample-params".into(), json!(true)),
                };
            }
            GeneratorConfig::Beta { params } => match params {
                BetaSource::Fixed(p) => {
                    let (a, b): (Vec<f64>, Vec<f64>) = p.iter().copied().unzip();
                    m.insert("alpha".into(), floats(&a));
                    m.insert("beta".into(), floats(&b));
                }
                BetaSource::SampleQuadrant => {
                    m.insert("sample-params".into(), json!(true));
                }
            },
            GeneratorConfig::Spatial { dim, mapping } => {
                if let Some(dim) = dim {
                    m.insert("dim".into(), json!(dim));
                }
                if let Value::Object(extra) = mapping.to_json() {
                    m.extend(extra);
                }
            }
        }
        Value::Object(m)
    }
}

impl ToJson for ExperimentConfig {
    fn to_json(&self) -> Value {
        json!({
            "model": self.model.to_json(),
            "voters": self.voters,
            "candidates": self.candidates,
            "replicates": self.replicates,
            "rules": self.rules.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "seed": self.master_seed,
        })
    }
}

impl ToJson for RuleStats {
    fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.to_string(),
            "condorcet_winner_elected": self.condorcet_winner_elected,
            "condorcet_winner_not_elected": self.condorcet_winner_not_elected,
            "condorcet_winner_frequency": opt_float(self.condorcet_winner_frequency),
            "condorcet_loser_elected": self.condorcet_loser_elected,
            "condorcet_loser_frequency": opt_float(self.condorcet_loser_frequency),
        })
    }
}

impl ToJson for ExperimentReport {
    fn to_json(&self) -> Value {
        let k = self.rules.len();
        let agreement: Vec<Value> = (0..k).map(|a| floats(&self.agreement[a * k..(a + 1) * k])).collect();
        json!({
            "config": self.config.to_json(),
            "master_seed": self.config.master_seed,
            "replicates": self.replicates,
            "replicates_with_condorcet_winner": self.replicates_with_condorcet_winner,
            "replicates_without_condorcet_winner": self.replicates_without_condorcet_winner,
            "replicates_with_condorcet_loser": self.replicates_with_condorcet_loser,
            "rules": self.rules.iter().map(ToJson::to_json).collect::<Vec<_>>(),
            "agreement": agreement,
        })
    }
}

impl ToJson for HistogramData {
    fn to_json(&self) -> Value {
        let edges: Vec<f64> = (0..=self.bins()).map(|k| k as f64 / self.bins() as f64).collect();
        json!({
            "candidate": self.candidate + 1,
            "zero_atom": self.zero_atom,
            "one_atom": self.one_atom,
            "bin_edges": floats(&edges),
            "counts": self.counts,
            "total": self.total(),
        })
    }
}

impl ToJson for CorrelationEstimate {
    fn to_json(&self) -> Value {
        let d = self.dim;
        let rows: Vec<Value> =
            (0..d).map(|i| Value::Array((0..d).map(|j| opt_float(self.get(i, j))).collect())).collect();
        json!({
            "correlation": rows,
            "undefined": self.undefined.iter().map(|c| c + 1).collect::<Vec<_>>(),
        })
    }
}
