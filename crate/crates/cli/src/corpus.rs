//! Bundled table of graphs with known period values, used as a regression
//! corpus, plus loading of user-supplied extension tables.

use std::path::Path;

use frl_core::{evaluate_period, Multigraph, QuadratureConfig};
use serde_json::{json, Value};

use crate::dsl::parse_graph;
use crate::errors::CliError;

/// Riemann zeta at 3, to f64 precision.
pub const ZETA_3: f64 = 1.202_056_903_159_594_2;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub graph_dsl: String,
    pub dimension: u32,
    pub expected: f64,
    /// Absolute tolerance on the period value.
    pub tolerance: f64,
    pub citation: String,
    pub config: QuadratureConfig,
}

/// The bundled read-only table.
pub fn bundled_entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "fish".into(),
            graph_dsl: "n=2; e=0-1,0-1".into(),
            dimension: 4,
            expected: 1.0,
            tolerance: 1e-6,
            citation: "dual polynomial is constant on the simplex, so P = 1".into(),
            config: QuadratureConfig::gauss(64),
        },
        CorpusEntry {
            name: "triangle".into(),
            graph_dsl: "n=3; e=0-1,0-2,1-2".into(),
            dimension: 6,
            expected: 0.5,
            tolerance: 1e-4,
            citation: "elementary reduction to a rational square integral gives P = 1/2".into(),
            config: QuadratureConfig::gauss(64),
        },
        CorpusEntry {
            name: "wheel-3-spokes".into(),
            graph_dsl: "n=4; e=0-1,0-2,0-3,1-2,1-3,2-3".into(),
            dimension: 4,
            expected: 6.0 * ZETA_3,
            // 1% of the value; the uniform-sampling estimator has a heavy
            // tail, so Monte Carlo runs pin seed and workers
            tolerance: 0.06 * ZETA_3,
            citation: "classical wheel period P = 6 zeta(3)".into(),
            config: QuadratureConfig::monte_carlo(10_000_000, 18, 8),
        },
    ]
}

fn config_from_json(value: &Value, line: usize) -> Result<QuadratureConfig, CliError> {
    let method = value.get("method").and_then(Value::as_str).unwrap_or("gauss");
    match method {
        "gauss" => {
            let points =
                value.get("points").and_then(Value::as_u64).unwrap_or(64) as usize;
            Ok(QuadratureConfig::gauss(points))
        }
        "mc" => Ok(QuadratureConfig::monte_carlo(
            value.get("samples").and_then(Value::as_u64).unwrap_or(10_000_000),
            value.get("seed").and_then(Value::as_u64).unwrap_or(18),
            value.get("workers").and_then(Value::as_u64).unwrap_or(8) as usize,
        )),
        other => Err(CliError::parse(format!(
            "corpus file line {line}: unknown method '{other}'"
        ))),
    }
}

/// Loads a user corpus: one JSON object per line with fields `name`,
/// `graph`, `dim`, `expected`, `tolerance` and optional `citation`,
/// `method`, `points`, `samples`, `seed`, `workers`.
pub fn load_user_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(line).map_err(|e| {
            CliError::parse(format!("corpus file line {lineno}: {e}"))
        })?;
        let field = |name: &str| -> Result<&Value, CliError> {
            value.get(name).ok_or_else(|| {
                CliError::parse(format!("corpus file line {lineno}: missing \"{name}\""))
            })
        };
        let graph_dsl = field("graph")?
            .as_str()
            .ok_or_else(|| {
                CliError::parse(format!("corpus file line {lineno}: \"graph\" must be a string"))
            })?
            .to_string();
        // validate the graph text up front so the error names the line
        parse_graph(&graph_dsl).map_err(|e| {
            CliError::parse(format!("corpus file line {lineno}: {e}"))
        })?;
        let numeric = |name: &str| -> Result<f64, CliError> {
            field(name)?.as_f64().ok_or_else(|| {
                CliError::parse(format!(
                    "corpus file line {lineno}: \"{name}\" must be a number"
                ))
            })
        };
        entries.push(CorpusEntry {
            name: match value.get("name").and_then(Value::as_str) {
                Some(s) => s.to_string(),
                None => format!("user-{lineno}"),
            },
            graph_dsl,
            dimension: numeric("dim")? as u32,
            expected: numeric("expected")?,
            tolerance: numeric("tolerance")?,
            citation: value
                .get("citation")
                .and_then(Value::as_str)
                .unwrap_or("user corpus entry")
                .to_string(),
            config: config_from_json(&value, lineno)?,
        });
    }
    Ok(entries)
}

pub struct VerifyOutcome {
    pub report: Value,
    pub failed: usize,
}

/// Recomputes every entry and reports pass/fail per tolerance.
pub fn verify(entries: &[CorpusEntry]) -> Result<VerifyOutcome, CliError> {
    let mut rows = Vec::new();
    let mut failed = 0usize;
    for entry in entries {
        let graph: Multigraph =
            parse_graph(&entry.graph_dsl).map_err(|e| CliError::parse(e.to_string()))?;
        let estimate = evaluate_period(&graph, entry.dimension, &entry.config)?;
        let error = (estimate.value - entry.expected).abs();
        let pass = error <= entry.tolerance;
        if !pass {
            failed += 1;
        }
        rows.push(json!({
            "name": entry.name,
            "graph": entry.graph_dsl,
            "dimension": entry.dimension,
            "method": entry.config.method.name(),
            "expected": entry.expected,
            "computed": estimate.value,
            "abs_error": error,
            "tolerance": entry.tolerance,
            "error_estimate": estimate.error_estimate,
            "pass": pass,
            "citation": entry.citation,
        }));
    }
    Ok(VerifyOutcome {
        report: json!({
            "entries": rows,
            "total": entries.len(),
            "failed": failed,
            "all_pass": failed == 0,
        }),
        failed,
    })
}

/// Listing without recomputation.
pub fn listing(entries: &[CorpusEntry]) -> Value {
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "graph": e.graph_dsl,
                "dimension": e.dimension,
                "expected": e.expected,
                "tolerance": e.tolerance,
                "method": e.config.method.name(),
                "citation": e.citation,
            })
        })
        .collect();
    json!({ "entries": rows, "total": rows.len() })
}
