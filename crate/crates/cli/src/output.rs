//! JSON rendering. All floating-point numbers are written in scientific
//! notation with 17 significant digits, which round-trips every f64 exactly
//! and keeps repeated runs byte-identical.

use std::io;

use frl_core::{
    BetaTerm, CoproductTerm, DiffOpResidue, Multigraph, PeriodEstimate, PowerCountReport,
    QuadMethod, QuadratureConfig, ResidueValue,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dsl::{graph_to_dsl, graph_to_json};
use crate::errors::CliError;

struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a JSON value with the fixed float format.
pub fn render(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

pub fn print_value(value: &Value) {
    println!("{}", render(value));
}

pub fn error_json(err: &CliError) -> Value {
    let mut body = json!({
        "kind": err.kind(),
        "message": err.to_string(),
    });
    if let CliError::Parse { position: Some(p), .. } = err {
        body["position"] = json!(p);
    }
    json!({ "error": body })
}

pub fn power_count_json(g: &Multigraph, report: &PowerCountReport, critical: bool) -> Value {
    json!({
        "graph": graph_to_json(g),
        "graph_dsl": graph_to_dsl(g),
        "dimension": report.dimension,
        "n_vertices": g.n_vertices(),
        "edge_count": g.edge_count(),
        "loop_number": g.loop_number(),
        "scaling_degree": report.scaling_degree,
        "divergence_degree": report.divergence_degree,
        "superficially_divergent": report.superficially_divergent,
        "eg_primitive": report.eg_primitive,
        "critical_edge_count": critical,
        "worst_subgraph": report
            .worst_subgraph
            .as_ref()
            .map(|s| Value::from(s.members().to_vec()))
            .unwrap_or(Value::Null),
    })
}

pub fn period_json(
    g: &Multigraph,
    dimension: u32,
    cfg: &QuadratureConfig,
    estimate: &PeriodEstimate,
) -> Value {
    let mut body = json!({
        "graph": graph_to_json(g),
        "graph_dsl": graph_to_dsl(g),
        "dimension": dimension,
        "method": estimate.method.name(),
        "value": estimate.value,
        "evaluations": estimate.evaluations,
    });
    match estimate.method {
        QuadMethod::GaussTensor => {
            body["richardson_delta"] = json!(estimate.error_estimate);
            body["points_per_axis"] = json!(cfg.points_per_axis);
        }
        QuadMethod::MonteCarlo => {
            body["std_error"] = json!(estimate.error_estimate);
            body["samples"] = json!(cfg.samples);
            body["seed"] = json!(cfg.rng_seed);
            body["workers"] = json!(cfg.workers);
        }
    }
    body
}

pub fn residue_json(value: &ResidueValue) -> Value {
    let numeric = value.numeric();
    json!({
        "i_power": value.i_power(),
        "rational": value.rational().to_string(),
        "pi_power": value.pi_power(),
        "transcendental": value
            .transcendental()
            .map(|t| json!({ "tag": t.tag, "value": t.value }))
            .unwrap_or(Value::Null),
        "numeric": { "re": numeric.re, "im": numeric.im },
        "display": value.to_string(),
    })
}

pub fn banana_json(lines: u32, dimension: u32, residue: &DiffOpResidue) -> Value {
    json!({
        "lines": lines,
        "dimension": dimension,
        "box_power": residue.box_power,
        "coefficient": residue_json(&residue.coefficient),
        "display": residue.to_string(),
    })
}

pub fn coproduct_json(monomial: &frl_core::VertexMonomial, terms: &[CoproductTerm]) -> Value {
    let rendered: Vec<Value> = terms
        .iter()
        .map(|t| {
            json!({
                "coefficient": t.coefficient,
                "left": t.left.to_string(),
                "right": t.right.to_string(),
            })
        })
        .collect();
    json!({
        "monomial": monomial.to_string(),
        "term_count": terms.len(),
        "terms": rendered,
    })
}

pub fn beta_json(g: &Multigraph, dimension: u32, terms: &[BetaTerm]) -> Value {
    let rendered: Vec<Value> = terms
        .iter()
        .map(|t| {
            let blocks: Vec<Value> = t
                .partition
                .iter()
                .zip(&t.block_graphs)
                .zip(&t.leaf_status)
                .map(|((vertices, graph), status)| {
                    json!({
                        "vertices": vertices,
                        "graph": graph_to_json(graph),
                        "status": status.name(),
                    })
                })
                .collect();
            json!({
                "partition": t.partition,
                "quotient": graph_to_json(&t.quotient),
                "blocks": blocks,
            })
        })
        .collect();
    json!({
        "graph": graph_to_json(g),
        "dimension": dimension,
        "term_count": terms.len(),
        "terms": rendered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_significant_digits() {
        let v = json!({ "x": 1.0, "y": 0.1 });
        let s = render(&v);
        assert_eq!(s, r#"{"x":1.0000000000000000e0,"y":1.0000000000000001e-1}"#);
    }

    #[test]
    fn float_format_roundtrips() {
        for x in [1.0f64, 0.1, 7.2123414198, 6.332_573_977_646_111e-3, 1e-300] {
            let rendered = render(&json!(x));
            let back: f64 = rendered.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn integers_stay_integers() {
        assert_eq!(render(&json!({ "n": 64 })), r#"{"n":64}"#);
    }
}
