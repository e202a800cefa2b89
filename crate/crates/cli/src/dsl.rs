//! Text formats for graphs and vertex monomials.
//!
//! Graph DSL: `n=<int>; e=<i>-<j>[,<i>-<j>...]`, whitespace-insensitive,
//! repeated pairs meaning multiplicity. A JSON object
//! `{"vertices": n, "edges": [[i,j],...]}` is accepted as an alternative.
//! Monomial DSL: `label^power` factors joined by `*`, e.g. `phi^2*dphi^1`;
//! `1` is the unit monomial.

use frl_core::{Multigraph, VertexMonomial};
use serde_json::Value;

use crate::errors::CliError;

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_whitespace();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), CliError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(CliError::parse_at(
                format!("expected '{}'", byte as char),
                self.pos,
            )),
        }
    }

    fn integer(&mut self) -> Result<(usize, usize), CliError> {
        self.skip_whitespace();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(CliError::parse_at("expected an integer", start));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let value = text
            .parse::<usize>()
            .map_err(|_| CliError::parse_at("integer out of range", start))?;
        Ok((value, start))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses the graph DSL or its JSON alternative.
pub fn parse_graph(text: &str) -> Result<Multigraph, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return parse_graph_json(trimmed);
    }
    let mut s = Scanner::new(text);
    s.expect(b'n')?;
    s.expect(b'=')?;
    let (n, n_pos) = s.integer()?;
    if n == 0 {
        return Err(CliError::parse_at("graph needs at least one vertex", n_pos));
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    if s.peek() == Some(b';') {
        s.pos += 1;
        if !s.at_end() {
            s.expect(b'e')?;
            s.expect(b'=')?;
            if !s.at_end() {
                loop {
                    let (i, i_pos) = s.integer()?;
                    s.expect(b'-')?;
                    let (j, j_pos) = s.integer()?;
                    check_endpoint(i, n, i_pos)?;
                    check_endpoint(j, n, j_pos)?;
                    if i == j {
                        return Err(CliError::parse_at(
                            format!("tadpoles unsupported: edge {i}-{j}"),
                            i_pos,
                        ));
                    }
                    edges.push((i, j));
                    match s.peek() {
                        Some(b',') => s.pos += 1,
                        None => break,
                        Some(other) => {
                            return Err(CliError::parse_at(
                                format!("unexpected character '{}'", other as char),
                                s.pos,
                            ))
                        }
                    }
                }
            }
        }
    } else if !s.at_end() {
        return Err(CliError::parse_at("expected ';' after the vertex count", s.pos));
    }

    Multigraph::from_edges(n, &edges).map_err(|e| CliError::parse(e.to_string()))
}

fn check_endpoint(v: usize, n: usize, pos: usize) -> Result<(), CliError> {
    if v >= n {
        Err(CliError::parse_at(
            format!("vertex {v} out of range for {n} vertices"),
            pos,
        ))
    } else {
        Ok(())
    }
}

fn parse_graph_json(text: &str) -> Result<Multigraph, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::parse(format!("invalid graph JSON: {e}")))?;
    let n = value
        .get("vertices")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::parse("graph JSON needs a \"vertices\" integer"))?
        as usize;
    let edges_value = value
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::parse("graph JSON needs an \"edges\" array"))?;
    let mut edges = Vec::with_capacity(edges_value.len());
    for (idx, pair) in edges_value.iter().enumerate() {
        let ends = pair
            .as_array()
            .filter(|a| a.len() == 2)
            .and_then(|a| Some((a[0].as_u64()?, a[1].as_u64()?)))
            .ok_or_else(|| CliError::parse(format!("edge {idx} is not a [i, j] pair")))?;
        let (i, j) = (ends.0 as usize, ends.1 as usize);
        if i >= n || j >= n {
            return Err(CliError::parse(format!(
                "edge {idx}: vertex out of range for {n} vertices"
            )));
        }
        if i == j {
            return Err(CliError::parse(format!("tadpoles unsupported: edge {i}-{j}")));
        }
        edges.push((i, j));
    }
    Multigraph::from_edges(n, &edges).map_err(|e| CliError::parse(e.to_string()))
}

/// Canonical DSL rendering; `parse_graph` of the output reproduces the graph.
pub fn graph_to_dsl(g: &Multigraph) -> String {
    let edges: Vec<String> =
        g.edge_list().iter().map(|(i, j)| format!("{i}-{j}")).collect();
    if edges.is_empty() {
        format!("n={}", g.n_vertices())
    } else {
        format!("n={}; e={}", g.n_vertices(), edges.join(","))
    }
}

/// Standard graph JSON used across command output.
pub fn graph_to_json(g: &Multigraph) -> Value {
    let edges: Vec<Value> = g
        .edge_list()
        .iter()
        .map(|&(i, j)| Value::Array(vec![i.into(), j.into()]))
        .collect();
    serde_json::json!({
        "vertices": g.n_vertices(),
        "edges": edges,
    })
}

/// Parses the monomial DSL.
pub fn parse_monomial(text: &str) -> Result<VertexMonomial, CliError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(CliError::parse("empty monomial"));
    }
    if trimmed == "1" {
        return Ok(VertexMonomial::unit());
    }
    let mut factors: Vec<(String, u32)> = Vec::new();
    for part in trimmed.split('*') {
        let part = part.trim();
        let (label, power) = match part.split_once('^') {
            Some((l, p)) => {
                let power = p.trim().parse::<u32>().map_err(|_| {
                    CliError::parse(format!("bad power in factor '{part}'"))
                })?;
                (l.trim(), power)
            }
            None => (part, 1),
        };
        if label.is_empty()
            || !label.chars().next().unwrap().is_ascii_alphabetic() && !label.starts_with('_')
            || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(CliError::parse(format!("bad factor label '{label}'")));
        }
        if power == 0 {
            return Err(CliError::parse(format!("factor '{label}' has power 0")));
        }
        factors.push((label.to_string(), power));
    }
    VertexMonomial::from_factors(factors).map_err(|e| CliError::parse(e.to_string()))
}
