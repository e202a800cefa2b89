//! Scaling and divergence degrees, superficial divergence classification and
//! the convergence precheck for the period integral.
//!
//! For a graph with `E` edges and `V` vertices in even dimension `D`, the
//! scaling degree is `(D-2)E` and the divergence degree is
//! `(D-2)E - (V-1)D`. A graph is primitive here when its own divergence
//! degree vanishes while every proper induced subgraph on at least two
//! vertices is superficially convergent; for such graphs the residue
//! is a single number and the period integral converges absolutely.

use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSubset};

/// Power-counting summary for one graph at one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerCountReport {
    pub dimension: u32,
    pub scaling_degree: i64,
    pub divergence_degree: i64,
    pub superficially_divergent: bool,
    pub eg_primitive: bool,
    /// Proper induced subgraph (>= 2 vertices) of maximal divergence degree;
    /// ties broken by smaller vertex set, then lexicographically. `None` when
    /// the graph has no proper subgraph with two or more vertices.
    pub worst_subgraph: Option<VertexSubset>,
}

pub(crate) fn require_dimension(d: u32) -> Result<()> {
    if !d.is_multiple_of(2) || d < 4 {
        Err(Error::UnsupportedDimension(d as i64))
    } else {
        Ok(())
    }
}

/// `(D-2) |E|`, the homogeneity degree of the unrenormalized graph
/// distribution. Purely arithmetic, defined for any graph.
pub fn scaling_degree(g: &Multigraph, d: u32) -> i64 {
    (d as i64 - 2) * g.edge_count() as i64
}

/// `(D-2)|E| - (|V|-1) D`; nonnegative means superficially divergent.
pub fn divergence_degree(g: &Multigraph, d: u32) -> i64 {
    scaling_degree(g, d) - (g.n_vertices() as i64 - 1) * d as i64
}

/// Proper induced subgraphs on at least two vertices, as vertex subsets
/// ordered by size and then lexicographically.
fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 2..n {
        let mut current: Vec<usize> = (0..size).collect();
        loop {
            out.push(current.clone());
            if !next_combination(&mut current, n) {
                break;
            }
        }
    }
    out
}

/// Advances to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] != i + n - k {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// True when the divergence degree vanishes and every proper induced
/// subgraph on two or more vertices is superficially convergent. Purely
/// combinatorial; does not require connectivity.
pub fn is_eg_primitive(g: &Multigraph, d: u32) -> bool {
    if divergence_degree(g, d) != 0 {
        return false;
    }
    let n = g.n_vertices();
    proper_subsets(n).into_iter().all(|members| {
        let subset = VertexSubset::new(members).expect("non-empty by construction");
        let sub = g.induced_subgraph(&subset).expect("subset valid");
        divergence_degree(&sub, d) < 0
    })
}

/// Full power-counting report. The graph must be connected and `D` even and
/// at least 4.
pub fn power_count(g: &Multigraph, d: u32) -> Result<PowerCountReport> {
    require_dimension(d)?;
    if !g.is_connected() {
        return Err(Error::InvalidArgument(
            "power counting expects a connected graph".into(),
        ));
    }
    let alpha = scaling_degree(g, d);
    let omega = divergence_degree(g, d);

    let mut worst: Option<(i64, Vec<usize>)> = None;
    let mut all_proper_convergent = true;
    for members in proper_subsets(g.n_vertices()) {
        let subset = VertexSubset::new(members.clone()).expect("non-empty");
        let sub = g.induced_subgraph(&subset)?;
        let w = divergence_degree(&sub, d);
        if w >= 0 {
            all_proper_convergent = false;
        }
        // subsets arrive size-then-lex ordered, so strict improvement
        // implements the tie-breaking rule
        if worst.as_ref().is_none_or(|(best, _)| w > *best) {
            worst = Some((w, members));
        }
    }

    Ok(PowerCountReport {
        dimension: d,
        scaling_degree: alpha,
        divergence_degree: omega,
        superficially_divergent: omega >= 0,
        eg_primitive: omega == 0 && all_proper_convergent,
        worst_subgraph: worst
            .map(|(_, members)| VertexSubset::new(members).expect("non-empty")),
    })
}

/// Edge-count form of the vanishing divergence degree: `2|E| = D h1`.
/// Equivalent to `divergence_degree == 0` for connected graphs.
pub fn has_critical_edge_count(g: &Multigraph, d: u32) -> bool {
    2 * g.edge_count() == d as usize * g.loop_number()
}

/// Sufficient condition under which the period integral is treated as
/// absolutely convergent: zero divergence degree and no superficially
/// divergent proper subgraph. Identical to the primitivity predicate.
pub fn period_convergence_precheck(g: &Multigraph, d: u32) -> bool {
    is_eg_primitive(g, d)
}
