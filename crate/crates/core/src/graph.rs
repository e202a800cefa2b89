//! Labeled multigraphs without tadpoles.
//!
//! A graph is a symmetric edge-multiplicity matrix over `0..n` vertices with
//! a zero diagonal. Vertices are labeled; isomorphism is a separate, explicit
//! operation rather than being baked into equality, because sums over graph
//! classes in the ambient theory run over labeled graphs.

use num::BigUint;
use num::One;

use crate::error::{Error, Result};

/// Permutation searches (isomorphism, canonical form) are brute force and
/// refuse graphs beyond this size.
pub const PERMUTATION_SEARCH_CAP: usize = 10;

/// Undirected multigraph on labeled vertices `0..n`, no self-loops.
///
/// Multiplicities are stored as the strict upper triangle of the symmetric
/// matrix, row by row: `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    upper: Vec<u32>,
}

fn triangle_len(n: usize) -> usize {
    n * (n - 1) / 2
}

impl Multigraph {
    /// Edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "graph needs at least one vertex".into(),
            ));
        }
        Ok(Multigraph { n, upper: vec![0; triangle_len(n)] })
    }

    /// Builds a graph from an edge list; repeated pairs add multiplicity.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::edgeless(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {i}-{j} out of range for {n} vertices"
                )));
            }
            if i == j {
                return Err(Error::InvalidArgument(format!(
                    "tadpoles unsupported: edge {i}-{j}"
                )));
            }
            let idx = g.upper_index(i, j);
            g.upper[idx] += 1;
        }
        Ok(g)
    }

    /// Builds a graph from a full multiplicity matrix, validating symmetry
    /// and the zero diagonal.
    pub fn from_multiplicity_matrix(matrix: &[Vec<u32>]) -> Result<Self> {
        let n = matrix.len();
        let mut g = Multigraph::edgeless(n)?;
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument("matrix is not square".into()));
            }
            if row[i] != 0 {
                return Err(Error::InvalidArgument(format!(
                    "tadpoles unsupported: nonzero diagonal at vertex {i}"
                )));
            }
            for j in (i + 1)..n {
                if matrix[j][i] != row[j] {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
                let idx = g.upper_index(i, j);
                g.upper[idx] = row[j];
            }
        }
        Ok(g)
    }

    fn upper_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        // offset of row a, then column b within the row
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Number of parallel edges between `i` and `j`.
    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 0;
        }
        self.upper[self.upper_index(i, j)]
    }

    /// Total edge count, parallel edges counted separately.
    pub fn edge_count(&self) -> usize {
        self.upper.iter().map(|&m| m as usize).sum()
    }

    /// Degree of `v` counting multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).map(|u| self.multiplicity(v, u) as usize).sum()
    }

    /// Vertex pairs with at least one edge, as `(i, j, multiplicity)`.
    pub fn vertex_pairs(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let m = self.multiplicity(i, j);
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    /// Canonical edge ordering: pairs sorted by `(i, j)`, parallel copies
    /// adjacent. This fixes the variable order of the dual polynomial, where
    /// every parallel edge carries its own variable.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, j, m) in self.vertex_pairs() {
            for _ in 0..m {
                out.push((i, j));
            }
        }
        out
    }

    /// Flattened strict upper triangle, row by row.
    pub fn upper_triangle(&self) -> &[u32] {
        &self.upper
    }

    pub fn connected_component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut components = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                #[allow(clippy::needless_range_loop)] // u is a vertex id
                for u in 0..self.n {
                    if !seen[u] && self.multiplicity(v, u) > 0 {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_component_count() == 1
    }

    /// First Betti number `|E| - |V| + c`; equals `|E| - |V| + 1` for
    /// connected graphs and zero for forests.
    pub fn loop_number(&self) -> usize {
        self.edge_count() + self.connected_component_count() - self.n
    }

    /// Product of factorials of edge multiplicities: the number of
    /// permutations of parallel lines between identical vertex pairs.
    pub fn symmetry_factor(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &m in &self.upper {
            for k in 2..=m as u64 {
                acc *= k;
            }
        }
        acc
    }

    /// Subgraph induced by a vertex subset: keeps all edges with both ends
    /// in the subset, vertices relabeled by their position in the subset.
    pub fn induced_subgraph(&self, subset: &VertexSubset) -> Result<Multigraph> {
        subset.validate_for(self)?;
        let verts = subset.members();
        let mut sub = Multigraph::edgeless(verts.len())?;
        for (a, &va) in verts.iter().enumerate() {
            for (b, &vb) in verts.iter().enumerate().skip(a + 1) {
                let idx = sub.upper_index(a, b);
                sub.upper[idx] = self.multiplicity(va, vb);
            }
        }
        Ok(sub)
    }

    /// Sorted degree sequence, used as an isomorphism prefilter.
    fn degree_signature(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Lexicographically minimal flattened upper triangle over all vertex
    /// permutations. Stable under relabeling, so usable as a cache key.
    pub fn canonical_form(&self) -> Result<Vec<u32>> {
        if self.n > PERMUTATION_SEARCH_CAP {
            return Err(Error::CapacityExceeded(format!(
                "canonical form needs a permutation search, capped at {} vertices",
                PERMUTATION_SEARCH_CAP
            )));
        }
        let mut best: Option<Vec<u32>> = None;
        let mut perm: Vec<usize> = (0..self.n).collect();
        loop {
            let mut candidate = Vec::with_capacity(self.upper.len());
            for i in 0..self.n {
                for j in (i + 1)..self.n {
                    candidate.push(self.multiplicity(perm[i], perm[j]));
                }
            }
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(best.expect("n >= 1"))
    }
}

/// Next lexicographic permutation in place; false once wrapped.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Non-empty sorted set of vertex indices of some graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut m: Vec<usize> = members.into_iter().collect();
        m.sort_unstable();
        m.dedup();
        if m.is_empty() {
            return Err(Error::InvalidArgument("vertex subset is empty".into()));
        }
        Ok(VertexSubset { members: m })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn validate_for(&self, g: &Multigraph) -> Result<()> {
        match self.members.last() {
            Some(&max) if max >= g.n_vertices() => Err(Error::InvalidArgument(format!(
                "vertex {max} out of range for {} vertices",
                g.n_vertices()
            ))),
            _ => Ok(()),
        }
    }
}

/// Enumerates all tadpole-free multigraphs on `n` labeled vertices with at
/// most `max_edges` edges, in lexicographic order of the flattened upper
/// triangle. `connected_only` filters to connected graphs.
pub fn enumerate_graphs(n: usize, max_edges: usize, connected_only: bool) -> Result<Vec<Multigraph>> {
    if n == 0 {
        return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
    }
    let slots = triangle_len(n);
    let mut out = Vec::new();
    let mut tuple = vec![0u32; slots];
    loop {
        let g = Multigraph { n, upper: tuple.clone() };
        if !connected_only || g.is_connected() {
            out.push(g);
        }
        // odometer step constrained to sum <= max_edges
        let mut advanced = false;
        for pos in (0..slots).rev() {
            let sum: usize = tuple.iter().map(|&m| m as usize).sum();
            if sum < max_edges {
                tuple[pos] += 1;
                for t in tuple.iter_mut().skip(pos + 1) {
                    *t = 0;
                }
                advanced = true;
                break;
            }
            tuple[pos] = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(out)
}

/// Tests whether a vertex relabeling maps one multiplicity matrix onto the
/// other. Brute-force backtracking with a degree prefilter; graphs larger
/// than [`PERMUTATION_SEARCH_CAP`] are refused.
pub fn are_isomorphic(a: &Multigraph, b: &Multigraph) -> Result<bool> {
    if a.n_vertices() != b.n_vertices() {
        return Ok(false);
    }
    let n = a.n_vertices();
    if n > PERMUTATION_SEARCH_CAP {
        return Err(Error::CapacityExceeded(format!(
            "isomorphism search is capped at {} vertices",
            PERMUTATION_SEARCH_CAP
        )));
    }
    if a.edge_count() != b.edge_count() || a.degree_signature() != b.degree_signature() {
        return Ok(false);
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_mapping(a, b, 0, &mut image, &mut used))
}

fn extend_mapping(
    a: &Multigraph,
    b: &Multigraph,
    k: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = a.n_vertices();
    if k == n {
        return true;
    }
    for candidate in 0..n {
        if used[candidate] || a.degree(k) != b.degree(candidate) {
            continue;
        }
        if (0..k).any(|i| a.multiplicity(i, k) != b.multiplicity(image[i], candidate)) {
            continue;
        }
        image[k] = candidate;
        used[candidate] = true;
        if extend_mapping(a, b, k + 1, image, used) {
            return true;
        }
        used[candidate] = false;
        image[k] = usize::MAX;
    }
    false
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Multigraph;

    /// Two vertices joined by two parallel edges.
    pub fn fish() -> Multigraph {
        Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap()
    }

    /// Two vertices joined by `l` parallel edges.
    pub fn banana(l: usize) -> Multigraph {
        Multigraph::from_edges(2, &vec![(0, 1); l]).unwrap()
    }

    pub fn triangle() -> Multigraph {
        Multigraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    /// Rim triangle 0,1,2 plus hub 3 joined to every rim vertex.
    pub fn wheel3() -> Multigraph {
        Multigraph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap()
    }

    /// Two vertices joined by three length-two paths.
    pub fn theta_subdivided() -> Multigraph {
        Multigraph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap()
    }
}
