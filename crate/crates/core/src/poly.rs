//! Exact multivariate polynomial arithmetic in edge variables, the generic
//! graph Laplacian, and the dual graph polynomial computed by two independent
//! routes: a Laplacian minor determinant and spanning-tree enumeration.
//!
//! All coefficients are arbitrary-precision integers; determinants use
//! fraction-free elimination so exactness is never lost.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Sparse polynomial with exact integer coefficients over a fixed number of
/// variables. Terms are keyed by exponent vector; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, BigInt>,
}

impl ExactPolynomial {
    pub fn zero(nvars: usize) -> Self {
        ExactPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = ExactPolynomial::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        ExactPolynomial::constant(nvars, 1)
    }

    /// The single variable `index` as a polynomial.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exps = vec![0u16; nvars];
        exps[index] = 1;
        let mut p = ExactPolynomial::zero(nvars);
        p.add_term(exps, BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn add_term(&mut self, exps: Vec<u16>, coeff: BigInt) {
        debug_assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree of the highest term; zero polynomial reports 0.
    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// True if every term has total degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: usize) -> bool {
        self.terms.keys().all(|e| e.iter().map(|&x| x as usize).sum::<usize>() == d)
    }

    /// True if every coefficient is 0 or 1 (0 never stored, so: all 1).
    pub fn coefficients_are_unit(&self) -> bool {
        self.terms.values().all(|c| c.is_one())
    }

    /// Evaluates at a floating point; exponents applied by repeated squaring
    /// via `powi`.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        let mut acc = 0.0;
        for (exps, coeff) in &self.terms {
            let mut term = coeff_to_f64(coeff);
            for (x, &e) in point.iter().zip(exps.iter()) {
                if e > 0 {
                    term *= x.powi(e as i32);
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact division: `self = q * divisor` with no remainder. Returns `None`
    /// if the division does not come out exact (never happens for
    /// fraction-free elimination pivots).
    pub fn exact_div(&self, divisor: &ExactPolynomial) -> Option<ExactPolynomial> {
        assert_eq!(self.nvars, divisor.nvars);
        if self.is_zero() {
            return Some(ExactPolynomial::zero(self.nvars));
        }
        if divisor.is_zero() {
            return None;
        }
        let (div_exp, div_coeff) = divisor.terms.iter().next_back()?;
        let mut quotient = ExactPolynomial::zero(self.nvars);
        let mut rem = self.clone();
        while let Some((lead_exp, lead_coeff)) = rem.terms.iter().next_back() {
            let mut q_exp = Vec::with_capacity(self.nvars);
            for (&a, &b) in lead_exp.iter().zip(div_exp.iter()) {
                if a < b {
                    return None;
                }
                q_exp.push(a - b);
            }
            let (q_coeff, r) = num::Integer::div_rem(lead_coeff, div_coeff);
            if !r.is_zero() {
                return None;
            }
            let mut mono = ExactPolynomial::zero(self.nvars);
            mono.add_term(q_exp.clone(), q_coeff.clone());
            rem = &rem - &(&mono * divisor);
            quotient.add_term(q_exp, q_coeff);
        }
        Some(quotient)
    }

    /// Renders with variables `a1..aN`, terms in descending lexicographic
    /// order of the exponent vector, e.g. `a1*a2 + a1*a3 + a2*a3`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (exps, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = coeff.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(abs.to_string());
            }
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("a{}", i + 1)),
                    _ => factors.push(format!("a{}^{}", i + 1, e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn coeff_to_f64(c: &BigInt) -> f64 {
    num::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn add(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn sub(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn neg(self) -> ExactPolynomial {
        let mut out = ExactPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn mul(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = ExactPolynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u16> =
                    ea.iter().zip(eb.iter()).map(|(&x, &y)| x + y).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

/// Square matrix of polynomials sharing one variable ordering.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    dim: usize,
    nvars: usize,
    entries: Vec<ExactPolynomial>,
}

impl PolyMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactPolynomial {
        &self.entries[i * self.dim + j]
    }

    /// Removes row and column `v`.
    pub fn minor(&self, v: usize) -> PolyMatrix {
        assert!(v < self.dim);
        let d = self.dim - 1;
        let mut entries = Vec::with_capacity(d * d);
        for i in (0..self.dim).filter(|&i| i != v) {
            for j in (0..self.dim).filter(|&j| j != v) {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix { dim: d, nvars: self.nvars, entries }
    }

    /// Exact determinant: cofactor expansion for small matrices, Bareiss
    /// fraction-free elimination above that. A float determinant would
    /// destroy the exact comparisons downstream.
    pub fn determinant(&self) -> ExactPolynomial {
        if self.dim == 0 {
            return ExactPolynomial::one(self.nvars);
        }
        if self.dim <= 5 {
            self.det_cofactor(&(0..self.dim).collect::<Vec<_>>())
        } else {
            self.det_bareiss()
        }
    }

    fn det_cofactor(&self, cols: &[usize]) -> ExactPolynomial {
        let row = self.dim - cols.len();
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = ExactPolynomial::zero(self.nvars);
        for (k, &col) in cols.iter().enumerate() {
            let entry = self.get(row, col);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
            let sub = self.det_cofactor(&rest);
            let contribution = entry * &sub;
            acc = if k % 2 == 0 { &acc + &contribution } else { &acc - &contribution };
        }
        acc
    }

    fn det_bareiss(&self) -> ExactPolynomial {
        let n = self.dim;
        let mut m: Vec<ExactPolynomial> = self.entries.clone();
        let mut sign_flip = false;
        let mut prev_pivot = ExactPolynomial::one(self.nvars);
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            m.swap(k * n + c, r * n + c);
                        }
                        sign_flip = !sign_flip;
                    }
                    None => return ExactPolynomial::zero(self.nvars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i * n + j] * &m[k * n + k]) - &(&m[i * n + k] * &m[k * n + j]);
                    m[i * n + j] = num
                        .exact_div(&prev_pivot)
                        .expect("fraction-free elimination divides exactly");
                }
            }
            for i in k + 1..n {
                m[i * n + k] = ExactPolynomial::zero(self.nvars);
            }
            prev_pivot = m[k * n + k].clone();
        }
        let det = m[n * n - 1].clone();
        if sign_flip {
            -&det
        } else {
            det
        }
    }
}

/// Generic graph Laplacian in the edge variables: diagonal entry `(i,i)` sums
/// the variables of edges at `i`, off-diagonal `(i,j)` carries minus the
/// variables of edges joining `i` and `j`. Row and column sums vanish.
pub fn kirchhoff_matrix(g: &Multigraph) -> PolyMatrix {
    let edges = g.edge_list();
    let nvars = edges.len();
    let n = g.n_vertices();
    let mut entries = vec![ExactPolynomial::zero(nvars); n * n];
    for (e, &(i, j)) in edges.iter().enumerate() {
        let var = ExactPolynomial::var(nvars, e);
        entries[i * n + j] = &entries[i * n + j] - &var;
        entries[j * n + i] = &entries[j * n + i] - &var;
        entries[i * n + i] = &entries[i * n + i] + &var;
        entries[j * n + j] = &entries[j * n + j] + &var;
    }
    PolyMatrix { dim: n, nvars, entries }
}

/// Dual graph polynomial as the determinant of the `(root,root)` minor of
/// the Kirchhoff matrix. Any root gives the same polynomial.
pub fn dual_polynomial_minor(g: &Multigraph, root_vertex: usize) -> Result<ExactPolynomial> {
    if root_vertex >= g.n_vertices() {
        return Err(Error::InvalidArgument(format!(
            "root vertex {root_vertex} out of range"
        )));
    }
    if !g.is_connected() {
        return Err(Error::NoSpanningTree);
    }
    let det = kirchhoff_matrix(g).minor(root_vertex).determinant();
    if det.is_zero() && g.n_vertices() > 1 {
        // cannot happen for a connected graph; kept as a guard
        return Err(Error::NoSpanningTree);
    }
    Ok(det)
}

/// Dual graph polynomial as the sum over spanning trees of the product of
/// tree-edge variables, parallel edges counted as distinct trees. Computed by
/// deletion-contraction.
pub fn dual_polynomial_trees(g: &Multigraph) -> Result<ExactPolynomial> {
    if !g.is_connected() {
        return Err(Error::NoSpanningTree);
    }
    let edges = g.edge_list();
    let nvars = edges.len();
    let labeled: Vec<(usize, usize, usize)> =
        edges.iter().enumerate().map(|(e, &(i, j))| (i, j, e)).collect();
    Ok(delete_contract(g.n_vertices(), &labeled, nvars))
}

/// Spanning-tree polynomial of a working graph given as `(u, v, var)` edges
/// over `n` live vertices: trees(G) = trees(G - e) + a_e * trees(G / e).
fn delete_contract(n: usize, edges: &[(usize, usize, usize)], nvars: usize) -> ExactPolynomial {
    if n == 1 {
        return ExactPolynomial::one(nvars);
    }
    if edges.len() < n - 1 {
        return ExactPolynomial::zero(nvars);
    }
    let (u, v, var) = edges[0];
    let rest = &edges[1..];

    // contract: merge v into u, drop resulting self-loops
    let mut contracted = Vec::with_capacity(rest.len());
    for &(a, b, e) in rest {
        let a2 = relabel_after_merge(a, u, v);
        let b2 = relabel_after_merge(b, u, v);
        if a2 != b2 {
            contracted.push((a2, b2, e));
        }
    }
    let with_edge = delete_contract(n - 1, &contracted, nvars);
    let without_edge = delete_contract(n, rest, nvars);
    &(&ExactPolynomial::var(nvars, var) * &with_edge) + &without_edge
}

fn relabel_after_merge(x: usize, into: usize, gone: usize) -> usize {
    // `into` itself shifts down when it sits above the removed vertex
    let target = if into > gone { into - 1 } else { into };
    if x == gone {
        target
    } else if x > gone {
        x - 1
    } else {
        x
    }
}
