//! Combinatorics of the renormalization-group generator: the coproduct on
//! vertex monomials induced by Taylor expansion, and the vertex-partition
//! expansion whose leaves carry either a residue constant or a pending
//! extension problem.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::power::{divergence_degree, is_eg_primitive, require_dimension};
use crate::quad::{evaluate_period, QuadratureConfig};
use crate::residue::{residue_from_period, ResidueValue};

/// Partition enumeration is capped at this many vertices (Bell numbers grow
/// fast: Bell(12) is already above four million terms).
pub const PARTITION_CAP: usize = 12;

/// Commutative monomial in decorated field factors, e.g. `phi^4` or
/// `phi^2*dphi^1`. Labels are opaque; derivative decorations are distinct
/// labels, which is all the coproduct coefficients need. The empty map is
/// the unit monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexMonomial {
    factors: BTreeMap<String, u32>,
}

impl VertexMonomial {
    pub fn unit() -> Self {
        VertexMonomial::default()
    }

    pub fn from_factors<I, S>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (label, power) in factors {
            let label = label.into();
            if power == 0 {
                return Err(Error::InvalidArgument(format!(
                    "factor {label} has multiplicity 0"
                )));
            }
            *map.entry(label).or_insert(0) += power;
        }
        Ok(VertexMonomial { factors: map })
    }

    /// Single label raised to a power, e.g. `phi^4`.
    pub fn power(label: impl Into<String>, power: u32) -> Result<Self> {
        VertexMonomial::from_factors([(label.into(), power)])
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&str, u32)> {
        self.factors.iter().map(|(l, &p)| (l.as_str(), p))
    }
}

impl fmt::Display for VertexMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let rendered: Vec<String> = self
            .factors
            .iter()
            .map(|(label, power)| format!("{label}^{power}"))
            .collect();
        write!(f, "{}", rendered.join("*"))
    }
}

/// All divisor monomials of `p`, from the unit up to `p` itself, in
/// lexicographic order of the exponent tuples. Count is the product of
/// `multiplicity + 1` over the labels.
pub fn wick_submonomials(p: &VertexMonomial) -> Vec<VertexMonomial> {
    let labels: Vec<(&String, u32)> = p.factors.iter().map(|(l, &m)| (l, m)).collect();
    let mut exponents = vec![0u32; labels.len()];
    let mut out = Vec::new();
    loop {
        let factors: BTreeMap<String, u32> = labels
            .iter()
            .zip(&exponents)
            .filter(|(_, &e)| e > 0)
            .map(|((l, _), &e)| ((*l).clone(), e))
            .collect();
        out.push(VertexMonomial { factors });
        let mut pos = exponents.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if exponents[pos] < labels[pos].1 {
                exponents[pos] += 1;
                for e in exponents.iter_mut().skip(pos + 1) {
                    *e = 0;
                }
                break;
            }
            exponents[pos] = 0;
        }
    }
}

/// One summand of the coproduct: `coefficient * left (x) right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductTerm {
    pub coefficient: u64,
    pub left: VertexMonomial,
    pub right: VertexMonomial,
}

/// Coproduct induced by Taylor expansion: one term per Wick submonomial `q`
/// of `p`, weighted by the number of embeddings of `q` into `p`, which is a
/// product of binomial coefficients. Coefficients over all terms sum to
/// `2^degree`.
pub fn coproduct(p: &VertexMonomial) -> Vec<CoproductTerm> {
    wick_submonomials(p)
        .into_iter()
        .map(|q| {
            let mut coefficient = 1u64;
            let mut left = BTreeMap::new();
            for (label, &n) in &p.factors {
                let m = q.factors.get(label).copied().unwrap_or(0);
                coefficient *= binomial(n, m);
                if n > m {
                    left.insert(label.clone(), n - m);
                }
            }
            CoproductTerm { coefficient, left: VertexMonomial { factors: left }, right: q }
        })
        .collect()
}

fn binomial(n: u32, k: u32) -> u64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// What a partition-block leaf contributes to the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafStatus {
    /// Primitive block: its contribution is the residue constant, available
    /// from [`primitive_beta_value`].
    PrimitiveWithResidue,
    /// Non-primitive block: renormalizing it needs the distribution
    /// extension machinery, outside the scope of this crate.
    RequiresExtension,
}

impl LeafStatus {
    pub fn name(&self) -> &'static str {
        match self {
            LeafStatus::PrimitiveWithResidue => "primitive-with-residue",
            LeafStatus::RequiresExtension => "requires-extension",
        }
    }
}

/// One summand of the partition expansion: a vertex partition, the quotient
/// graph of inter-block edges, and the intra-block graphs with their leaf
/// statuses. The quotient and block edge sets partition the edges of the
/// original graph.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaTerm {
    /// Blocks as sorted vertex lists, ordered by first occurrence.
    pub partition: Vec<Vec<usize>>,
    /// Graph on the full vertex set keeping only inter-block edges.
    pub quotient: Multigraph,
    /// Induced intra-block graph per block, vertices relabeled 0..block len.
    pub block_graphs: Vec<Multigraph>,
    /// Per-block classification at the requested dimension.
    pub leaf_status: Vec<LeafStatus>,
}

/// Expands the generator of a graph over all partitions of its vertex set
/// except the all-singletons partition, in restricted-growth-string order.
/// Purely combinatorial: numeric residues are attached by the caller where
/// a leaf is primitive.
pub fn beta_expansion(g: &Multigraph, d: u32) -> Result<Vec<BetaTerm>> {
    require_dimension(d)?;
    if !g.is_connected() {
        return Err(Error::InvalidArgument(
            "beta expansion expects a connected graph".into(),
        ));
    }
    let n = g.n_vertices();
    if n > PARTITION_CAP {
        return Err(Error::CapacityExceeded(format!(
            "partition enumeration is capped at {PARTITION_CAP} vertices"
        )));
    }

    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        if !is_all_singletons(&rgs) {
            out.push(build_term(g, d, &rgs)?);
        }
        if !next_restricted_growth(&mut rgs) {
            break;
        }
    }
    Ok(out)
}

fn is_all_singletons(rgs: &[usize]) -> bool {
    rgs.iter().enumerate().all(|(i, &b)| b == i)
}

/// Advances a restricted growth string in lexicographic order: each digit
/// may exceed the running prefix maximum by at most one.
fn next_restricted_growth(rgs: &mut [usize]) -> bool {
    let n = rgs.len();
    let mut pos = n;
    while pos > 1 {
        pos -= 1;
        let prefix_max = rgs[..pos].iter().copied().max().unwrap_or(0);
        if rgs[pos] <= prefix_max {
            rgs[pos] += 1;
            for digit in rgs.iter_mut().skip(pos + 1) {
                *digit = 0;
            }
            return true;
        }
    }
    false
}

fn build_term(g: &Multigraph, d: u32, rgs: &[usize]) -> Result<BetaTerm> {
    let n_blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
    let mut partition: Vec<Vec<usize>> = vec![Vec::new(); n_blocks];
    for (vertex, &block) in rgs.iter().enumerate() {
        partition[block].push(vertex);
    }

    let n = g.n_vertices();
    let mut inter_block_edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rgs[i] != rgs[j] {
                for _ in 0..g.multiplicity(i, j) {
                    inter_block_edges.push((i, j));
                }
            }
        }
    }
    let quotient = Multigraph::from_edges(n, &inter_block_edges)?;

    let mut block_graphs = Vec::with_capacity(n_blocks);
    let mut leaf_status = Vec::with_capacity(n_blocks);
    for block in &partition {
        let subset = crate::graph::VertexSubset::new(block.iter().copied())?;
        let sub = g.induced_subgraph(&subset)?;
        let status = if is_eg_primitive(&sub, d) {
            LeafStatus::PrimitiveWithResidue
        } else {
            LeafStatus::RequiresExtension
        };
        block_graphs.push(sub);
        leaf_status.push(status);
    }

    Ok(BetaTerm { partition, quotient, block_graphs, leaf_status })
}

/// Contribution kernel of a primitive graph to the generator: the residue
/// constant, obtained by evaluating the period and converting. Uses the
/// dimension-appropriate default quadrature; see
/// [`primitive_beta_value_with`] to control the resolution.
pub fn primitive_beta_value(g: &Multigraph, d: u32) -> Result<ResidueValue> {
    primitive_beta_value_with(g, d, &QuadratureConfig::default_for(g))
}

/// As [`primitive_beta_value`] with an explicit quadrature configuration.
pub fn primitive_beta_value_with(
    g: &Multigraph,
    d: u32,
    cfg: &QuadratureConfig,
) -> Result<ResidueValue> {
    require_dimension(d)?;
    if !is_eg_primitive(g, d) {
        return Err(Error::RequiresExtension {
            dimension: d,
            divergence_degree: divergence_degree(g, d),
        });
    }
    let period = evaluate_period(g, d, cfg)?;
    residue_from_period(g, d, period.value)
}
