//! Periods and distributional residues of position-space Feynman graphs.
//!
//! The crate computes, for tadpole-free multigraphs:
//!
//! * dual graph polynomials by spanning-tree enumeration and, independently,
//!   as Kirchhoff-matrix minor determinants in exact integer arithmetic;
//! * scaling/divergence degrees and the primitivity classification that
//!   decides whether a graph's residue is a single number;
//! * the period integral over the Feynman simplex, by deterministic
//!   tensor-product Gauss-Legendre quadrature or seeded Monte Carlo;
//! * residue constants in exact structured form (`i^k * rational * pi^m`
//!   times an optional transcendental factor), including the closed form
//!   for banana graphs and the propagator and sphere-volume constants;
//! * the coproduct on vertex monomials and the vertex-partition expansion
//!   of the renormalization-group generator.
//!
//! All types are immutable after construction and every operation is pure,
//! so everything here is safe to call concurrently.

pub mod error;
pub mod graph;
pub mod poly;
pub mod power;
pub mod quad;
pub mod residue;
pub mod rg;

pub use error::{Error, Result};
pub use graph::{are_isomorphic, enumerate_graphs, Multigraph, VertexSubset};
pub use poly::{dual_polynomial_minor, dual_polynomial_trees, kirchhoff_matrix, ExactPolynomial};
pub use power::{
    has_critical_edge_count, period_convergence_precheck, power_count, PowerCountReport,
};
pub use quad::{
    evaluate_period, period_integrand, triangle_reference_integral, PeriodEstimate, QuadMethod,
    QuadratureConfig,
};
pub use residue::{
    banana_residue, hadamard_big_f, hadamard_f, propagator_constant, residue_from_period,
    sphere_volume, DiffOpResidue, ResidueValue, SeriesEval,
};
pub use rg::{
    beta_expansion, coproduct, primitive_beta_value, primitive_beta_value_with,
    wick_submonomials, BetaTerm, CoproductTerm, LeafStatus, VertexMonomial,
};
