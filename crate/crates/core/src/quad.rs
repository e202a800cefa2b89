//! Numerical evaluation of the period integral over the Feynman simplex.
//!
//! The integrand is `prod_e a_e^(D/2-2) / Psi(a)^(D/2)` against the flat
//! measure on the simplex `{a_e > 0, sum a_e = 1}`, with `Psi` the dual graph
//! polynomial. Two methods are provided:
//!
//! * `gauss-tensor` eliminates the last edge variable, maps the remaining
//!   simplex to the unit cube by stick breaking and applies a tensorized
//!   Gauss-Legendre rule; the error estimate is the difference against a
//!   half-resolution grid.
//! * `monte-carlo` samples the simplex uniformly via exponential spacings
//!   and averages the integrand; the error estimate is the standard error.
//!
//! Monte Carlo runs are partitioned into `workers` independent RNG streams
//! derived from the seed, and stream results are reduced in a fixed order,
//! so output is bit-reproducible for a fixed `(seed, workers)` pair.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::poly::{dual_polynomial_trees, ExactPolynomial};
use crate::power::{divergence_degree, period_convergence_precheck, require_dimension};

/// Smallest admissible simplex coordinate; Monte Carlo redraws points below.
const MIN_COORDINATE: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadMethod {
    GaussTensor,
    MonteCarlo,
}

impl QuadMethod {
    pub fn name(&self) -> &'static str {
        match self {
            QuadMethod::GaussTensor => "gauss-tensor",
            QuadMethod::MonteCarlo => "monte-carlo",
        }
    }
}

/// Method and resolution for one period evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub method: QuadMethod,
    /// Gauss-Legendre points per cube axis.
    pub points_per_axis: usize,
    /// Monte Carlo sample count.
    pub samples: u64,
    pub rng_seed: u64,
    /// Number of independent Monte Carlo streams.
    pub workers: usize,
}

impl QuadratureConfig {
    pub fn gauss(points_per_axis: usize) -> Self {
        QuadratureConfig {
            method: QuadMethod::GaussTensor,
            points_per_axis,
            samples: 10_000_000,
            rng_seed: 0,
            workers: 1,
        }
    }

    pub fn monte_carlo(samples: u64, rng_seed: u64, workers: usize) -> Self {
        QuadratureConfig {
            method: QuadMethod::MonteCarlo,
            points_per_axis: 64,
            samples,
            rng_seed,
            workers,
        }
    }

    /// Default resolution by integral dimension: 64 Gauss points per axis up
    /// to 3 free variables, 24 up to 5, Monte Carlo beyond.
    pub fn default_for(g: &Multigraph) -> Self {
        match g.edge_count().saturating_sub(1) {
            0..=3 => QuadratureConfig::gauss(64),
            4..=5 => QuadratureConfig::gauss(24),
            _ => QuadratureConfig::monte_carlo(10_000_000, 0, 4),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            QuadMethod::GaussTensor if self.points_per_axis < 2 => Err(Error::InvalidArgument(
                "gauss-tensor needs at least 2 points per axis".into(),
            )),
            QuadMethod::MonteCarlo if self.samples < 1000 => Err(Error::InvalidArgument(
                "monte-carlo needs at least 1000 samples".into(),
            )),
            QuadMethod::MonteCarlo if self.workers < 1 => Err(Error::InvalidArgument(
                "monte-carlo needs at least one worker".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Result of one period evaluation. For Gauss the error field is the
/// Richardson-style difference between the two refinement levels; for Monte
/// Carlo it is the standard error of the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub method: QuadMethod,
    pub evaluations: u64,
}

/// Dual polynomial compiled to a flat term list for fast evaluation. Spanning
/// tree monomials are squarefree, so each term is a plain variable product.
struct PsiEvaluator {
    terms: Vec<Vec<u16>>,
}

impl PsiEvaluator {
    fn compile(psi: &ExactPolynomial) -> Self {
        let mut terms = Vec::with_capacity(psi.nterms());
        for (exps, _) in psi.terms() {
            let mut vars = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                debug_assert!(e <= 1, "spanning-tree monomials are squarefree");
                if e == 1 {
                    vars.push(i as u16);
                }
            }
            terms.push(vars);
        }
        PsiEvaluator { terms }
    }

    fn eval(&self, alpha: &[f64]) -> f64 {
        let mut acc = 0.0;
        for vars in &self.terms {
            let mut term = 1.0;
            for &v in vars {
                term *= alpha[v as usize];
            }
            acc += term;
        }
        acc
    }
}

fn integrand_value(
    evaluator: &PsiEvaluator,
    alpha: &[f64],
    measure_exp: i32,
    half_d: i32,
) -> Result<f64> {
    let psi = evaluator.eval(alpha);
    if psi == 0.0 {
        return Err(Error::SingularPoint { point: alpha.to_vec() });
    }
    let mut numerator = 1.0;
    if measure_exp > 0 {
        for &a in alpha {
            numerator *= a.powi(measure_exp);
        }
    }
    let value = numerator / psi.powi(half_d);
    if !value.is_finite() {
        return Err(Error::NumericalFailure { point: alpha.to_vec() });
    }
    Ok(value)
}

/// Evaluates `prod_e a_e^(D/2-2) / Psi(a)^(D/2)` at a point strictly inside
/// the simplex.
pub fn period_integrand(g: &Multigraph, d: u32, alpha: &[f64]) -> Result<f64> {
    require_dimension(d)?;
    if alpha.len() != g.edge_count() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, graph has {} edges",
            alpha.len(),
            g.edge_count()
        )));
    }
    if alpha.iter().any(|&a| a <= 0.0) {
        return Err(Error::InvalidArgument(
            "point is not strictly inside the simplex".into(),
        ));
    }
    let total: f64 = alpha.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "simplex coordinates sum to {total}, expected 1"
        )));
    }
    let psi = dual_polynomial_trees(g)?;
    let evaluator = PsiEvaluator::compile(&psi);
    integrand_value(&evaluator, alpha, d as i32 / 2 - 2, d as i32 / 2)
}

/// Evaluates the period integral. Refuses graphs that fail the convergence
/// precheck.
pub fn evaluate_period(g: &Multigraph, d: u32, cfg: &QuadratureConfig) -> Result<PeriodEstimate> {
    require_dimension(d)?;
    cfg.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::InvalidArgument(
            "graph has no edges: the period integral is empty".into(),
        ));
    }
    let psi = dual_polynomial_trees(g)?; // disconnected -> no spanning tree
    if !period_convergence_precheck(g, d) {
        return Err(Error::DivergentPeriod(format!(
            "convergence precheck failed at D={d}: divergence degree {} \
             (needs 0 with all proper subgraphs convergent)",
            divergence_degree(g, d)
        )));
    }
    let evaluator = PsiEvaluator::compile(&psi);
    let measure_exp = d as i32 / 2 - 2;
    let half_d = d as i32 / 2;
    let free_dims = g.edge_count() - 1;

    match cfg.method {
        QuadMethod::GaussTensor => {
            if free_dims == 0 {
                // single-edge graph; never passes the precheck, kept total
                let value = integrand_value(&evaluator, &[1.0], measure_exp, half_d)?;
                return Ok(PeriodEstimate {
                    value,
                    error_estimate: 0.0,
                    method: QuadMethod::GaussTensor,
                    evaluations: 1,
                });
            }
            let fine = cfg.points_per_axis;
            let coarse = (fine / 2).max(2);
            let fine_value = gauss_tensor(&evaluator, measure_exp, half_d, free_dims, fine)?;
            let coarse_value = gauss_tensor(&evaluator, measure_exp, half_d, free_dims, coarse)?;
            Ok(PeriodEstimate {
                value: fine_value,
                error_estimate: (fine_value - coarse_value).abs(),
                method: QuadMethod::GaussTensor,
                evaluations: (fine.pow(free_dims as u32) + coarse.pow(free_dims as u32)) as u64,
            })
        }
        QuadMethod::MonteCarlo => {
            monte_carlo(&evaluator, measure_exp, half_d, g.edge_count(), cfg)
        }
    }
}

/// Stick-breaking map from the open unit cube to the open simplex:
/// `a_i = t_i * prod_{j<i} (1 - t_j)`, last coordinate takes the remainder.
/// Returns the Jacobian of the free coordinates.
fn stick_breaking(t: &[f64], alpha: &mut [f64]) -> f64 {
    let m = t.len();
    debug_assert_eq!(alpha.len(), m + 1);
    let mut remaining = 1.0;
    let mut jacobian = 1.0;
    for (i, &ti) in t.iter().enumerate() {
        alpha[i] = ti * remaining;
        remaining *= 1.0 - ti;
        let power = (m - 1 - i) as i32;
        if power > 0 {
            jacobian *= (1.0 - ti).powi(power);
        }
    }
    alpha[m] = remaining;
    jacobian
}

fn gauss_tensor(
    evaluator: &PsiEvaluator,
    measure_exp: i32,
    half_d: i32,
    m: usize,
    points: usize,
) -> Result<f64> {
    let (nodes, weights) = gauss_legendre_01(points);
    // parallel over the first axis; inner axes run sequentially per task and
    // partial sums combine in index order, so the result does not depend on
    // the thread schedule
    let partials: Vec<Result<f64>> = (0..points)
        .into_par_iter()
        .map(|first| {
            let mut t = vec![0.0f64; m];
            let mut alpha = vec![0.0f64; m + 1];
            let mut idx = vec![0usize; m - 1];
            t[0] = nodes[first];
            let mut local = 0.0;
            'outer: loop {
                for (axis, &i) in idx.iter().enumerate() {
                    t[axis + 1] = nodes[i];
                }
                let mut weight = weights[first];
                for &i in idx.iter() {
                    weight *= weights[i];
                }
                let jacobian = stick_breaking(&t, &mut alpha);
                let f = integrand_value(evaluator, &alpha, measure_exp, half_d)?;
                local += weight * jacobian * f;
                // odometer over the inner axes
                let mut axis = idx.len();
                loop {
                    if axis == 0 {
                        break 'outer;
                    }
                    axis -= 1;
                    idx[axis] += 1;
                    if idx[axis] < points {
                        break;
                    }
                    idx[axis] = 0;
                }
            }
            Ok(local)
        })
        .collect();

    let mut total = 0.0;
    for partial in partials {
        total += partial?;
    }
    Ok(total)
}

fn monte_carlo(
    evaluator: &PsiEvaluator,
    measure_exp: i32,
    half_d: i32,
    n_edges: usize,
    cfg: &QuadratureConfig,
) -> Result<PeriodEstimate> {
    let workers = cfg.workers as u64;
    let base = cfg.samples / workers;
    let extra = cfg.samples % workers;

    let stream_sums: Vec<Result<(f64, f64)>> = (0..cfg.workers)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(stream as u64);
            let count = base + u64::from((stream as u64) < extra);
            let mut alpha = vec![0.0f64; n_edges];
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                sample_simplex(&mut rng, &mut alpha);
                let f = integrand_value(evaluator, &alpha, measure_exp, half_d)?;
                sum += f;
                sum_sq += f * f;
            }
            Ok((sum, sum_sq))
        })
        .collect();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for s in stream_sums {
        let (a, b) = s?;
        sum += a;
        sum_sq += b;
    }
    let n = cfg.samples as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    // uniform-on-the-simplex density is (k-1)! relative to the flat measure
    let volume_factor = factorial(n_edges - 1);
    Ok(PeriodEstimate {
        value: mean / volume_factor,
        error_estimate: (variance / n).sqrt() / volume_factor,
        method: QuadMethod::MonteCarlo,
        evaluations: cfg.samples,
    })
}

/// Uniform point on the open simplex via normalized exponential spacings;
/// redraws if any coordinate underflows below [`MIN_COORDINATE`].
fn sample_simplex(rng: &mut ChaCha8Rng, alpha: &mut [f64]) {
    loop {
        let mut total = 0.0;
        for a in alpha.iter_mut() {
            let u: f64 = rng.random();
            let e = -(1.0 - u).ln();
            *a = e;
            total += e;
        }
        for a in alpha.iter_mut() {
            *a /= total;
        }
        if alpha.iter().all(|&a| a >= MIN_COORDINATE) {
            return;
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Gauss-Legendre nodes and weights on `(0, 1)`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_01(points: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(points >= 1);
    let n = points;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        // reverse so nodes come out ascending on (0, 1)
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Reference value for the 6-dimensional triangle period via its reduced
/// two-variable rational form, independent of the simplex pipeline.
/// `samples` sets the total point budget of the tensor rule.
pub fn triangle_reference_integral(samples: u64) -> Result<f64> {
    if samples < 1000 {
        return Err(Error::InvalidArgument(
            "reference integral needs at least 1000 sample points".into(),
        ));
    }
    let p = ((samples as f64).sqrt().floor() as usize).max(2);
    let (nodes, weights) = gauss_legendre_01(p);
    let mut total = 0.0;
    for (i, &lambda) in nodes.iter().enumerate() {
        let mut inner = 0.0;
        for (j, &kappa) in nodes.iter().enumerate() {
            inner += weights[j] * triangle_reference_integrand(lambda, kappa);
        }
        total += weights[i] * inner;
    }
    Ok(total)
}

/// Integrand of the reduced triangle form on the open unit square. The
/// substitution `a1 = lambda*kappa, a2 = (1-lambda)*kappa, a3 = 1-kappa`
/// carries a Jacobian factor `kappa`, included here; the inner `kappa`
/// integral is exactly 1/2 for every `lambda`.
pub fn triangle_reference_integrand(lambda: f64, kappa: f64) -> f64 {
    let c = lambda * (1.0 - lambda);
    let numerator = c * kappa.powi(3) * (1.0 - kappa);
    let denominator = c * kappa * kappa + kappa * (1.0 - kappa);
    numerator / denominator.powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn gauss_legendre_small_rules() {
        let (x, w) = gauss_legendre_01(2);
        let d = 0.5 / f64::sqrt(3.0);
        assert!((x[0] - (0.5 - d)).abs() < 1e-14);
        assert!((x[1] - (0.5 + d)).abs() < 1e-14);
        assert!((w[0] - 0.5).abs() < 1e-14 && (w[1] - 0.5).abs() < 1e-14);

        let (x, w) = gauss_legendre_01(3);
        assert!((x[1] - 0.5).abs() < 1e-14);
        assert!((w[1] - 4.0 / 9.0).abs() < 1e-14);
        assert!((w[0] - 5.0 / 18.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // degree 2p-1 exactness: x^9 with p = 5
        let (x, w) = gauss_legendre_01(5);
        let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(9)).sum();
        assert!((integral - 0.1).abs() < 1e-14);
    }

    #[test]
    fn integrand_hand_values() {
        assert!((period_integrand(&fish(), 4, &[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert!((period_integrand(&fish(), 4, &[0.9, 0.1]).unwrap() - 1.0).abs() < 1e-15);
        let third = 1.0 / 3.0;
        let v = period_integrand(&triangle(), 6, &[third, third, third]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrand_rejects_points_off_the_simplex() {
        assert!(period_integrand(&fish(), 4, &[0.5, 0.4]).is_err());
        assert!(period_integrand(&fish(), 4, &[1.0, 0.0]).is_err());
        assert!(period_integrand(&fish(), 4, &[0.5]).is_err());
    }

    #[test]
    fn integrand_reports_underflow_as_singular() {
        // all dual-polynomial monomials have degree 3; pushing five
        // coordinates to 1e-200 underflows every term to zero
        let mut alpha = vec![1e-200; 6];
        alpha[5] = 1.0 - 5e-200;
        let err = period_integrand(&wheel3(), 4, &alpha).unwrap_err();
        assert!(matches!(err, Error::SingularPoint { .. }));
    }

    #[test]
    fn fish_period_is_exactly_one_for_both_methods() {
        let gauss = evaluate_period(&fish(), 4, &QuadratureConfig::gauss(16)).unwrap();
        assert!((gauss.value - 1.0).abs() < 1e-12);
        assert!(gauss.error_estimate < 1e-12);

        let mc =
            evaluate_period(&fish(), 4, &QuadratureConfig::monte_carlo(10_000, 7, 2)).unwrap();
        assert!((mc.value - 1.0).abs() < 1e-12);
        assert!(mc.error_estimate < 1e-12);
        assert_eq!(mc.evaluations, 10_000);
    }

    #[test]
    fn triangle_period_converges_to_one_half() {
        let est = evaluate_period(&triangle(), 6, &QuadratureConfig::gauss(64)).unwrap();
        assert!((est.value - 0.5).abs() < 1e-4, "value {}", est.value);
        assert!(est.error_estimate > (est.value - 0.5).abs());
        assert_eq!(est.evaluations, 64 * 64 + 32 * 32);
    }

    #[test]
    fn divergent_graphs_are_refused() {
        let err = evaluate_period(&banana(3), 4, &QuadratureConfig::gauss(8)).unwrap_err();
        assert!(matches!(err, Error::DivergentPeriod(_)));
        let err = evaluate_period(&banana(4), 4, &QuadratureConfig::gauss(8)).unwrap_err();
        assert!(matches!(err, Error::DivergentPeriod(_)));
    }

    #[test]
    fn disconnected_and_edgeless_are_refused() {
        let g = Multigraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            evaluate_period(&g, 4, &QuadratureConfig::gauss(8)).unwrap_err(),
            Error::NoSpanningTree
        );
        let k1 = Multigraph::edgeless(1).unwrap();
        assert!(matches!(
            evaluate_period(&k1, 4, &QuadratureConfig::gauss(8)).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn monte_carlo_is_reproducible_per_seed_and_workers() {
        let cfg = QuadratureConfig::monte_carlo(50_000, 42, 4);
        let a = evaluate_period(&wheel3(), 4, &cfg).unwrap();
        let b = evaluate_period(&wheel3(), 4, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
        // a different worker split is a different deterministic result
        let c =
            evaluate_period(&wheel3(), 4, &QuadratureConfig::monte_carlo(50_000, 42, 3)).unwrap();
        assert_ne!(a.value.to_bits(), c.value.to_bits());
    }

    #[test]
    fn gauss_is_independent_of_thread_schedule() {
        let cfg = QuadratureConfig::gauss(24);
        let a = evaluate_period(&triangle(), 6, &cfg).unwrap();
        let b = evaluate_period(&triangle(), 6, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::gauss(1).validate().is_err());
        assert!(QuadratureConfig::monte_carlo(10, 0, 1).validate().is_err());
        assert!(QuadratureConfig::monte_carlo(5000, 0, 0).validate().is_err());
        assert!(QuadratureConfig::default_for(&fish()).validate().is_ok());
    }

    #[test]
    fn default_config_scales_with_dimension() {
        assert_eq!(QuadratureConfig::default_for(&fish()).points_per_axis, 64);
        assert_eq!(QuadratureConfig::default_for(&wheel3()).points_per_axis, 24);
        let big = Multigraph::from_edges(2, &[(0, 1); 8]).unwrap();
        assert_eq!(QuadratureConfig::default_for(&big).method, QuadMethod::MonteCarlo);
    }

    #[test]
    fn reference_integral_matches_known_value() {
        let v = triangle_reference_integral(1_000_000).unwrap();
        assert!((v - 0.5).abs() < 1e-5, "value {v}");
        assert!(triangle_reference_integral(10).is_err());
    }

    #[test]
    fn reference_integrand_hand_values() {
        // c = 1/4, kappa = 1/2: (1/4)(1/8)(1/2) / (1/16 + 1/4)^3 = 0.512
        let v = triangle_reference_integrand(0.5, 0.5);
        assert!((v - 0.512).abs() < 1e-15);
        // kappa -> 1 kills the numerator
        assert!(triangle_reference_integrand(0.5, 1.0).abs() < 1e-15);
        // kappa -> 0 tends to lambda(1-lambda), staying bounded
        let v = triangle_reference_integrand(0.3, 1e-9);
        assert!((v - 0.21).abs() < 1e-6);
    }

    #[test]
    fn dual_polynomial_is_automorphism_invariant_at_sample_points() {
        let psi = dual_polynomial_trees(&wheel3()).unwrap();
        let ev = PsiEvaluator::compile(&psi);
        // rotating the rim 0->1->2->0 maps the edge list onto itself:
        // (01,02,03,12,13,23) -> (12,01,13,02,23,03)
        let alpha = [0.1, 0.2, 0.15, 0.25, 0.05, 0.25];
        let rotated = [alpha[3], alpha[0], alpha[4], alpha[1], alpha[5], alpha[2]];
        assert!((ev.eval(&alpha) - ev.eval(&rotated)).abs() < 1e-15);
    }
}
