//! `frl` — periods and distributional residues of Feynman graphs from the
//! command line. Every subcommand prints a single JSON document on stdout;
//! domain errors come back as machine-readable JSON with a nonzero exit
//! code (2 parse, 3 domain, 4 numerical).

mod cache;
mod corpus;
mod dsl;
mod errors;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use frl_core::{
    banana_residue, beta_expansion, coproduct, evaluate_period, power_count,
    residue_from_period, Multigraph, PeriodEstimate, QuadMethod, QuadratureConfig,
};
use serde_json::Value;

use errors::CliError;

#[derive(Parser)]
#[command(
    name = "frl",
    version,
    about = "Feynman graph periods, power counting and distributional residues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Result cache file; FRL_CACHE is consulted when absent.
    #[arg(long, global = true, value_name = "PATH")]
    cache_path: Option<PathBuf>,

    /// Skip reading and writing the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Gauss,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyRoute {
    Trees,
    Minor,
}

#[derive(Subcommand)]
enum Command {
    /// Power-counting report for a graph at a given dimension.
    Classify {
        /// Graph in the DSL `n=<int>; e=<i>-<j>,...` or JSON form.
        graph: String,
        #[arg(long = "dim")]
        dimension: u32,
    },
    /// Dual graph polynomial via spanning trees or a Laplacian minor.
    Poly {
        graph: String,
        #[arg(long, value_enum, default_value = "trees")]
        method: PolyRoute,
        /// Root vertex for the minor route.
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Period integral of a primitive graph.
    Period {
        graph: String,
        #[arg(long = "dim")]
        dimension: u32,
        /// Quadrature method; defaults by integral dimension.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Gauss points per axis.
        #[arg(long)]
        points: Option<usize>,
        /// Monte Carlo sample count.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo stream count; results are reproducible per
        /// (seed, workers).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Residue constant of a primitive graph (runs the period if needed).
    Residue {
        graph: String,
        #[arg(long = "dim")]
        dimension: u32,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Closed-form residue of the two-vertex banana graph.
    Banana {
        /// Number of parallel lines.
        #[arg(long)]
        edges: u32,
        #[arg(long = "dim")]
        dimension: u32,
    },
    /// Coproduct of a vertex monomial, e.g. "phi^4".
    Coproduct { monomial: String },
    /// Vertex-partition expansion of the renormalization-group generator.
    Beta {
        graph: String,
        #[arg(long = "dim")]
        dimension: u32,
    },
    /// Bundled known-period table; --verify recomputes every entry.
    Corpus {
        #[arg(long)]
        verify: bool,
        /// Additional user corpus (JSON lines).
        #[arg(long, value_name = "PATH")]
        file: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache_path = cache::resolve_path(cli.cache_path.clone(), cli.no_cache);
    match run(cli.command, cache_path) {
        Ok((value, code)) => {
            output::print_value(&value);
            ExitCode::from(code)
        }
        Err(err) => {
            output::print_value(&output::error_json(&err));
            ExitCode::from(err.exit_code())
        }
    }
}

fn ok(value: Value) -> Result<(Value, u8), CliError> {
    Ok((value, 0))
}

fn run(command: Command, cache_path: Option<PathBuf>) -> Result<(Value, u8), CliError> {
    match command {
        Command::Classify { graph, dimension } => {
            let g = dsl::parse_graph(&graph)?;
            let report = power_count(&g, dimension)?;
            let critical = frl_core::has_critical_edge_count(&g, dimension);
            ok(output::power_count_json(&g, &report, critical))
        }
        Command::Poly { graph, method, root } => {
            let g = dsl::parse_graph(&graph)?;
            let (psi, route) = match method {
                PolyRoute::Trees => (frl_core::dual_polynomial_trees(&g)?, "trees"),
                PolyRoute::Minor => (frl_core::dual_polynomial_minor(&g, root)?, "minor"),
            };
            let mut body = serde_json::json!({
                "graph": dsl::graph_to_json(&g),
                "method": route,
                "polynomial": psi.render(),
                "terms": psi.nterms(),
                "degree": psi.total_degree(),
            });
            if matches!(method, PolyRoute::Minor) {
                body["root"] = serde_json::json!(root);
            }
            ok(body)
        }
        Command::Period { graph, dimension, method, points, samples, seed, workers } => {
            let g = dsl::parse_graph(&graph)?;
            let cfg = build_config(&g, method, points, samples, seed, workers);
            let (estimate, _) = period_with_cache(&g, dimension, &cfg, cache_path.as_deref())?;
            ok(output::period_json(&g, dimension, &cfg, &estimate))
        }
        Command::Residue { graph, dimension, method, points, samples, seed, workers } => {
            let g = dsl::parse_graph(&graph)?;
            let cfg = build_config(&g, method, points, samples, seed, workers);
            let (estimate, _) = period_with_cache(&g, dimension, &cfg, cache_path.as_deref())?;
            let residue = residue_from_period(&g, dimension, estimate.value)?;
            ok(serde_json::json!({
                "graph": dsl::graph_to_json(&g),
                "dimension": dimension,
                "period": output::period_json(&g, dimension, &cfg, &estimate),
                "residue": output::residue_json(&residue),
            }))
        }
        Command::Banana { edges, dimension } => {
            let residue = banana_residue(edges, dimension)?;
            ok(output::banana_json(edges, dimension, &residue))
        }
        Command::Coproduct { monomial } => {
            let m = dsl::parse_monomial(&monomial)?;
            let terms = coproduct(&m);
            ok(output::coproduct_json(&m, &terms))
        }
        Command::Beta { graph, dimension } => {
            let g = dsl::parse_graph(&graph)?;
            let terms = beta_expansion(&g, dimension)?;
            ok(output::beta_json(&g, dimension, &terms))
        }
        Command::Corpus { verify, file } => {
            let mut entries = corpus::bundled_entries();
            if let Some(path) = file {
                entries.extend(corpus::load_user_corpus(&path)?);
            }
            if !verify {
                return ok(corpus::listing(&entries));
            }
            let outcome = corpus::verify(&entries)?;
            // the report itself is the machine-readable result either way;
            // misses surface through the exit code
            let code = if outcome.failed > 0 { errors::EXIT_NUMERICAL } else { 0 };
            Ok((outcome.report, code))
        }
    }
}

fn build_config(
    g: &Multigraph,
    method: Option<MethodArg>,
    points: Option<usize>,
    samples: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> QuadratureConfig {
    // points default scales with the number of free integration variables
    let default_points = if g.edge_count().saturating_sub(1) <= 3 { 64 } else { 24 };
    let mut cfg = match method {
        Some(MethodArg::Gauss) => QuadratureConfig::gauss(default_points),
        Some(MethodArg::Mc) => QuadratureConfig::monte_carlo(10_000_000, 0, 4),
        None => QuadratureConfig::default_for(g),
    };
    if let Some(p) = points {
        cfg.points_per_axis = p;
        cfg.method = QuadMethod::GaussTensor;
    }
    if let Some(s) = samples {
        cfg.samples = s;
    }
    if let Some(s) = seed {
        cfg.rng_seed = s;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    cfg
}

/// Runs the period computation through the cache: a hit re-emits the stored
/// estimate, a miss computes and stores it. The cached JSON carries exactly
/// the fields of [`PeriodEstimate`], so cached and fresh outputs match
/// byte for byte.
fn period_with_cache(
    g: &Multigraph,
    dimension: u32,
    cfg: &QuadratureConfig,
    cache_path: Option<&std::path::Path>,
) -> Result<(PeriodEstimate, bool), CliError> {
    let key = cache_path.and_then(|_| cache::period_key(g, dimension, cfg));
    if let (Some(path), Some(key)) = (cache_path, key.as_ref()) {
        if let Some(hit) = cache::lookup(path, key) {
            if let Some(estimate) = estimate_from_cache(&hit, cfg) {
                return Ok((estimate, true));
            }
            eprintln!("warning: ignoring malformed cache entry for {key}");
        }
    }
    let estimate = evaluate_period(g, dimension, cfg)?;
    if let (Some(path), Some(key)) = (cache_path, key.as_ref()) {
        let stored = serde_json::json!({
            "value": estimate.value,
            "error_estimate": estimate.error_estimate,
            "method": estimate.method.name(),
            "evaluations": estimate.evaluations,
        });
        cache::store(path, key, &stored)?;
    }
    Ok((estimate, false))
}

fn estimate_from_cache(value: &Value, cfg: &QuadratureConfig) -> Option<PeriodEstimate> {
    let method = match value.get("method")?.as_str()? {
        "gauss-tensor" => QuadMethod::GaussTensor,
        "monte-carlo" => QuadMethod::MonteCarlo,
        _ => return None,
    };
    if method != cfg.method {
        return None;
    }
    Some(PeriodEstimate {
        value: value.get("value")?.as_f64()?,
        error_estimate: value.get("error_estimate")?.as_f64()?,
        method,
        evaluations: value.get("evaluations")?.as_u64()?,
    })
}
