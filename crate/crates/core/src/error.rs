use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Power counting and propagator constants are defined for even D >= 4.
    #[error("unsupported dimension D={0}: D must be even and at least 4")]
    UnsupportedDimension(i64),

    /// A disconnected graph has no spanning tree and no dual polynomial.
    #[error("no spanning tree: graph is disconnected")]
    NoSpanningTree,

    /// Brute-force searches (isomorphism, canonical form, partition
    /// enumeration) are capped to keep runtimes predictable.
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    /// The period integral does not converge for this graph/dimension.
    #[error("divergent period: {0}")]
    DivergentPeriod(String),

    /// Residue extraction via the period route needs a primitive graph;
    /// anything else requires the full extension machinery.
    #[error(
        "graph requires extension: not primitive at D={dimension} \
         (divergence degree {divergence_degree})"
    )]
    RequiresExtension { dimension: u32, divergence_degree: i64 },

    #[error("numerical failure: non-finite integrand at {point:?}")]
    NumericalFailure { point: Vec<f64> },

    /// The dual polynomial vanished at an evaluation point.
    #[error("singular point: dual polynomial vanishes at {point:?}")]
    SingularPoint { point: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;
