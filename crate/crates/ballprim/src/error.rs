use thiserror::Error;

/// Error type shared by all certification, synthesis and channel operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Power iteration detected a numerically zero spectral radius, so the
    /// map is nilpotent on the cone and cannot be primitive.
    #[error("spectral radius is numerically zero (nilpotent map)")]
    SpectralRadiusZero,

    /// The dual Perron eigenvector sits on the cone boundary instead of its
    /// interior, which rules out primitivity.
    #[error("dual eigenvector lies on the cone boundary (interior margin {margin:.3e})")]
    BoundaryEigenvector { margin: f64 },

    #[error("map is not positive: maximal image norm {value} exceeds 1")]
    NotPositive { value: f64 },

    #[error("map is not primitive")]
    NotPrimitive,

    /// An iterate's maximal image norm fell inside the indeterminate band
    /// around 1 and no contact witness could certify the boundary touch.
    #[error("iterate {k} has maximal image norm {value} in the indeterminate band with no contact witness")]
    AmbiguousMargin { k: usize, value: f64 },

    #[error("parameter search exhausted after {attempts} attempts")]
    SearchExhausted { attempts: usize },

    #[error("diagonal entry {index} is {value}, expected 1")]
    NotUnitDiagonal { index: usize, value: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error(
        "inadmissible angles alpha={alpha}, beta={beta}: both must lie strictly \
         between 0 and pi/2 (and alpha < beta for a latitude lift)"
    )]
    BadAngles { alpha: f64, beta: f64 },

    #[error("pairwise distances of sources and targets differ by {deviation:.3e}")]
    DistanceMismatch { deviation: f64 },

    #[error("witness check failed: {0}")]
    WitnessViolation(String),

    #[error("alpha and beta must differ")]
    EqualAngles,

    #[error("degenerate overlap |<phi+, phi->| = {overlap}")]
    DegenerateOverlap { overlap: f64 },

    #[error("Kraus operators are not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("a point violates the fitted subsphere by {deviation:.3e}")]
    FitViolation { deviation: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
