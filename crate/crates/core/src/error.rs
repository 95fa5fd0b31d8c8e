use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix determinant is not ±1, so the map is not an automorphism.
    #[error("matrix determinant must be +1 or -1, got {0}")]
    NonUnimodular(i64),
    /// The matrix has an eigenvalue of modulus one (elliptic or parabolic).
    #[error("matrix has an eigenvalue of modulus one; no hyperbolic splitting")]
    NonHyperbolic,
    /// `det(A^n - I) = 0`, so period-n points are not isolated.
    #[error("det(A^n - I) vanishes at n = {0}; periodic points are not isolated")]
    DegeneratePeriod(usize),
    /// The Markov partition search or refinement did not produce a valid partition.
    #[error("Markov partition construction failed: {0}")]
    ConstructionFailed(String),
    /// A symbolic cylinder decodes to the empty set.
    #[error("cylinder decodes to the empty set")]
    EmptyCylinder,
    /// No power of the transition matrix up to the cap is strictly positive.
    #[error("transition matrix has no strictly positive power up to {0}")]
    NotMixing(usize),
    /// Power iteration failed to reach the requested tolerance.
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    /// A cylinder weight needed as a denominator underflowed to zero.
    #[error("cylinder weight underflowed to zero")]
    ZeroMassCylinder,
    /// Pressure-curve grid too coarse for the requested derivative.
    #[error("grid step {0} exceeds the 0.1 cap for numerical differentiation")]
    GridTooCoarse(f64),
    /// A chart evaluation was requested outside the interior of the zero rectangle.
    #[error("point lies outside the interior of the zero rectangle")]
    OutsideA0,
    /// A point's symbolic code is ambiguous at the working depth (partition boundary).
    #[error("symbolic code is ambiguous at the working depth (partition boundary)")]
    BoundaryCode,
    /// The potential satisfies the degeneracy that makes the construction collapse.
    #[error("potential is degenerate for the period-3 separation test (margin {0:.3e})")]
    ConditionDegenerate(f64),
    /// A pressure curve failed the convexity check on a uniform grid.
    #[error("pressure curve violates convexity: second difference {0:.3e}")]
    ConvexityViolated(f64),
    /// Malformed caller input that no dedicated variant covers.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Filesystem failure while reading or writing artifacts.
    #[error("io failure: {0}")]
    IoFailure(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
