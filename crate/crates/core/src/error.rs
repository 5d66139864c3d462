//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Profile has too few samples (or too coarse a step) for the requested
    /// finite-difference evaluation.
    #[error("under-resolved profile: {0}")]
    UnderResolved(String),

    /// Surface is missing its unit-normal sign convention.
    #[error("orientation convention flag is unset")]
    OrientationUnset,

    /// Rotational profile reaches r = 0 without the perpendicular-cap
    /// compatibility condition.
    #[error("profile touches rotation axis without cap compatibility: {0}")]
    AxisTouch(String),

    /// Rotational shooting entered the r -> 0 limit away from a valid cap.
    #[error("axis singularity during integration: {0}")]
    AxisSingularity(String),

    /// Integrated trajectory fails the self-expander residual oracle.
    #[error("residual oracle failed: max |r| = {max:.3e} exceeds tol = {tol:.3e}")]
    ResidualExceeded { max: f64, tol: f64 },

    /// Trajectory escaped past the hard position bound before s_max.
    #[error("trajectory blow-up: |x| > {bound:.1e} at arclength {s:.3}")]
    BlowUp { s: f64, bound: f64 },

    /// Surface kind has no one-dimensional spectral reduction.
    #[error("no 1-d reduction available for this surface")]
    ReductionUnavailable,

    /// Eigenvalue bisection failed to bracket.
    #[error("eigensolver did not converge: {0}")]
    NotConverged(String),

    /// Discretization error estimate exceeds 10% of the eigenvalue gap.
    #[error("richardson estimate dominates the eigenvalue gap: {0}")]
    TruncationDominated(String),

    /// Rayleigh quotient of a test function with vanishing norm.
    #[error("zero denominator in Rayleigh quotient")]
    ZeroDenominator,

    /// A verification check could not obtain the spectrum it needs.
    #[error("spectrum unavailable: {0}")]
    SpectrumUnavailable(String),

    /// Weighted integrand exceeds the floating-point range; reduce the radius.
    #[error("weighted integrand overflow (exponent {0:.1}); reduce radius")]
    Overflow(f64),

    /// Invalid run configuration or precondition violation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
