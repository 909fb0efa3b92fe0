//! Error type shared by the symbolic and numeric kernels.

use thiserror::Error;

/// Errors raised by the exact kernels and the numeric layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Inversion of a scalar whose numerator involves frozen coefficients.
    #[error("cannot invert a scalar with z-dependent numerator: {0}")]
    ZDependentInverse(String),
    /// Inversion or division by an exact zero.
    #[error("division by zero")]
    ZeroDivision,
    /// The denominator vanishes at q = 1, so the classical limit is undefined.
    #[error("denominator vanishes at q = 1: {0}")]
    PoleAtOne(String),
    /// Numeric evaluation hit an unbound frozen coefficient z[i,s].
    #[error("no numeric value bound for z[{i},{s}]")]
    UnboundZ { i: usize, s: usize },
    /// Numeric denominator magnitude below the pole threshold.
    #[error("denominator magnitude {mag:.3e} below pole threshold at q = {q}")]
    NumericPole { q: String, mag: f64 },

    /// Two elements from different quantum tori were combined.
    #[error("operands belong to different quantum torus algebras")]
    MixedAlgebra,
    /// A torus element could not be embedded exactly in a truncated cone series.
    #[error("torus element does not fit in the degree-{order} cone window above its support minimum")]
    NotConeEmbeddable { order: i64 },
    /// The supports of the summands cannot be carried by one Laurent prefactor.
    #[error("cone prefactor misaligned at step {step}: leading monomial missing from support")]
    PrefactorMisaligned { step: usize },
    /// Attempted to invert a series whose constant term is not a unit.
    #[error("series constant term is not invertible")]
    NonUnitConstantTerm,

    /// Argument of a dilogarithm series must have strictly positive total degree.
    #[error("dilogarithm argument at step {step} has minimal total degree {degree} (must be >= 1)")]
    NonPositiveArgument { step: usize, degree: i64 },

    /// A c-vector had entries of mixed sign (or was zero).
    #[error("sign-coherence violated at step {step}: c-vector {cvec:?}")]
    SignCoherenceViolated { step: usize, cvec: Vec<i64> },

    /// A numeric product factor came too close to the branch cut of log.
    #[error("log branch ambiguity: factor {factor} within tolerance of the negative real axis")]
    BranchAmbiguity { factor: String },
    /// The integrand polynomial vanishes on the integration segment.
    #[error("integrand polynomial vanishes on the integration path near y = {y}")]
    PoleOnPath { y: f64 },

    /// Invalid exchange data (skew condition, reciprocity, ranges).
    #[error("invalid exchange data: {0}")]
    InvalidExchangeData(String),

    /// Malformed series expression text.
    #[error("expression syntax: {0}")]
    Syntax(String),
}

pub type Result<T> = std::result::Result<T, Error>;
