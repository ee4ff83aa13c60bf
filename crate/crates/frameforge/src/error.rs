//! Crate-wide error type.
//!
//! Numerical preconditions (Parseval, projector, norm bounds) report the
//! measured deviation so callers can tell a genuinely bad input from a
//! tolerance that is set too tight.

use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A symmetric-matrix operation received a matrix whose asymmetry
    /// exceeds the eigenvalue tolerance.
    #[error("matrix is not symmetric: max |a_ij - a_ji| = {asymmetry:.3e}")]
    NotSymmetric { asymmetry: f64 },

    /// The family does not span: the smallest eigenvalue of the frame
    /// operator is not above the tolerance.
    #[error("family is not a frame: lambda_min = {lambda_min:.3e}")]
    NotAFrame { lambda_min: f64 },

    /// An operation that is only valid for Parseval frames was called on a
    /// frame whose Gram matrix is not a projection.
    #[error("frame is not Parseval: deviation {deviation:.3e}")]
    NotParseval { deviation: f64 },

    /// The supplied matrix is not an orthogonal projector within tolerance.
    #[error("matrix is not an orthogonal projector: deviation {deviation:.3e}")]
    NotProjector { deviation: f64 },

    /// Two mathematically equivalent decision routes disagreed. This signals
    /// a tolerance failure on numerically marginal input, not a theorem
    /// failure.
    #[error("equivalent criteria disagree ({context}): rank route says {rank_verdict}, eigenvalue route says {eig_verdict}")]
    CriterionMismatch {
        context: String,
        rank_verdict: bool,
        eig_verdict: bool,
    },

    /// Dimensions or counts that make the requested object impossible.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// A vector norm exceeds the bound required by the selected theorem.
    #[error("norm bound violated: ||f_{index}||^2 = {norm_sq} > {bound}")]
    NormBoundViolated {
        index: usize,
        norm_sq: f64,
        bound: f64,
    },

    /// A witness was requested for an instance that is actually feasible.
    #[error("input is feasible: a partition into {parts} independent sets exists")]
    FeasibleInput { parts: usize },

    /// An equal-norm theorem received a frame with spread-out norms.
    #[error("frame is not equal-norm: norm spread {spread:.3e}")]
    NotEqualNorm { spread: f64 },

    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// One of the two hypotheses of the independent + spanning partition
    /// theorem fails; the witness subset certifies it.
    #[error("hypothesis ({which}) fails: witness set of size {witness_size} with rank {witness_rank}")]
    HypothesisFailed {
        which: u8,
        witness: Vec<usize>,
        witness_size: usize,
        witness_rank: usize,
    },

    /// The local search stalled and the instance is too large for the
    /// exhaustive fallback.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    /// A conclusion guaranteed by a theorem failed its numerical
    /// verification. This is a bug or a tolerance breakdown, never a valid
    /// outcome.
    #[error("internal contract violation: {0}")]
    InternalContractViolation(String),

    /// The paving search expects a zero-diagonal matrix.
    #[error("matrix has a nonzero diagonal entry at {index}: {value:.3e}")]
    NonzeroDiagonal { index: usize, value: f64 },

    /// No paving at the requested (r, s) was found. Not a refutation of
    /// anything; the search simply failed at this size.
    #[error("no paving found for r = {r} at target {target:.6}: best achieved {achieved:.6}")]
    PavingNotFound { r: usize, target: f64, achieved: f64 },

    /// Exact-rational arithmetic was requested but the frame has no exact
    /// entries attached.
    #[error("exact-rational mode unavailable: frame has no rational entries")]
    ExactUnavailable,

    /// Exhaustive enumeration past the hard cutoff was requested.
    #[error("exhaustive search refused: {size} indices exceeds the cutoff of {cutoff}")]
    ExhaustiveTooLarge { size: usize, cutoff: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed input file or command-line value.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
