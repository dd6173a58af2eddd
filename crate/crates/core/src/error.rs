//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong during evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("gamma pole: argument is a non-positive integer")]
    GammaPole,
    #[error("parameter degenerate: {0}")]
    ParameterDegenerate(String),
    #[error("degenerate-limit extrapolation unstable (disagreement {0:.3e})")]
    ExtrapolationUnstable(f64),
    #[error("series did not converge within the term budget")]
    SeriesNonconvergent,
    #[error("point out of the sector disk (|eps| >= r)")]
    OutOfDisk,
    #[error("basis solution invalid for these parameters: {0}")]
    BasisInvalid(String),
    #[error("series unreachable: {0}")]
    SeriesUnreachable(String),
    #[error("connection coefficient pole: {0}")]
    CoefficientPole(String),
    #[error("indeterminate 0/0 quotient")]
    IndeterminateZeroOverZero,
    #[error("singular transform: 1 - 1/eps - a - b = 0")]
    SingularTransform,
    #[error("Laplace integration along (or too near) the singular direction")]
    SingularDirection,
    #[error("quadrature did not converge (estimated error {0:.3e})")]
    QuadratureNonconvergent(f64),
    #[error("integration step size underflow near a singular point")]
    StepUnderflow,
    #[error("basis seed matrix ill conditioned (|det| = {0:.3e})")]
    IllConditionedBasis(f64),
    #[error("Riccati trajectory blow-up that the 1/y chart could not absorb")]
    BlowUp,
    #[error("analytic continuation failed: {0}")]
    ContinuationFailure(String),
    #[error("point lies on the cut of H0")]
    OnCut,
    #[error("square-root branch values disagree beyond tolerance ({0:.3e})")]
    BranchDisagreement(f64),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

pub type Result<V> = std::result::Result<V, EvalError>;
