//! Crate-wide error type.

use thiserror::Error;

use crate::classify::ExistenceVerdict;
use crate::real::Real;

#[derive(Error, Debug)]
pub enum Error<T: Real> {
    #[error("{axis} = {value} outside domain [{lo}, {hi}]")]
    OutOfDomain {
        axis: &'static str,
        value: T,
        lo: T,
        hi: T,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("not a valid fiducial model: {0}")]
    InvalidFamily(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("section has {got} samples, need at least {need}")]
    InsufficientData { got: usize, need: usize },

    #[error("theta grid not symmetric about zero: node {index} pairs {left} with {right}")]
    AsymmetricGrid { index: usize, left: T, right: T },

    #[error("sampled measure has a jump at node {index} (|delta| = {jump})")]
    DiscontinuousSamples { index: usize, jump: T },

    #[error(
        "no fiducial distribution at x0 = {x0} \
         (non_intersecting = {non_intersecting}, complete = {complete})"
    )]
    NotAnFd {
        x0: T,
        non_intersecting: bool,
        complete: bool,
        verdict: Box<ExistenceVerdict<T>>,
    },

    #[error("ambiguous section direction: net change {net} below resolution")]
    AmbiguousDirection { net: T },

    #[error("composite is not reducible: {0}")]
    NotReducible(String),

    #[error("no solution: {0}")]
    NoCoverage(String),

    #[error("product density vanishes everywhere on the grid")]
    DegenerateCombination,

    #[error("oracle requires a translation-pivot family")]
    OracleInapplicable,

    #[error(
        "internal inconsistency between monotonicity and intersection verdicts \
         at x = {x0} (node {index}): {detail}"
    )]
    InternalInconsistency { x0: T, index: usize, detail: String },

    #[error("family spec: {0}")]
    Spec(String),
}
