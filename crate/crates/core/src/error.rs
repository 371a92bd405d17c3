use thiserror::Error;

use crate::cell::Matching;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph order {0} outside the supported range 2..=12")]
    OrderOutOfRange(usize),

    #[error("cannot parse cell `{text}`: {reason}")]
    CellSyntax { text: String, reason: String },

    #[error("cell {0} is not in the complex")]
    CellNotFound(Matching),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("{tau} is not a facet of {sigma}")]
    NotAFacet { tau: Matching, sigma: Matching },

    #[error("cell {0} is already paired")]
    AlreadyPaired(Matching),

    #[error("the pairing is not acyclic")]
    Cyclic,

    #[error("cell {0} is not critical")]
    NotCritical(Matching),

    #[error("no gradient path from a facet of {eta} reaches {sigma}")]
    NoPath { eta: Matching, sigma: Matching },

    #[error("{count} gradient paths from facets of {eta} reach {sigma}; cancellation needs exactly one")]
    NonUniquePath {
        eta: Matching,
        sigma: Matching,
        count: u64,
    },

    #[error("no bijection between the chosen cells is realized by gradient paths")]
    Infeasible,

    #[error("more than one bijection between the chosen cells is realized by gradient paths")]
    AmbiguousBijection,

    #[error("invalid cancellation request: {0}")]
    InvalidRequest(String),

    #[error("plan was built against a different field")]
    StalePlan,

    #[error("reversed paths overlap at {0}")]
    OverlappingPaths(Matching),

    #[error("boundary composition is nonzero in degree {0}")]
    BoundaryNotNilpotent(usize),

    #[error("boundary degree {k} out of range 1..={max}")]
    DegreeOutOfRange { k: usize, max: usize },

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}
