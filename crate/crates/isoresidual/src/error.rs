use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Pole orders do not sum to the zero order plus two.
    #[error("sum mismatch: pole orders sum to {sum}, expected a + 2 = {expected}")]
    SumMismatch { sum: i64, expected: i64 },

    /// A pole order is smaller than one, or there are fewer than two poles.
    #[error("bad order: {0}")]
    BadOrder(String),

    /// A residue configuration that does not satisfy the residue theorem.
    #[error("residues do not sum to zero")]
    ResidueSum,

    /// Malformed pole subset for the given number of poles.
    #[error("bad subset: {0}")]
    BadSubset(String),

    /// A decorated tree violating one of its structural invariants.
    #[error("invalid tree: {0}")]
    TreeInvalid(String),

    /// Parse failure for residues, subsets, sign maps or tree keys.
    #[error("parse error: {0}")]
    Parse(String),

    /// An abstract sign function with no rational witness.
    #[error("infeasible sign function")]
    Infeasible,

    /// A sign function required to be realizable has no witness.
    #[error("unrealizable sign function")]
    UnrealizableSign,

    /// Request past the configured combinatorial scale bound.
    #[error("scale limit: {0}")]
    ScaleLimit(String),

    /// The hyperplane is not a facet of the chamber.
    #[error("hyperplane A_{{{0}}} is not a wall of the chamber")]
    NotAdjacent(String),

    /// Corner where the parity rule forbids the requested insertion.
    #[error("illegal corner: parity forbids insertion")]
    IllegalCorner,

    /// Operation preconditions not met by the signature or tree shape.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Topological class count disagrees with the predicted modulus.
    #[error("partition mismatch: found {found} classes, expected {expected}")]
    PartitionMismatch { found: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
