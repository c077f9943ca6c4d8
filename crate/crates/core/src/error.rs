use std::fmt;

/// Crate-wide error type for the fallible operations.
///
/// Dimension mismatches in plain matrix/element arithmetic are programming
/// errors and panic instead; the variants here cover invalid mathematical
/// input that a caller may legitimately hand in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by zero in a field.
    DivisionByZero,
    /// Galois substitution exponent not coprime to the conductor.
    NotCoprime { i: i64, m: u64 },
    /// A t-adic valuation was requested at a conductor that is not p^n.
    NotPrimePower { m: u64, p: u64, n: u32 },
    /// p is not prime, or n is zero where n >= 1 is required.
    InvalidParams(String),
    /// Points of a tuple are not pairwise distinct.
    DuplicatePoints,
    /// The greedy reordering failed the minimal-ordering inequality.
    NotMinimallyOrdered,
    /// A matrix that must be invertible is singular.
    Singular,
    /// An entry of negative t-adic valuation where the localization is required.
    NegativeValuation,
    /// Twist index is not a unit modulo p^n.
    InvalidTwist { twist: u64, modulus: u64 },
    /// An index argument violates its stated range.
    IndexOutOfRange(String),
    /// Malformed structured input (JSON, coefficient indexing, ...).
    BadInput(String),
    /// A theorem-backed internal identity failed; indicates a bug.
    InternalAssertion(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotCoprime { i, m } => write!(f, "{} is not coprime to {}", i, m),
            Error::NotPrimePower { m, p, n } => {
                write!(f, "conductor {} is not {}^{}", m, p, n)
            }
            Error::InvalidParams(s) => write!(f, "invalid parameters: {}", s),
            Error::DuplicatePoints => write!(f, "points are not pairwise distinct"),
            Error::NotMinimallyOrdered => {
                write!(f, "greedy reordering did not produce a minimally ordered tuple")
            }
            Error::Singular => write!(f, "matrix is singular"),
            Error::NegativeValuation => {
                write!(f, "entry with negative valuation outside the localization")
            }
            Error::InvalidTwist { twist, modulus } => {
                write!(f, "twist {} is not a unit modulo {}", twist, modulus)
            }
            Error::IndexOutOfRange(s) => write!(f, "index out of range: {}", s),
            Error::BadInput(s) => write!(f, "bad input: {}", s),
            Error::InternalAssertion(s) => write!(f, "internal assertion failed: {}", s),
        }
    }
}

impl std::error::Error for Error {}
