//! Error type shared by the whole crate.

use alloc::string::String;
use core::fmt;

/// Crate wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by construction and computation routines.
///
/// Algebraic preconditions are checked eagerly, so most constructors
/// return `Result`. The variants carry enough context to be rendered
/// directly to a user of the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A scalar or polynomial was used with a ring it does not belong to.
    RingMismatch(String),
    /// An input that must be homogeneous is not.
    NotHomogeneous(String),
    /// A variable weight, modulus or degree bound is out of range.
    BadParameter(String),
    /// A map failed its well-definedness check (it does not kill the
    /// relations of its source, or a column has the wrong degree).
    IllFormedMap(String),
    /// A chain complex failed `d . d = 0`, or a DG operator failed an axiom.
    NotAComplex(String),
    /// A resolution or semifree resolution is not valid far enough for the
    /// requested homological range.
    InsufficientResolution(String),
    /// An element or map required to be invertible / split / exact is not;
    /// carries a short description of the failing certificate.
    CertificateFailed(String),
    /// A lifting chain is too short for the requested reconstruction
    /// window; carries the minimal usable length.
    ChainTooShort {
        /// Minimal chain length that would admit the requested window.
        needed: usize,
        /// Length actually available.
        got: usize,
    },
    /// A bounded search (e.g. for an isomorphism) was inconclusive.
    SearchInconclusive(String),
    /// Internal consistency violation: two independently computed facts
    /// disagree. Always a bug or a genuine counterexample; never ignored.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch(m) => write!(f, "ring mismatch: {m}"),
            Error::NotHomogeneous(m) => write!(f, "not homogeneous: {m}"),
            Error::BadParameter(m) => write!(f, "bad parameter: {m}"),
            Error::IllFormedMap(m) => write!(f, "ill-formed map: {m}"),
            Error::NotAComplex(m) => write!(f, "not a complex: {m}"),
            Error::InsufficientResolution(m) => {
                write!(f, "insufficient resolution bound: {m}")
            }
            Error::CertificateFailed(m) => write!(f, "certificate failed: {m}"),
            Error::ChainTooShort { needed, got } => write!(
                f,
                "chain too short: have {got} terms, reconstruction window needs at least {needed}"
            ),
            Error::SearchInconclusive(m) => write!(f, "search inconclusive: {m}"),
            Error::Inconsistent(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl core::error::Error for Error {}
