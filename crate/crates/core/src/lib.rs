//! Exact calculator for the set of self-mapping degrees of a closed oriented
//! 3-manifold given in coordinate form (spherical space forms and their
//! connected sums, torus bundles and semi-bundles, and Seifert fibrations).
//!
//! The crate is organized bottom-up:
//!
//! * [`numth`] — factorization, unit groups, residue sets, CRT merging
//! * [`forms`] — binary quadratic forms: definite criteria and the
//!   reduction-cycle machinery for indefinite forms
//! * [`degset`] — the symbolic algebra of degree sets
//! * [`manifold`] — coordinate descriptions, validation, geometry dispatch
//! * [`engine`] — the per-class degree-set computations
//! * [`dsl`] — a small textual language for naming manifolds
//!
//! All arithmetic is exact; inputs are expected at desk scale (group orders
//! and enumeration bounds that fit comfortably in an `i64`).

pub mod degset;
pub mod dsl;
pub mod engine;
pub mod forms;
pub mod manifold;
pub mod numth;

/// Errors shared across the crate. Each operation documents which of these
/// it can produce; everything else is a plain return value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0}: expected a positive integer, got {1}")]
    NonPositive(&'static str, i64),

    #[error("empty range: lower bound {0} exceeds upper bound {1}")]
    EmptyRange(i64, i64),

    #[error("{0} and {1} must be coprime")]
    NotCoprime(i64, i64),

    #[error("unsupported discriminant {0}: need a positive non-square, or one of the definite model forms")]
    UnsupportedDiscriminant(i64),

    #[error("matrix [{a},{b};{c},{d}] has determinant {det}, expected 1")]
    BadDeterminant { a: i64, b: i64, c: i64, d: i64, det: i64 },

    #[error("matrix [{a},{b};{c},{d}] is not one of the canonical semi-bundle shapes")]
    NonCanonicalSemiBundle { a: i64, b: i64, c: i64, d: i64 },

    #[error("the degree set is only known as the band {{0,1}} \u{2286} D \u{2286} {{0,1,-1}}; exact enumeration is unavailable")]
    BandNotEnumerable,

    #[error("invalid manifold description: {0}")]
    Invalid(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("group order {0} is too large to enumerate residues (limit {1})")]
    OrderTooLarge(i64, i64),
}

pub type Result<T> = std::result::Result<T, Error>;
