use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} out of range (1..=32)")]
    DegreeOutOfRange(u32),

    #[error("polynomial {poly:#x} is not monic of degree {n}")]
    NotMonic { poly: u64, n: u32 },

    #[error(
        "polynomial {poly:#x} is reducible: it has an irreducible factor of degree {factor_degree}"
    )]
    Reducible { poly: u64, factor_degree: u32 },

    #[error("{k} does not divide the extension degree {n}")]
    NotDivisor { k: u32, n: u32 },

    #[error("invalid split m={m} for n={n}: need m | n and n/m >= 2")]
    BadSplit { n: u32, m: u32 },

    #[error("zero has no {0}")]
    Zero(&'static str),

    #[error("the field has no (t, m) split set")]
    NoSplit,

    #[error("operation requires t = {expected}, field has t = {found}")]
    SplitMismatch { expected: u32, found: u32 },

    #[error("function is not in the subfield family form for m = {m}: term x^(2^{i}+2^{j})")]
    NotFamilyForm { m: u32, i: u32, j: u32 },

    #[error("term x^(2^{i}+2^{j}) collapses to a linearized monomial")]
    LinearizedTerm { i: u32, j: u32 },

    #[error("field GF(2^{n}) too large for {what} (limit n <= {limit})")]
    TooLarge {
        what: &'static str,
        n: u32,
        limit: u32,
    },

    #[error("{0:#x} is not a cube")]
    NotCube(u32),

    #[error("function is not pseudo-planar")]
    NotPseudoPlanar,

    #[error("set is not a relative difference set")]
    NotRds,

    #[error("bound requires N > K^2 (N = {n}, K = {k})")]
    BoundHypothesis { n: u64, k: u64 },

    #[error("invalid parameter: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
