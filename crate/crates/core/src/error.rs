use thiserror::Error;

/// Everything that can go wrong while building or evaluating an instance.
///
/// Variants marked "internal" in their message can only fire if one of the
/// structural theorems the crate relies on is violated by the model, so they
/// indicate a bug rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = {0} is not a power of an odd prime")]
    NotOddPrimePower(u64),
    #[error("tameness violated: residue characteristic {p} divides e = {e}")]
    TameViolation { p: u64, e: u64 },
    #[error("invalid extension parameters: {0}")]
    InvalidParams(String),
    #[error("internal: no splitting-field degree f' <= {bound} found")]
    SearchExhausted { bound: u64 },
    #[error("element set is not a subgroup containing Gal(L/E)")]
    NotASubgroup,
    #[error("internal: symmetric orbit ({i},{j}) has j outside {{0, f/2}}")]
    CriterionViolation { i: u64, j: u64 },
    #[error("dimension mismatch: m*d = {md} but e*f = {ef}")]
    DimensionMismatch { md: u64, ef: u64 },
    #[error("invalid algebra parameters: {0}")]
    InvalidCsa(String),
    #[error("n_alpha * h/d = {num}/{den} is not 2-torsion in Q/Z")]
    NotTwoTorsion { num: i64, den: i64 },
    #[error("E/E_0 is ramified")]
    UnramifiedViolation,
    #[error("tower is not strictly increasing at index {0}")]
    NonStrictTower(usize),
    #[error("jump levels must be positive and strictly increasing")]
    NonIncreasingLevels,
    #[error("tower shape malformed: {0}")]
    MalformedShape(String),
    #[error("jump index {k} out of range for t = {t}")]
    IndexOutOfRange { k: usize, t: usize },
    #[error("orbit is not symmetric")]
    NotSymmetric,
    #[error(
        "root of unity with exponent {exp} (mod {modulus}) is not in the subfield of order {sub}"
    )]
    NotInSubfield { exp: u64, modulus: u64, sub: u64 },
    #[error("root of unity with reduced index {index} is not of norm one (q_pm = {q_pm})")]
    NotNormOne { index: u64, q_pm: u64 },
    #[error("value {0} is not a sign")]
    NonQuadratic(i64),
    #[error("internal: isomorphic modules but iota = -1 on a symmetric unramified orbit")]
    IotaIncoherence,
    #[error("unknown subfield selector {0:?}")]
    UnknownSubfield(String),
}

pub type Result<T> = std::result::Result<T, Error>;
