use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (must be below 2^31)")]
    PrimeTooLarge(u64),
    #[error("{r} is not a power of the characteristic {p}")]
    NotPrimePower { r: u64, p: u32 },
    #[error("r>2 required (got r={0})")]
    RGreaterThanTwoRequired(u64),
    #[error("exponent overflow: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("series is indistinguishable from zero at precision {prec}")]
    IndistinguishableFromZero { prec: i64 },
    #[error("integer part not certified (prec {prec} > 0)")]
    IntegerPartUncertified { prec: i64 },
    #[error("polynomial {poly} is not divisible by T")]
    NotDivisibleByT { poly: String },
    #[error("divisibility violated at index {index}: {detail}")]
    Divisibility { index: usize, detail: String },
    #[error("word Omega_{k} is not a prefix of Omega_{next}", next = k + 1)]
    PrefixViolation { k: usize },
    #[error("identification |z'|>1 not certified: {0}")]
    GuardFailure(String),
    #[error("emitted letter {letter} has degree < 1")]
    ConstantLetter { letter: String },
    #[error("uncovered residue class: type {tag} with a(0) = {residue}")]
    UncoveredResidue { tag: String, residue: u32 },
    #[error("state does not match any equation type A1..A6")]
    UnknownType,
    #[error("pointer inversion: m={m} >= n={n}")]
    PointerInversion { m: usize, n: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("fixed-point iteration does not contract: {0}")]
    NoContraction(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("precision cap {cap} exhausted with {certified} of {wanted} quotients certified")]
    PrecisionCap {
        cap: i64,
        certified: usize,
        wanted: usize,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
