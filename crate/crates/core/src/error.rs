use thiserror::Error;

/// Errors raised by the exact-arithmetic, toric and modular-symbol layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("galois exponent {d} is not coprime to level {level}")]
    NotCoprime { d: i64, level: u64 },
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cone is not pointed: {0}")]
    NonPointed(String),
    #[error("improper cone intersection: {0}")]
    ImproperIntersection(String),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("invalid degree function: {0}")]
    InvalidDegree(String),
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("m-sum did not stabilize within box bound {0}")]
    Stabilization(i64),
    #[error("internal check failed: {0}")]
    CheckFailed(String),
    #[error("Hecke operators did not separate eigenclasses up to prime {0}; increase the prime bound")]
    HeckeSeparation(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
