//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("pole at v=0 of order {order}")]
    PoleAtVZero { order: i64 },
    #[error("pole at t=1: denominator vanishes under t -> 1")]
    PoleAtTOne,
    #[error("invalid Cartan datum: {0:?}")]
    InvalidDatum(Vec<String>),
    #[error("datum is not of finite type and no pairings were supplied")]
    SingularDatum,
    #[error("weight is not dominant: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("depth cap exceeded: requested |xi| = {requested}, cap = {cap}")]
    DepthExceeded { requested: usize, cap: usize },
    #[error("datum mismatch between modules")]
    DatumMismatch,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("lattice violation: coordinate has a pole at v=0 ({context})")]
    LatticeViolation { context: String },
    #[error("global basis solver did not converge within v-degree bound {bound}")]
    NonConvergence { bound: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
