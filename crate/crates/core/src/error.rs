use num_bigint::BigUint;
use thiserror::Error;

use crate::game::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),

    #[error("path length must be at least 1")]
    ZeroLength,

    #[error("invalid routing: {0}")]
    InvalidRouting(String),

    #[error("unknown player {0}")]
    UnknownPlayer(usize),

    #[error("the sum model has no routing-vector potential")]
    NoPotential,

    #[error("routing vectors have different lengths ({0} vs {1})")]
    VectorLengthMismatch(usize, usize),

    #[error("instance has {count} strategy profiles, above the enumeration cap of {cap}")]
    ProfileCapExceeded { count: BigUint, cap: u64 },

    #[error("invalid instance: {}", format_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid generator parameters: {0}")]
    Generator(String),

    #[error("no-Nash construction disagrees with the reference cost table: {0}")]
    TableMismatch(String),

    #[error("routing is not a Nash equilibrium under the {0} model")]
    NotNash(crate::CostModel),

    #[error("no Nash routing in the analyzed instance")]
    EmptyNashSet,

    #[error("report was computed for the {found} model, expected {expected}")]
    WrongModel {
        expected: crate::CostModel,
        found: crate::CostModel,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
