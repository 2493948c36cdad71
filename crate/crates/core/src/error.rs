use thiserror::Error;

use crate::field::FieldParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mismatched field parameters: {0} vs {1}")]
    MismatchedParams(FieldParams, FieldParams),

    #[error("division by exact zero")]
    DivisionByZero,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("characteristic violation: order {order} requires order <= p-1 = {bound} in characteristic p")]
    CharacteristicViolation { order: usize, bound: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid field parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "unsupported leaf degree {degree} on leaf {leaf}; classifiers require local degree <= 1"
    )]
    UnsupportedDegree { leaf: String, degree: usize },

    #[error("no convergence within depths {from}..={to}: {detail}")]
    NoConvergence {
        from: usize,
        to: usize,
        detail: String,
    },

    #[error("tuple budget exceeded: {count} tuples > budget {budget} and sampling disabled")]
    BudgetExceeded { count: u128, budget: u64 },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Short machine-readable category used by the command-line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::CharacteristicViolation { .. } => "characteristic",
            Error::PrecisionExhausted(_) => "precision",
            Error::MismatchedParams(..) => "params",
            Error::InvalidParams(_) => "params",
            Error::DivisionByZero => "division",
            Error::InvalidArgument(_) => "argument",
            Error::UnsupportedDegree { .. } => "degree",
            Error::NoConvergence { .. } => "convergence",
            Error::BudgetExceeded { .. } => "budget",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
