use thiserror::Error;

/// Errors raised by constructions and decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("arity {0} exceeds the supported maximum of {max}", max = crate::syncauto::MAX_ARITY)]
    ArityExceeded(usize),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid parameters: {0}")]
    BadParameters(String),

    #[error("supports of the summands overlap")]
    OverlappingSupports,

    #[error("complement of the support is not infinite")]
    ComplementNotInfinite,

    #[error("complement of the support is not finite")]
    ComplementNotFinite,

    #[error("relation is not a strict order")]
    NotAnOrder,

    #[error("order is not linear")]
    NotLinear,

    #[error("inconsistent order: {0}")]
    InconsistentOrder(String),

    #[error("order has an infinite antichain")]
    InfiniteAntichain,
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
