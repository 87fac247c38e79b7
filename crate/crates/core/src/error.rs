use alloc::boxed::Box;

use thiserror::Error;

use crate::engine::IterationTrace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("complex components must be finite")]
    NonFinite,
    #[error("malformed complex literal")]
    MalformedComplex,
    #[error("argument lies outside the cone 0 ≾ z")]
    OutsideCone,
    #[error("points do not belong to the same domain")]
    DomainMismatch,
    #[error("invalid `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("sequence is empty")]
    EmptySequence,
    #[error("iteration diverged after {} steps", .trace.deltas.len())]
    Divergence { trace: Box<IterationTrace> },
}

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}
