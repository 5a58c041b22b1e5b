use thiserror::Error;

use crate::validate::Violation;
use crate::value::ValueError;

#[derive(Debug, Error)]
pub enum BananaError {
    #[error("list has {got} items, operation needs at least {need}")]
    Size { need: usize, got: usize },
    #[error("position {pos} out of range 1..={len}")]
    Position { pos: usize, len: usize },
    #[error("members of the left part must precede members of the right part")]
    Ordering,
    #[error("unknown list")]
    UnknownList,
    #[error("item is not a live member of any list")]
    UnknownItem,
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("{} invariant violation(s), first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Invariant(Vec<Violation>),
}
