//! Interfaces, dependency and the trace classes they induce.

mod classes;
mod interface;

pub use classes::{
    class_after, class_after_ids, filtered_class, maz_class, maz_class_limited, project, TraceClass,
    MAZ_CLASS_LIMIT,
};
pub use interface::{Dependency, Interface};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceClassError {
    #[error("interface part is not closed under complement: `{action}` lacks its complement")]
    NotComplementClosed { action: String },
    #[error("interface parts overlap on `{action}`")]
    Overlap { action: String },
    #[error("interface parts must not be empty")]
    EmptyPart,
    #[error("name `{name}` is not covered by the interface")]
    UncoveredName { name: String },
    #[error("trace class exceeds {limit} members")]
    ClassTooLarge { limit: usize },
    #[error("invalid interface: {0}")]
    Parse(String),
}
