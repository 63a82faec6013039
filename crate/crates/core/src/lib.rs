//! Must-testing preorders for finite sequential processes: the classical
//! must preorder and its uncoordinated and individualistic variants for
//! observers split along an interface of disjoint action sets.

pub mod corpus;
pub mod preorders;
pub mod semantics;
pub mod syntax;
pub mod traceclasses;
