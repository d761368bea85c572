//! Exact arithmetic for chromatic polynomials, broken-cycle structures,
//! list-coloring counts, and the inequality chain bounding
//! P(G, L) - P(G, k) from below.

pub mod bounds;
pub mod chromatic;
pub mod cli;
pub mod error;
pub mod graph;
pub mod listcolor;
pub mod nbc;
pub mod search;

pub use error::{Error, Result};
pub use graph::Graph;
pub use listcolor::ListAssignment;
pub use nbc::EdgeOrdering;
