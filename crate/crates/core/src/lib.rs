//! Aggregation of binary evaluations over constrained feasible spaces, with
//! exhaustive manipulation search.

pub mod aggregate;
pub mod builtin;
pub mod error;
pub mod io;
pub mod manipulate;
pub mod metric;
pub mod search;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
