//! Signed transfer operators of the Farey map.
//!
//! Exact Farey combinatorics, the Laguerre-space matrix representation of
//! the operators `P_q^±`, Hankel-transform eigenfunction checks and the exact
//! integer eigenproblems arising at negative half-integer `q`.

pub mod error;
pub mod exact_farey;
pub mod hankel;
pub mod laguerre_space;
pub mod par;
pub mod polynomial_eigen;
pub mod rational;
pub mod report;
pub mod special_functions;
pub mod transfer_operators;
pub mod verify;

pub use error::{Error, Result};
