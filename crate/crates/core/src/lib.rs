//! Exact computation with characterized subgroups `s_v(X) = {x : v_n(x) → 0}`
//! of concrete topological abelian groups.

pub mod arith;
pub mod classify;
pub mod construct;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod groups;
pub mod membership;
pub mod radicals;
pub mod sequences;
pub mod verify;

pub use error::{Error, Result};
