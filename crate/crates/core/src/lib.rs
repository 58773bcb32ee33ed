//! Exact calculator for conjugacy-class data of finite groups, integral
//! group rings and their idempotent traces, big Witt vectors over finite
//! truncation sets, and the level-indexed modules those traces land in.
//!
//! Everything is integer-exact: coefficients are arbitrary-precision, ring
//! operations on Witt vectors go through ghost coordinates and are inverted
//! by exact division, and every analysis routine returns a report that can be
//! re-verified from its recorded witnesses.

pub mod bass;
pub mod error;
pub mod groupring;
pub mod groups;
pub mod trzero;
pub mod witt;

pub use error::{Error, Result};
