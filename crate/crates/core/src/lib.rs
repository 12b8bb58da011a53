//! Quasi-static simulation of structured pneumatic fingerpads whose active
//! regions are inflated or deflated to tune grip friction.
//!
//! Units: mm, kPa (gauge), N, s.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contact;
pub mod error;
pub mod grasp;
pub mod harness;
pub mod membrane;
pub mod model;
pub mod pneumatics;

pub use error::{Error, Result};
