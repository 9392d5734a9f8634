#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Kubo–Ando operator means on dense Hermitian matrices, the Löwner order,
//! integral representations of operator monotone functions, and a harness
//! that checks operator log-convexity / log-concavity conditions numerically.

pub mod error;
pub mod harness;
pub mod hermitian;
pub mod means;
pub mod repr;

pub use error::{Error, Result};
