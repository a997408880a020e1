//! Library side of the `qtunnel` command: configuration, evaluation,
//! sweeps, figure datasets and CSV output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod eval;
pub mod figures;
pub mod format;
pub mod output;
pub mod selftest;
pub mod sweep;
