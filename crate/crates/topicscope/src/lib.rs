//! File formats, K sweeps, reports and the command-line front end for
//! [`topicscope_core`].

// `!(x > 0.0)` is deliberate: NaN must fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod ingest;
pub mod report;
pub mod svg;
pub mod sweep;

pub use error::{AppError, AppResult};
