//! Structural topic modeling for abstract corpora.
//!
//! The crate is `no_std` (it needs `alloc`) and covers the numerical side of
//! the workflow: text normalization and the document-term matrix, a
//! correlated topic model with logistic-normal prevalence driven by document
//! covariates, coherence/exclusivity diagnostics for choosing the number of
//! topics, and correlation/prevalence analytics on the fitted model.
//!
//! File formats, K sweeps with checkpoints, reports and the CLI live in the
//! `topicscope` companion crate.
#![no_std]
// `!(x > 0.0)` is deliberate: NaN must fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod corpus;
pub mod diagnostics;
mod error;
pub mod inference;
pub mod linalg;
pub mod rng;
pub mod synthetic;

pub use error::{Error, Result};
