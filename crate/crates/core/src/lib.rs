//! Context-window datasets for implicit discourse relation classification.
//!
//! The crate reads PDTB-style discourse annotations ([`corpus`]), builds
//! four kinds of context-window datasets over the implicit relations
//! ([`windowing`]), splits and encodes them ([`dataset`]), trains a small
//! 4-way softmax classifier ([`classifier`]) and compares runs with
//! Table-style metrics and two-sample t-tests ([`metrics`]). The
//! [`pipeline`] module ties the steps together behind reproducible,
//! manifest-producing commands.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod classifier;
pub mod corpus;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod windowing;

pub use error::{Error, Result};
