//! Evaluation toolkit for end-to-end entity linking.
//!
//! Benchmarks and linker predictions are ingested into a common JSONL model,
//! evaluated with strong matching, and every error is assigned a
//! subcategory. Results are aggregated overall, per subcategory and per
//! entity type.

pub mod baseline;
pub mod cli;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod kb;
pub mod model;
pub mod nif;
pub mod service;
pub mod turtle;
pub mod workspace;

pub use error::{Error, Result};
