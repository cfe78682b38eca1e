//! Core algorithms for turning a speaker-attributed quotation corpus into a
//! directed speaker-to-mentioned-person network, plus the graph and
//! demographic statistics computed over it.
//!
//! This crate is `no_std` (alloc required) and contains no IO. File formats,
//! the CLI, and the pipeline orchestration live in the companion `quotenet`
//! crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod cluster;
pub mod date;
pub mod dsu;
pub mod enrich;
pub mod graph;
pub mod link;
pub mod namebias;
pub mod preprocess;
pub mod text;
pub mod types;

pub use types::Qid;
