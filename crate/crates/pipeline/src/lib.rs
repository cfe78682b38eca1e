//! Pipeline, file formats, and CLI plumbing for building a directed
//! speaker-to-mentioned-person network from a quotation corpus and a
//! Wikidata-derived snapshot.

pub mod config;
pub mod corpus_io;
pub mod output;
pub mod run;
pub mod stages;
pub mod synth;

pub use quotenet_core as core;
