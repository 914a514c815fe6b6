//! Command-line companion to the detection core: CSV ingestion, cache and
//! model file formats, reports, charts, and the stage pipeline behind the
//! `nids` binary.

pub mod charts;
pub mod config;
pub mod error;
pub mod ingest;
pub mod matio;
pub mod modelio;
pub mod pipeline;
pub mod report;
pub mod synth;
