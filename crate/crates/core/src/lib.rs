//! Building blocks for a fused-dataset network intrusion detection pipeline.
//!
//! The crate covers the in-memory half of the job: raw-table encoding, the
//! 48-column positional feature alignment between the UNSW-NB15 and
//! KDD-Cup-99 layouts, stratified splitting, minority oversampling, three
//! from-scratch classifiers (CART forest, second-order boosted trees, L2
//! logistic regression), randomized hyperparameter search over stratified
//! k-fold, and binary classification metrics with learning curves.
//!
//! Everything here is `no_std` (with `alloc`): no files, no clocks, no
//! threads. All randomness flows through seeded ChaCha streams from [`rng`],
//! so every result is reproducible bit for bit. CSV ingest, cache and model
//! files, charts, and the command-line driver live in the companion
//! `nids-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod data;
pub mod eval;
mod fmath;
pub mod matrix;
pub mod model;
pub mod preprocess;
pub mod rng;
pub mod tune;

pub use matrix::FeatureMatrix;
