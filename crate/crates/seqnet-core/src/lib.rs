#![cfg_attr(not(feature = "std"), no_std)]

//! Core algorithms for learning graphical models from genomic-style data.
//!
//! Everything in this crate is a pure function over in-memory values: typed
//! datasets and contingency tables, conditional-independence tests (Fisher's
//! z, G², stratified Jonckheere-Terpstra), constraint-based structure
//! learning (PC-stable, IAMB Markov blankets), correlation and shrinkage
//! partial-correlation networks, an additive kinship regression model, and
//! seeded simulators with ground truth for benchmarking all of the above.
//!
//! File formats, serialization, and the command-line interface live in the
//! companion `seqnet` crate; this crate only needs `alloc`.

extern crate alloc;

pub mod assoc;
pub mod ci;
pub mod data;
pub mod error;
pub mod genomics;
pub mod graph;
pub mod learn;
pub mod linalg;
pub mod numeric;
pub mod random;
pub mod sim;

pub use error::{Error, Result};
