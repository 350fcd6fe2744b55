//! Khovanov homology for cabled and twisted link diagrams.
//!
//! The crate is organised bottom up:
//! - [`algebra`]: exact integers, rings, Laurent polynomials and rational functions.
//! - [`tangle`]: sliced tangle diagrams, braids, closures, cabling and twist slots.
//! - [`grading`]: grading conventions, normalization shifts and stabilization bounds.
//! - [`engine`]: chain complexes, the raw cube, the scanning simplifier and homology.
//! - [`tl`]: Temperley-Lieb algebra, Jones-Wenzl projectors and bracket evaluation.
//! - [`lab`]: stabilization experiments and property verifiers.

pub mod algebra;
pub mod engine;
pub mod error;
pub mod grading;
pub mod lab;
pub mod tangle;
pub mod tl;

pub use error::{Error, Result};

/// Crate version; part of every cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
