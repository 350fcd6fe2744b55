//! Stabilization experiments and property verifiers built on the engine.

pub mod appendix;
pub mod corpus;
pub mod lemmas;
pub mod report;
pub mod suite;
pub mod tails;
pub mod twist;
pub mod verify;

pub use report::{Cell, Certificate, Outcome, Report, StabilizationReport, Verdict};
pub use twist::{
    colored_block, colored_homology, default_window, face_map_is_iso, sequence_bound, twist_sequence, twist_window,
    untwisted, ColoredBlock, LabConfig,
};
