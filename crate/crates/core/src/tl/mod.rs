//! Exact decategorified layer: Temperley-Lieb algebra, Jones-Wenzl
//! projectors, brackets with projector slots, colored Jones polynomials and
//! spin network evaluation.

pub mod bracket;
pub mod element;

pub use bracket::{bracket, colored_jones, series_tail_check, shifted_bracket, spin_network_eval, SlotFill, TailAgreement};
pub use element::{check_axioms, jones_wenzl, quantum_integer, tl_multiply, trace, TLElement, TLMatching, JW_MAX};
