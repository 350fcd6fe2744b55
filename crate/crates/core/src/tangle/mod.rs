//! Planar diagrams in sliced (Morse) form.

pub mod braid;
pub mod cable;
pub mod diagram;
pub mod geometry;
pub mod io;
pub mod moves;
pub mod slice;
pub mod spin;

pub use braid::{full_twists, torus_braid, torus_braid_fractional, BraidWord};
pub use cable::{cable, fill_slots_with_turnback, insert_twists, ColoredLink, Handedness, Placement, Twisted};
pub use diagram::{CrossKind, Crossing, LinkDiagram, ResolutionState};
pub use geometry::Geometry;
pub use moves::{pull_turnback, TurnbackPull};
pub use slice::{pair, Hint, PairLayout, Slice, SlicedTangle, Slot};
pub use spin::{BundleSlice, SpinNetwork};
