//! Exact arithmetic: integers, coefficient rings, Laurent polynomials,
//! rational functions and integer matrix normal forms.

pub mod int;
pub mod laurent;
pub mod rational;
pub mod ring;
pub mod snf;

pub use int::Int;
pub use laurent::LaurentPoly;
pub use rational::LaurentRational;
pub use ring::{Ring, RingKind, F2};
