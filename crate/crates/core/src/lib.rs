//! Exact symbolic machinery for ordinal analysis of polynomial multiple
//! recurrence.
//!
//! The crate has four layers:
//!
//! * [`ordinal`] — arithmetic on ordinals below ε₀ in Cantor normal form.
//! * [`pet`] — integral polynomial systems, their weight matrices, and the
//!   PET reduction step with machine-checked weight-matrix descent.
//! * [`bounds`] — the metastability bound-composition calculus that turns a
//!   weight-matrix ordinal into a concrete tower-height exponent.
//! * [`finsys`] — finite measure-preserving ℤ^d actions: conditional
//!   expectation, factor towers, box averages on relative squares, the
//!   fiberwise convolution, metastable convergence checks, multiple
//!   recurrence averages, and an exhaustive density search.
//!
//! All algebraic identities are checked in exact rational arithmetic; floating
//! point only appears in the metastable search loop where inequalities against
//! a tolerance are the goal.

pub mod bounds;
pub mod finsys;
pub mod ordinal;
pub mod par;
pub mod pet;
pub mod poly;

pub use ordinal::Ordinal;
pub use pet::{PolySeq, PolySystem, Weight, WeightMatrix};
pub use poly::IntPolynomial;
