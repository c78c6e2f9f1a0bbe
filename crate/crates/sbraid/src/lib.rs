//! Exact region counting and certification for integer deformations of the
//! braid arrangement.
//!
//! An arrangement is specified by a family `S = (S_{a,b})` of finite integer
//! sets, one per pair of coordinates, giving hyperplanes `x_a - x_b = s` for
//! `s in S_{a,b}`. The crate counts regions three independent ways and checks
//! they agree:
//!
//! * a signed sum over boxed labeled plane trees ([`bernardi`]),
//! * exact geometric cell enumeration with rational witnesses ([`geometry`]),
//! * Zaslavsky evaluation of the characteristic polynomial computed by the
//!   finite-field method ([`oracle`]).
//!
//! On top of the counts it certifies the per-region refinement (every region
//! contributes exactly 1 to the signed sum) and computes per-tree
//! contributions both combinatorially and geometrically ([`contrib`]).

pub mod bernardi;
pub mod contrib;
pub mod diff;
pub mod geometry;
pub mod oracle;
pub mod report;
pub mod spec;
pub mod trees;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
