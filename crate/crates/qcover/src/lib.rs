//! Exact multiplicative heights, bounded-height rational point
//! enumeration, strong parametrizations of definable curves and
//! surfaces, and the determinant-method covering engine that covers
//! all bounded-height rational points of a parametrized set by an
//! explicitly bounded number of hypersurfaces, emitting certificates
//! that an independent verifier can replay.
//!
//! Everything is exact: `BigRational` scalars, fraction-free
//! determinants, Sturm-sequence root isolation, and outward-rounded
//! rational interval arithmetic for the analytic bounds. No floating
//! point participates in any decision.

pub mod algnum;
pub mod cover;
pub mod enumerate;
pub mod error;
pub mod exponents;
pub mod heights;
pub mod interval;
pub mod linalg;
pub mod mpoly;
pub mod parametrize;
pub mod poly;
pub mod rational;

pub use error::Error;
pub use exponents::ExponentProfile;
pub use rational::{QPoint, Rat};
