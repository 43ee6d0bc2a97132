//! Reference implementations kept deliberately independent of `pulsecorr-core`.
//!
//! Everything in here favours the most literal route to an answer: explicit
//! 4x4 boost matrices, O(N^2) transforms, two-pass statistics, and Mie series
//! evaluated in fixed-point arithmetic with several hundred bits of precision.
//! None of it is fast and none of it shares code with the production path.

pub mod boost;
pub mod dft;
pub mod hp;
pub mod mie;
pub mod stats;

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
