//! Exact and numeric tools for the unicritical family z^d + c.
//!
//! The crate builds critical-orbit, Gleason and Misiurewicz polynomials over
//! the integers, finds their complex roots, computes escape rates and
//! canonical heights of rational parameters, certifies S-integrality through
//! exact resultants, and tabulates logarithmic equidistribution averages.

pub mod dd;
pub mod dynpoly;
pub mod equidist;
pub mod error;
pub mod green;
pub mod heights;
pub mod integrality;
pub mod modular;
pub mod numtheory;
pub mod poly;
pub mod resultant;
pub mod rootfind;
pub mod serde_big;

pub use error::{Error, Result};
pub use poly::IntPolynomial;
