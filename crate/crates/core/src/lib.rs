//! Trigonometric polynomial shearlets on the torus `[-π, π)²`.
//!
//! The crate builds shearlet symbols sampled on `ℤ²`, computes shearlet
//! coefficients of periodized indicator functions through exact FFT folding,
//! aggregates them into edge maps and ships numerical harnesses for the
//! decay and bound estimates that hold for this system.

pub mod cli;
pub mod coeffs;
pub mod error;
pub mod fold;
pub mod symbols;
pub mod system;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use symbols::{EllipseRegion, FourierProvider, FourierTable};
pub use system::{Orientation, ShearletIndex, SparseSymbol};
pub use window::Window;
