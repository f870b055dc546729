//! Numerical core for Littlewood-Paley square functions over lacunary
//! frequency sets: discrete spectra, interval collections, square
//! functions, weights and norms, auxiliary maximal operators, and the
//! growth-law experiments built from them.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod auxops;
pub mod bump;
pub mod error;
pub mod experiments;
pub mod fft;
pub mod lacunary;
pub mod measures;
pub mod spectral;
pub mod squarefn;

pub use error::{Error, Result};
pub use num_complex::Complex64;
