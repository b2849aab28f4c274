//! Spatial bandwidth and degrees-of-freedom analysis for line-of-sight links
//! between linear antenna arrays.
//!
//! Every length is expressed in wavelengths (λ = 1) and every angle in
//! radians. The source array lies along the z-axis of a receiving coordinate
//! system centred on the receive array; see [`geometry`] for the conventions.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and parallel sweeps live in the `losdof-cli` crate.
//!
//! ```
//! use losdof::geometry::{Assembly, ReceiveDirection};
//! use losdof::dof::k_number;
//! use losdof::regions::r0_threshold;
//!
//! let r0 = r0_threshold(400.0, 20.0).unwrap();
//! assert_eq!(r0.approx, 16_000.0);
//!
//! let assembly = Assembly::new(400.0, 20.0, r0.exact.unwrap(), core::f64::consts::FRAC_PI_2).unwrap();
//! let report = k_number(&assembly, ReceiveDirection::Z).unwrap();
//! assert!((report.k_upper - 1.0).abs() < 1e-12);
//! ```
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bandwidth;
pub mod channel;
pub mod dof;
mod error;
pub mod geometry;
pub(crate) mod math;
pub mod quadrature;
pub mod regions;
pub mod roots;
pub mod scenarios;

pub use error::{Error, Result};
