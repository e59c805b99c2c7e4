//! Complex continuous wavelet transforms over the complex plane.
//!
//! The crate builds admissible Laguerre–Gaussian mother wavelets, computes the
//! forward transform
//!
//! ```text
//! W(μ, κ) = (1/μ) ∫ d²η/π g(η) ψ*((η - κ)/μ)
//! ```
//!
//! and its inverse, and checks the Parseval identity, the isometry of energy
//! and the parameter-space reproducing kernel numerically. A truncated
//! two-mode Fock representation ([`fock`]) supplies test states and an
//! independent route to the entangled-state overlaps.

// `!(x > 0.0)` is how NaN is rejected along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ccwt;
pub mod error;
mod fft2;
pub mod fock;
pub mod format;
pub mod grid;
pub mod specfun;
pub mod verify;
pub mod wavelets;

pub use error::{Error, Result};
pub use grid::{ComplexPlaneGrid, Field, Measure, ScaleGrid};
pub use wavelets::{MotherWavelet, WaveletKind};

pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
    #[doc = include_str!("../../../book/src/wavelets.md")]
    mod wavelets {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/fock.md")]
    mod fock {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
