//! Spectral toolkit for a planar waveguide with absorbing Robin walls.
//!
//! The transverse operator `-d^2/dy^2` on `(0, l)` with boundary conditions
//! `u'(0) = -i a_0 u(0)`, `u'(l) = i a_l u(l)` is non-self-adjoint; its
//! eigenvalues `mu_n = lambda_n^2` sit below the real axis and the
//! eigenfunctions form a Riesz basis rather than an orthonormal one. This
//! crate computes those spectra by Newton continuation from the Neumann
//! case, builds the eigenfunctions and their biorthogonal duals in closed
//! form, and layers diagnostics and propagation tools on top.

pub mod basis;
pub mod error;
pub mod evolution;
pub mod geometry;
pub mod halfline;
pub mod linalg;
pub mod quadrature;
pub mod spectrum;
pub mod sweeps;

pub use error::{Error, Result};
pub use geometry::{Geometry, RobinPair};

// Every code block in the guide under `book/` runs as a doctest of this
// crate, so the prose cannot drift away from the API it documents.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/transverse-spectrum.md")]
    mod transverse_spectrum {}
    #[doc = include_str!("../../../book/src/eigenbasis.md")]
    mod eigenbasis {}
    #[doc = include_str!("../../../book/src/spectrum-geometry.md")]
    mod spectrum_geometry {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    mod evolution {}
    #[doc = include_str!("../../../book/src/smoothing.md")]
    mod smoothing {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
