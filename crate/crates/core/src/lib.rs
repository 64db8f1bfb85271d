//! Spectral decimation for the Sierpinski gasket and its double cover.
//!
//! The crate generates the complete Laplacian spectrum of the gasket (with
//! Neumann or Dirichlet boundary conditions) and of its boundaryless double
//! cover from the inverse branches of `z -> z(5 - z)`, evaluates the
//! eigenvalue counting functions exactly, and checks, as integer identities,
//! that the double-cover counting function equals `2 G(t) t^alpha` with no
//! remainder on a full-measure open set of scales.
//!
//! - [`decimation`]: the inverse branches, the renormalized limit `psi`, and
//!   the primitive eigenvalue families.
//! - [`catalog`]: the cycle structure of the spectrum and counting functions.
//! - [`weyl`]: the open set where the Weyl formula is exact, the periodic
//!   functions `G` and `G1`, and the exactness checks.
//! - [`julia`]: the gap intervals in `[0, 5]` and the shrinking cover of the
//!   exceptional Cantor set.
//! - [`graph`]: brute-force graph approximations and their dense spectra,
//!   used as an independent oracle for the catalog.
//! - [`verify`]: the verification suites behind `sgweyl verify`.

// Negated float comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod decimation;
pub mod eigen;
mod error;
pub mod export;
pub mod graph;
pub mod julia;
pub mod verify;
pub mod weyl;

pub use catalog::{Catalog, CatalogConfig, CountingResult, SpectralLine};
pub use decimation::{phi, phi_word, psi, Generator, Sign, SignWord};
pub use error::{Error, Result};

/// `log 3 / log 5`, the growth exponent of the counting functions.
pub fn alpha() -> f64 {
    3f64.ln() / 5f64.ln()
}
