//! Eigenvalue clusters of the Robin Laplacian on the unit hemisphere.
//!
//! The Robin problem `-Δu = λu`, `∂u/∂n + σu = 0` on the equator has its
//! spectrum grouped into clusters of `ℓ+1` eigenvalues near `ℓ(ℓ+1)`. This
//! crate builds the finite cluster operators whose spectra describe the
//! Robin–Neumann gaps, evaluates the limiting gap densities, and checks
//! both against an independent Galerkin solver and a 1D model problem.
//!
//! Modules, bottom up:
//!
//! - [`numerics`]: log-Gamma, quadrature, Jacobi and QL eigensolvers.
//! - [`harmonics`]: equator trace amplitudes `A_{ℓ,m}`, `B_{ℓ,m}`, Legendre values.
//! - [`boundary`]: the Robin coefficient as a trigonometric polynomial.
//! - [`cluster`]: cluster matrices, gap spectra, sandwich bounds, model traces.
//! - [`density`]: limiting density functionals and the geodesic-average comparison.
//! - [`galerkin`]: full hemisphere solver and the odd-coefficient construction.
//! - [`sl1d`]: Robin and step-potential Sturm–Liouville problems on `[0, 1]`.
//! - [`verify`]: the numbered acceptance checks.
//! - [`cli`]: configuration, subcommands and report writers.

pub mod boundary;
pub mod cli;
pub mod cluster;
pub mod density;
pub mod error;
pub mod galerkin;
pub mod harmonics;
pub mod numerics;
pub mod report;
pub mod sl1d;
pub mod verify;

pub use boundary::BoundarySymbol;
pub use error::{Error, Result};
