//! Level-line topology for superpositions of rotation-symmetric periodic
//! potentials.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice_angles`] – exact commensurate ("magic") rotation angles, period
//!   and shift-equivalence lattices, rational approximation of generic angles
//!   and Dirichlet-type near-coincidences of incommensurate lattices.
//! * [`potential`] – symmetric finite Fourier potentials, their superpositions
//!   `V(r; α, a, λ)`, the four-periodic lift and certified gradient bounds.
//! * [`levelsets`] – grid sampling, contour tracing, component labeling on the
//!   torus, A(−)/A(+) classification and bisection for critical levels.
//! * [`verification`] – harnesses that measure interval widths, component
//!   diameters and the convergence of critical levels along approximants.

pub mod error;
pub mod geometry;
pub mod lattice_angles;
pub mod levelsets;
pub mod potential;
pub mod verification;

pub use error::{Error, Result};
pub use geometry::Vec2;
