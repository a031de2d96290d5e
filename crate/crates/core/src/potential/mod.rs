//! Symmetric Fourier potentials and their rotated, shifted superpositions.

mod fourier;
mod superposition;

pub use fourier::{
    cosine_family, make_symmetric_potential, orbit, reciprocal_basis, symmetrize,
    CoefficientSource, FourierTerm, PotentialSpec,
};
pub use superposition::{
    bound_constants, period_mismatch, shift_identity_check, translation_identity,
    BoundConstants, Composition, LiftedFunction, Monomial, Polynomial, SuperpositionSpec,
    MAX_DEGREE,
};

use crate::geometry::Vec2;

/// A scalar field on the plane that can be sampled concurrently.
pub trait Field: Sync {
    fn value(&self, r: Vec2) -> f64;
    fn shortest_wavelength(&self) -> f64;
}

impl Field for PotentialSpec {
    fn value(&self, r: Vec2) -> f64 {
        self.eval(r)
    }
    fn shortest_wavelength(&self) -> f64 {
        PotentialSpec::shortest_wavelength(self)
    }
}

impl Field for SuperpositionSpec {
    fn value(&self, r: Vec2) -> f64 {
        self.eval(r)
    }
    fn shortest_wavelength(&self) -> f64 {
        SuperpositionSpec::shortest_wavelength(self)
    }
}
