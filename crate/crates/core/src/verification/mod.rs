//! Measured checks of the width, diameter and convergence bounds.
//!
//! Every harness is deterministic: parallel tasks are collected in input
//! order and all randomness is seeded.

mod convergence;
mod diameters;
mod widths;

pub use convergence::{
    delta_mn, delta_s, verify_incommensurate, verify_theorem_convergence, Approximant, BracketEntry,
    ConvergenceReport, MAX_REDUCED_NORM,
};
pub use diameters::{verify_diameter_bound, DiameterEntry, DiameterReport};
pub use widths::{verify_interval_width, IntervalWidthReport, ShiftSample};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::lattice_angles::SymmetryOrder;
use crate::levelsets::resolution_for;
use crate::potential::{Field, SuperpositionSpec};

/// Grid size policy shared by the harnesses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub per_wavelength: usize,
    pub min_samples: usize,
    pub max_samples: usize,
    /// Bisection tolerance; `None` uses the grid default.
    pub tol: Option<f64>,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { per_wavelength: 16, min_samples: 64, max_samples: 512, tol: None }
    }
}

impl Resolution {
    pub fn samples<F: Field + ?Sized>(&self, field: &F, axis: Vec2) -> usize {
        resolution_for(field, axis, self.per_wavelength).clamp(self.min_samples, self.max_samples)
    }

    fn validate(&self) -> Result<()> {
        if self.per_wavelength == 0 || self.min_samples > self.max_samples {
            return Err(Error::InvalidInput(format!("bad resolution {self:?}")));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidInput(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

/// Constant of the diameter lemma: `√5·C₁/2` (square) or `C₁` (triangular).
pub fn diameter_constant(symmetry: SymmetryOrder, c1: f64) -> f64 {
    if symmetry.is_square() {
        5f64.sqrt() * c1 / 2.0
    } else {
        c1
    }
}

/// Period of the family, in which the second layer must be commensurate
/// with the first: `T_U/λ = T_V`.
fn common_period(family: &SuperpositionSpec) -> Result<f64> {
    let t = family.v1.period();
    let t2 = family.u.period() / family.lambda;
    if (t - t2).abs() > 1e-12 * t {
        return Err(Error::InvalidInput(format!(
            "magic angles need equal layer periods, got {t} and {t2}"
        )));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_angles::MagicAngle;
    use crate::potential::{cosine_family, BoundConstants};
    use std::f64::consts::TAU;
    use SymmetryOrder::*;

    fn cos_family(t2: f64) -> SuperpositionSpec {
        let c = cosine_family(Four, TAU).unwrap();
        SuperpositionSpec::linear(c.clone(), c.with_period(t2).unwrap(), 0.0, Vec2::ZERO).unwrap()
    }

    #[test]
    fn delta_mn_by_hand() {
        let k = BoundConstants { c1: 4.0, c2: 0.0, c3: 0.0 };
        let a = MagicAngle::positive(Four, 5, 2).unwrap();
        // N₀ = 29, n = 2, D = 2√5
        let expect = 2.0 * 5f64.sqrt() * TAU / 29f64.powf(1.0 / 6.0)
            + 4.0 * 29f64.powf(5.0 / 6.0) * TAU / 4.0
            + 4.0 * TAU / 58f64.sqrt();
        assert!((delta_mn(&a, TAU, &k) - expect).abs() < 1e-12);
        let b = MagicAngle::positive(Four, 3, 1).unwrap();
        // both odd: N₀ = 5
        let expect = 2.0 * 5f64.sqrt() * TAU / 5f64.powf(1.0 / 6.0)
            + 4.0 * 5f64.powf(5.0 / 6.0) * TAU
            + 4.0 * TAU / 10f64.sqrt();
        assert!((delta_mn(&b, TAU, &k) - expect).abs() < 1e-12);
    }

    #[test]
    fn delta_s_decays_as_cube_root() {
        let d1 = delta_s(Four, TAU, 2.0, 1.0);
        assert!((d1 - (5f64.sqrt() + 6.0 + 4.0 * 2f64.sqrt()) * TAU).abs() < 1e-12);
        assert!((delta_s(Four, TAU, 2.0, 8.0) - d1 / 2.0).abs() < 1e-12);
        assert!((delta_s(Three, 1.0, 1.0, 1.0) - (4.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn cosine_diameters_pass_and_empty_sets_are_trivial() {
        let c = cosine_family(Four, TAU).unwrap();
        let r = verify_diameter_bound(&c, &[0.1, 0.5, 5.0], 2, Resolution::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.entries[2].measured, 0.0);
        assert!(r.entries[0].measured >= r.entries[1].measured);
        assert!(verify_diameter_bound(&c, &[0.0], 2, Resolution::default()).is_err());
    }

    #[test]
    fn incommensurate_preconditions() {
        let res = Resolution::default();
        let e = verify_incommensurate(&cos_family(TAU * 1.5), 0.3, 2, res).unwrap_err();
        assert!(matches!(e, Error::InvalidInput(_)), "{e}");
        let e = verify_incommensurate(&cos_family(TAU * 0.375), 0.3, 2, res).unwrap_err();
        assert!(matches!(e, Error::CommensurateCollision { .. }), "{e}");
    }

    #[test]
    fn magic_harnesses_need_equal_periods() {
        let a = MagicAngle::positive(Four, 2, 1).unwrap();
        let e = verify_interval_width(&cos_family(TAU * 0.5), &a, 2, 0, Resolution::default()).unwrap_err();
        assert!(matches!(e, Error::InvalidInput(_)));
        let e = verify_theorem_convergence(&cos_family(TAU), a.angle_radians, 2, Resolution::default()).unwrap_err();
        assert!(matches!(e, Error::AngleIsMagic { m: 2, n: 1 }), "{e}");
    }

    #[test]
    fn reports_are_reproducible() {
        let a = MagicAngle::positive(Four, 2, 1).unwrap();
        let res = Resolution { min_samples: 32, max_samples: 32, ..Default::default() };
        let run = || serde_json::to_string(&verify_interval_width(&cos_family(TAU), &a, 3, 5, res).unwrap()).unwrap();
        assert_eq!(run(), run());
    }
}
