//! Exact arithmetic of commensurate rotations of square and triangular
//! lattices, together with the rational approximation machinery used for
//! generic and incommensurate configurations.

mod approximation;
mod incommensurate;
mod magic;
mod periods;
mod ring;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

pub use approximation::{
    approximate_angle, approximation_bound, continued_fraction_convergents, generator_ratio,
};
pub use incommensurate::{
    build_approximant_sequence, dirichlet_pair, rational_relation, DirichletPair, PeriodicApproximant,
};
pub use magic::{enumerate_magic_angles, reduce_pair, AngleSign, ExactRotation, MagicAngle, TanValue};
pub use periods::{
    equivalence_lattice, minimal_periods, reduce_shift, shift_reduction_bound,
    superposition_periods, EquivalenceLattice, PeriodPair, ShiftVector,
};
pub use ring::LatticeInt;

/// Order of the rotation symmetry shared by both layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum SymmetryOrder {
    Four,
    Three,
    Six,
}

impl SymmetryOrder {
    pub fn order(self) -> u8 {
        match self {
            SymmetryOrder::Four => 4,
            SymmetryOrder::Three => 3,
            SymmetryOrder::Six => 6,
        }
    }

    /// Square lattice for order 4, triangular otherwise.
    pub fn is_square(self) -> bool {
        self == SymmetryOrder::Four
    }

    /// Angle between the two lattice basis vectors (90° or 60°).
    pub fn lattice_angle(self) -> f64 {
        if self.is_square() {
            FRAC_PI_2
        } else {
            FRAC_PI_3
        }
    }

    /// Smallest rotation leaving a potential of this symmetry invariant.
    pub fn symmetry_angle(self) -> f64 {
        std::f64::consts::TAU / self.order() as f64
    }

    /// Quadratic form of the lattice in basis coordinates.
    pub fn norm_sq(self, v: [i64; 2]) -> i64 {
        let [a, b] = v;
        if self.is_square() {
            a * a + b * b
        } else {
            a * a + a * b + b * b
        }
    }

    /// Interval of rotation angles that exhausts all distinct superpositions.
    pub fn angle_range(self) -> (f64, f64) {
        match self {
            SymmetryOrder::Four => (0.0, FRAC_PI_2),
            SymmetryOrder::Six => (0.0, FRAC_PI_3),
            SymmetryOrder::Three => (-FRAC_PI_3, FRAC_PI_3),
        }
    }
}

impl TryFrom<u8> for SymmetryOrder {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            4 => Ok(SymmetryOrder::Four),
            3 => Ok(SymmetryOrder::Three),
            6 => Ok(SymmetryOrder::Six),
            other => Err(Error::InvalidInput(format!(
                "symmetry order must be 3, 4 or 6, got {other}"
            ))),
        }
    }
}

impl From<SymmetryOrder> for u8 {
    fn from(s: SymmetryOrder) -> u8 {
        s.order()
    }
}

impl fmt::Display for SymmetryOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order())
    }
}

impl std::str::FromStr for SymmetryOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("not a symmetry order: {s}")))?;
        SymmetryOrder::try_from(v)
    }
}

/// Basis of a square or triangular period lattice.
///
/// `e2` is `e1` rotated by the lattice angle; both have length `period`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub e1: Vec2,
    pub e2: Vec2,
    pub period: f64,
    pub symmetry: SymmetryOrder,
}

impl LatticeBasis {
    /// Standard basis `e1 = (T, 0)`, `e2 = T·(0, 1)` or `T·(1/2, √3/2)`.
    pub fn new(symmetry: SymmetryOrder, period: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        let e2 = if symmetry.is_square() {
            Vec2::new(0.0, period)
        } else {
            Vec2::new(0.5 * period, 0.5 * 3f64.sqrt() * period)
        };
        Ok(LatticeBasis {
            e1: Vec2::new(period, 0.0),
            e2,
            period,
            symmetry,
        })
    }

    pub fn rotated(&self, alpha: f64) -> LatticeBasis {
        LatticeBasis {
            e1: self.e1.rotated(alpha),
            e2: self.e2.rotated(alpha),
            ..*self
        }
    }

    pub fn point(&self, c: [i64; 2]) -> Vec2 {
        self.e1 * c[0] as f64 + self.e2 * c[1] as f64
    }

    /// Real coordinates of `v` in this basis.
    pub fn coordinates(&self, v: Vec2) -> [f64; 2] {
        let det = self.e1.cross(self.e2);
        [v.cross(self.e2) / det, self.e1.cross(v) / det]
    }

    /// Closest lattice point to `v`, returned as integer coordinates.
    pub fn nearest(&self, v: Vec2) -> [i64; 2] {
        let [u, w] = self.coordinates(v);
        let (u0, w0) = (u.floor() as i64, w.floor() as i64);
        let mut best = [u0, w0];
        let mut best_d = f64::INFINITY;
        for du in 0..=1 {
            for dw in 0..=1 {
                let c = [u0 + du, w0 + dw];
                let d = (self.point(c) - v).norm_sq();
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
        }
        best
    }
}
