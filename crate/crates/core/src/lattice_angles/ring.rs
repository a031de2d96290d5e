//! Gaussian (`Z[i]`) and Eisenstein (`Z[ω]`, `ω = e^{iπ/3}`) integers.
//!
//! A lattice vector `a·e1 + b·e2` is identified with `a + b·ρ` where `ρ` is
//! `i` for the square lattice and `ω` for the triangular one, so rotations and
//! lattice products become ring multiplication.

use serde::{Deserialize, Serialize};

use super::SymmetryOrder;
use crate::geometry::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeInt {
    pub a: i64,
    pub b: i64,
    pub square: bool,
}

impl LatticeInt {
    pub fn new(symmetry: SymmetryOrder, a: i64, b: i64) -> Self {
        LatticeInt {
            a,
            b,
            square: symmetry.is_square(),
        }
    }

    pub fn coords(self) -> [i64; 2] {
        [self.a, self.b]
    }

    pub fn norm(self) -> i64 {
        let (a, b) = (self.a, self.b);
        if self.square {
            a * a + b * b
        } else {
            a * a + a * b + b * b
        }
    }

    pub fn conj(self) -> Self {
        if self.square {
            LatticeInt { b: -self.b, ..self }
        } else {
            // conj(ω) = 1 − ω
            LatticeInt {
                a: self.a + self.b,
                b: -self.b,
                ..self
            }
        }
    }

    pub fn mul(self, o: LatticeInt) -> Self {
        debug_assert_eq!(self.square, o.square);
        let (a, b, c, d) = (self.a, self.b, o.a, o.b);
        if self.square {
            LatticeInt {
                a: a * c - b * d,
                b: a * d + b * c,
                ..self
            }
        } else {
            // ω² = ω − 1
            LatticeInt {
                a: a * c - b * d,
                b: a * d + b * c + b * d,
                ..self
            }
        }
    }

    /// Multiplication by the generator `ρ` (rotation by 90° or 60°).
    pub fn times_rho(self) -> Self {
        self.mul(LatticeInt { a: 0, b: 1, ..self })
    }

    /// Multiplication by `ρ̄ = ρ⁻¹`.
    pub fn times_rho_inv(self) -> Self {
        self.mul(LatticeInt { a: 0, b: 1, ..self }.conj())
    }

    /// Exact quotient, if `o` divides `self`.
    pub fn div_exact(self, o: LatticeInt) -> Option<Self> {
        let n = o.norm();
        if n == 0 {
            return None;
        }
        let p = self.mul(o.conj());
        if p.a % n == 0 && p.b % n == 0 {
            Some(LatticeInt {
                a: p.a / n,
                b: p.b / n,
                ..self
            })
        } else {
            None
        }
    }

    /// Cartesian position in units of the lattice period.
    pub fn to_vec(self) -> Vec2 {
        let (a, b) = (self.a as f64, self.b as f64);
        if self.square {
            Vec2::new(a, b)
        } else {
            Vec2::new(a + 0.5 * b, 0.5 * 3f64.sqrt() * b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_is_multiplicative() {
        for sym in [SymmetryOrder::Four, SymmetryOrder::Six] {
            for (a, b, c, d) in [(2, 1, 3, -1), (5, 2, -4, 7), (0, 3, 1, 1)] {
                let x = LatticeInt::new(sym, a, b);
                let y = LatticeInt::new(sym, c, d);
                assert_eq!(x.mul(y).norm(), x.norm() * y.norm());
                assert_eq!(x.norm(), x.to_vec().norm_sq().round() as i64);
            }
        }
    }

    #[test]
    fn rho_is_a_rotation() {
        for sym in [SymmetryOrder::Four, SymmetryOrder::Three] {
            let x = LatticeInt::new(sym, 3, -2);
            let r = x.times_rho().to_vec();
            let expect = x.to_vec().rotated(sym.lattice_angle());
            assert!((r - expect).norm() < 1e-12);
            assert_eq!(x.times_rho().times_rho_inv(), x);
        }
    }

    #[test]
    fn exact_division() {
        let s = SymmetryOrder::Six;
        let z = LatticeInt::new(s, 1, 4);
        let g = LatticeInt::new(s, 1, 1);
        assert_eq!(z.div_exact(g).unwrap().coords(), [2, 1]);
        assert!(LatticeInt::new(s, 2, 1).div_exact(g).is_none());
    }
}
