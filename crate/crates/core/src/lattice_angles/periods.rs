use serde::{Deserialize, Serialize};

use super::magic::{AngleSign, MagicAngle};
use super::ring::LatticeInt;
use super::SymmetryOrder;
use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Shift `(a¹, a²)` of the rotated layer.
pub type ShiftVector = Vec2;

/// Two periods of a commensurate superposition, with their integer
/// coordinates in the unrotated lattice basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodPair {
    pub b1: Vec2,
    pub b2: Vec2,
    pub coords: [[i64; 2]; 2],
    pub minimal: bool,
}

impl PeriodPair {
    fn from_ring(b1: LatticeInt, b2: LatticeInt, period: f64, minimal: bool) -> Self {
        PeriodPair {
            b1: b1.to_vec() * period,
            b2: b2.to_vec() * period,
            coords: [b1.coords(), b2.coords()],
            minimal,
        }
    }

    /// Area of the spanned parallelogram.
    pub fn area(&self) -> f64 {
        self.b1.cross(self.b2).abs()
    }
}

fn check_period(period: f64) -> Result<()> {
    if period > 0.0 && period.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("period must be positive, got {period}")))
    }
}

/// The vector that the rotation carries into the unrotated lattice.
fn rotation_image(angle: &MagicAngle) -> LatticeInt {
    match angle.sign {
        AngleSign::Positive => angle.target(),
        AngleSign::Negative => angle.source(),
    }
}

/// Periods `b2 = e_{n,m}` and `b1 = ρ̄·b2`, i.e. `(mT, −nT)` and `(nT, mT)`
/// for the square lattice, `e_{m+n,−n}` and `e_{n,m}` for the triangular one.
///
/// `minimal` is false when the pair can be divided by the common factor of
/// `e_{m,n}` and `e_{n,m}`; see [`minimal_periods`].
pub fn superposition_periods(angle: &MagicAngle, period: f64) -> Result<PeriodPair> {
    check_period(period)?;
    let b2 = rotation_image(angle);
    Ok(PeriodPair::from_ring(b2.times_rho_inv(), b2, period, !angle.is_reduced()))
}

/// Minimal period pair: [`superposition_periods`] divided by `1+i` (both
/// indices odd) or `1+ω` (`3 | m−n`).
pub fn minimal_periods(angle: &MagicAngle, period: f64) -> Result<PeriodPair> {
    check_period(period)?;
    let b2 = rotation_image(angle)
        .div_exact(angle.common_factor())
        .expect("common factor divides both indices");
    Ok(PeriodPair::from_ring(b2.times_rho_inv(), b2, period, true))
}

/// Lattice of shifts giving equivalent potentials, optionally refined to the
/// shifts that produce an exactly symmetric superposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceLattice {
    pub g1: Vec2,
    pub g2: Vec2,
    pub step: f64,
    pub covering_radius: f64,
    pub symmetry_centers: bool,
    pub symmetry: SymmetryOrder,
}

impl EquivalenceLattice {
    pub fn point(&self, k: [i64; 2]) -> Vec2 {
        self.g1 * k[0] as f64 + self.g2 * k[1] as f64
    }

    pub fn coordinates(&self, v: Vec2) -> [f64; 2] {
        let det = self.g1.cross(self.g2);
        [v.cross(self.g2) / det, self.g1.cross(v) / det]
    }

    /// Whether `v` is a lattice vector up to `tol` (absolute, in length units).
    pub fn contains(&self, v: Vec2, tol: f64) -> bool {
        let [u, w] = self.coordinates(v);
        (self.point([u.round() as i64, w.round() as i64]) - v).norm() <= tol
    }
}

/// `Λ + π_α Λ`, generated by `w·T` and `w·ρ·T` with `w = h / e_{m,n}`.
///
/// With `with_symmetry_centers` the generator is multiplied by `(1+i)/2`
/// (square) or `1/(1+ω)` (triangular): these shifts move a 4-fold (resp.
/// 3-fold) center of one layer onto one of the other.
pub fn equivalence_lattice(
    angle: &MagicAngle,
    period: f64,
    with_symmetry_centers: bool,
) -> Result<EquivalenceLattice> {
    check_period(period)?;
    let sym = angle.symmetry;
    let from = match angle.sign {
        AngleSign::Positive => angle.source(),
        AngleSign::Negative => angle.target(),
    };
    let num = angle.common_factor().mul(from.conj()).to_vec();
    let w = num * (1.0 / from.norm() as f64);
    let (w, step_factor, cover) = match (with_symmetry_centers, sym.is_square()) {
        (false, true) => (w, 1.0, 0.5f64.sqrt()),
        (false, false) => (w, 1.0, 1.0 / 3f64.sqrt()),
        (true, true) => (mul_c(w, Vec2::new(0.5, 0.5)), 0.5f64.sqrt(), 0.5f64.sqrt()),
        // 1/(1+ω) = (1 + ω̄)/3 = (1/2, −√3/6)
        (true, false) => (
            mul_c(w, Vec2::new(0.5, -3f64.sqrt() / 6.0)),
            1.0 / 3f64.sqrt(),
            1.0 / 3f64.sqrt(),
        ),
    };
    let g1 = w * period;
    let g2 = g1.rotated(sym.lattice_angle());
    let step = period * step_factor / (angle.reduced_norm() as f64).sqrt();
    Ok(EquivalenceLattice {
        g1,
        g2,
        step,
        covering_radius: step * cover,
        symmetry_centers: with_symmetry_centers,
        symmetry: sym,
    })
}

fn mul_c(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x)
}

/// Largest `|a′|` that [`reduce_shift`] can return: the covering radius of
/// the equivalence lattice.
pub fn shift_reduction_bound(angle: &MagicAngle, period: f64, to_symmetric: bool) -> Result<f64> {
    Ok(equivalence_lattice(angle, period, to_symmetric)?.covering_radius)
}

/// Shortest representative of `a` modulo the equivalence lattice; ties go
/// to the lexicographically smallest `(a¹, a²)`.
pub fn reduce_shift(
    a: ShiftVector,
    angle: &MagicAngle,
    period: f64,
    to_symmetric: bool,
) -> Result<ShiftVector> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("shift must be finite".into()));
    }
    let lat = equivalence_lattice(angle, period, to_symmetric)?;
    Ok(reduce_in(&lat, a))
}

pub(crate) fn reduce_in(lat: &EquivalenceLattice, a: Vec2) -> Vec2 {
    let [u, w] = lat.coordinates(a);
    let (u0, w0) = (u.round() as i64, w.round() as i64);
    let tie = 1e-12 * lat.step;
    let mut best = a - lat.point([u0, w0]);
    let mut best_n = best.norm();
    for du in -2..=2 {
        for dw in -2..=2 {
            let c = a - lat.point([u0 + du, w0 + dw]);
            let n = c.norm();
            let lex_less = c.x < best.x - tie || ((c.x - best.x).abs() <= tie && c.y < best.y - tie);
            let better = n < best_n - tie || (n <= best_n + tie && lex_less);
            if better {
                best = c;
                best_n = n;
            }
        }
    }
    // snap exact lattice vectors to zero
    if best_n <= tie {
        Vec2::ZERO
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_angles::enumerate_magic_angles;
    use SymmetryOrder::*;

    fn close(a: Vec2, b: Vec2) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn square_periods() {
        let a = MagicAngle::positive(Four, 2, 1).unwrap();
        let p = superposition_periods(&a, 1.0).unwrap();
        assert!(close(p.b1, Vec2::new(2.0, -1.0)) && close(p.b2, Vec2::new(1.0, 2.0)));
        assert!(p.minimal);
    }

    #[test]
    fn both_odd_halves() {
        let a = MagicAngle::positive(Four, 3, 1).unwrap();
        let raw = superposition_periods(&a, 1.0).unwrap();
        assert!(!raw.minimal);
        let half = minimal_periods(&a, 1.0).unwrap();
        assert!(close(half.b1, (raw.b1 - raw.b2) * 0.5));
        assert!(close(half.b2, (raw.b1 + raw.b2) * 0.5));
        assert!(close(half.b1, Vec2::new(1.0, -2.0)) && close(half.b2, Vec2::new(2.0, 1.0)));
    }

    #[test]
    fn hexagonal_period_length() {
        let a = MagicAngle::positive(Six, 2, 1).unwrap();
        let p = superposition_periods(&a, 1.0).unwrap();
        assert!((p.b1.norm() - 7f64.sqrt()).abs() < 1e-12);
        assert!((p.b2.norm() - 7f64.sqrt()).abs() < 1e-12);
        assert_eq!(p.coords, [[3, -1], [1, 2]]);
    }

    #[test]
    fn triangular_reduction_uses_factor_three() {
        let a = MagicAngle::positive(Three, 4, 1).unwrap();
        let raw = superposition_periods(&a, 1.0).unwrap();
        let min = minimal_periods(&a, 1.0).unwrap();
        assert!((raw.area() / min.area() - 3.0).abs() < 1e-12);
        assert!((min.b1.norm() - 7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn periods_lie_in_both_lattices() {
        for sym in [Four, Three, Six] {
            for a in enumerate_magic_angles(sym, 9) {
                let p = minimal_periods(&a, 1.0).unwrap();
                let base = super::super::LatticeBasis::new(sym, 1.0).unwrap();
                let rot = base.rotated(a.angle_radians);
                for b in [p.b1, p.b2] {
                    let c = rot.nearest(b);
                    assert!((rot.point(c) - b).norm() < 1e-9, "{a:?}");
                }
            }
        }
    }

    #[test]
    fn equivalence_steps() {
        let a = MagicAngle::positive(Four, 2, 1).unwrap();
        let l = equivalence_lattice(&a, 1.0, false).unwrap();
        assert!((l.step - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((l.g1.norm() - l.step).abs() < 1e-15);
        let t = MagicAngle::positive(Three, 2, 1).unwrap();
        let l = equivalence_lattice(&t, 1.0, false).unwrap();
        assert!((l.step - 1.0 / 7f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn equivalence_lattice_generated_by_both_bases() {
        use super::super::LatticeBasis;
        for sym in [Four, Three] {
            for a in enumerate_magic_angles(sym, 7) {
                let l = equivalence_lattice(&a, 1.0, false).unwrap();
                let base = LatticeBasis::new(sym, 1.0).unwrap();
                let rot = base.rotated(a.angle_radians);
                for v in [base.e1, base.e2, rot.e1, rot.e2] {
                    assert!(l.contains(v, 1e-9));
                }
                // index check: covolume of Λ + π_αΛ is T²·covol/N0
                let covol = base.e1.cross(base.e2) / a.reduced_norm() as f64;
                assert!((l.g1.cross(l.g2) - covol).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lattice_vectors_reduce_to_zero() {
        let a = MagicAngle::positive(Four, 5, 2).unwrap();
        assert_eq!(reduce_shift(Vec2::new(1.0, 0.0), &a, 1.0, false).unwrap(), Vec2::ZERO);
        assert_eq!(reduce_shift(Vec2::ZERO, &a, 1.0, true).unwrap(), Vec2::ZERO);
    }

    #[test]
    fn reduced_shift_is_shortest() {
        let a = MagicAngle::positive(Four, 2, 1).unwrap();
        let lat = equivalence_lattice(&a, 1.0, false).unwrap();
        let bound = shift_reduction_bound(&a, 1.0, false).unwrap();
        assert!((bound - 1.0 / 10f64.sqrt()).abs() < 1e-15);
        for k in 0..200 {
            let v = Vec2::new((k as f64 * 0.917).sin() * 2.5, (k as f64 * 0.313).cos() * 2.5);
            let r = reduce_shift(v, &a, 1.0, false).unwrap();
            assert!(r.norm() <= bound + 1e-12);
            assert!(lat.contains(v - r, 1e-9));
            // oracle: every equivalent copy within radius 3
            let mut oracle = f64::INFINITY;
            for i in -20..=20 {
                for j in -20..=20 {
                    let p = lat.point([i, j]);
                    if p.norm() <= 3.0 + v.norm() {
                        oracle = oracle.min((v - p).norm());
                    }
                }
            }
            assert!((r.norm() - oracle).abs() < 1e-12);
        }
    }
}
