use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::LatticeBasis;
use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Near-coincidence `m·e′ ≈ n·e` of two lattices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletPair {
    pub m: [i64; 2],
    pub n: [i64; 2],
    pub residual: f64,
}

/// Best pair with `max(|m¹|, |m²|) ≤ 2q`, by exhaustive search.
///
/// `basis2` is the (already rotated) lattice with the shorter period.
pub fn dirichlet_pair(basis1: &LatticeBasis, basis2: &LatticeBasis, q: u32) -> Result<DirichletPair> {
    if basis1.symmetry.is_square() != basis2.symmetry.is_square() {
        return Err(Error::InvalidInput("bases have different lattice types".into()));
    }
    if !(basis2.period < basis1.period) {
        return Err(Error::InvalidInput(format!(
            "second period {} must be shorter than the first {}",
            basis2.period, basis1.period
        )));
    }
    if q == 0 {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    let r = 2 * q as i64;
    let mut best: Option<DirichletPair> = None;
    for m1 in -r..=r {
        for m2 in -r..=r {
            if (m1, m2) == (0, 0) {
                continue;
            }
            let v = basis2.point([m1, m2]);
            let n = basis1.nearest(v);
            if n == [0, 0] {
                continue;
            }
            let residual = (v - basis1.point(n)).norm();
            if best.map_or(true, |b| residual < b.residual) {
                best = Some(DirichletPair { m: [m1, m2], n, residual });
            }
        }
    }
    let best = best.ok_or_else(|| Error::InvalidInput("no nonzero pair in the search box".into()))?;
    if best.residual <= 1e-12 * basis1.period {
        return Err(Error::CommensurateCollision { residual: best.residual });
    }
    Ok(best)
}

/// A periodic superposition approximating an incommensurate one: the second
/// layer is turned by `−δα` and stretched by `1+δλ` so that `m·e′` lands on
/// `n·e`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicApproximant {
    pub n_s: [i64; 2],
    pub m_s: [i64; 2],
    pub delta_alpha: f64,
    pub delta_lambda: f64,
    #[serde(rename = "T_s")]
    pub t_s: f64,
    pub norm_n: f64,
    pub q: u32,
    pub residual: f64,
    /// Rotation angle of the modified second layer, `α − δα`.
    pub alpha_s: f64,
    /// `n·e` and its image under the lattice rotation.
    pub periods: [Vec2; 2],
    pub period_coords: [[i64; 2]; 2],
}

fn lattice_norm(basis: &LatticeBasis, c: [i64; 2]) -> f64 {
    (basis.symmetry.norm_sq(c) as f64).sqrt()
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

impl PeriodicApproximant {
    /// Fails with `ApproximantBounds` unless `|δα| < 3/|n|²` and
    /// `|δλ| < 2√2/|n|²`.
    pub fn new(
        basis1: &LatticeBasis,
        basis2: &LatticeBasis,
        alpha: f64,
        pair: DirichletPair,
        q: u32,
    ) -> Result<Self> {
        let rot2 = basis2.rotated(alpha);
        let ne = basis1.point(pair.n);
        let me = rot2.point(pair.m);
        let delta_alpha = wrap_angle(me.arg() - ne.arg());
        let delta_lambda = me.norm() / ne.norm() - 1.0;
        let norm_n = lattice_norm(basis1, pair.n);
        let n2 = norm_n * norm_n;
        if !(delta_alpha.abs() < 3.0 / n2) {
            return Err(Error::ApproximantBounds(format!(
                "|δα| = {:e} ≥ 3/|n|² = {:e}",
                delta_alpha.abs(),
                3.0 / n2
            )));
        }
        if !(delta_lambda.abs() < 2.0 * 2f64.sqrt() / n2) {
            return Err(Error::ApproximantBounds(format!(
                "|δλ| = {:e} ≥ 2√2/|n|² = {:e}",
                delta_lambda.abs(),
                2.0 * 2f64.sqrt() / n2
            )));
        }
        let [n1, n2c] = pair.n;
        let rn = if basis1.symmetry.is_square() {
            [-n2c, n1]
        } else {
            [-n2c, n1 + n2c]
        };
        Ok(PeriodicApproximant {
            n_s: pair.n,
            m_s: pair.m,
            delta_alpha,
            delta_lambda,
            t_s: norm_n * basis1.period,
            norm_n,
            q,
            residual: pair.residual,
            alpha_s: alpha - delta_alpha,
            periods: [ne, basis1.point(rn)],
            period_coords: [pair.n, rn],
        })
    }

    /// Stretch factor `1+δλ` applied to the second layer.
    pub fn lambda_s(&self) -> f64 {
        1.0 + self.delta_lambda
    }
}

const MAX_Q: u32 = 2000;

/// Approximants with strictly increasing `|n_s|`, obtained by raising `q`
/// one step at a time. Candidates that violate the construction bounds are
/// skipped.
pub fn build_approximant_sequence(
    basis1: &LatticeBasis,
    basis2: &LatticeBasis,
    alpha: f64,
    s_max: usize,
) -> Result<Vec<PeriodicApproximant>> {
    let rot2 = basis2.rotated(alpha);
    let mut out: Vec<PeriodicApproximant> = Vec::with_capacity(s_max);
    let mut q = 1;
    while out.len() < s_max {
        if q > MAX_Q {
            return Err(Error::PrecisionExhausted { found: out.len() });
        }
        let pair = dirichlet_pair(basis1, &rot2, q)?;
        let norm = lattice_norm(basis1, pair.n);
        if out.last().map_or(true, |l| norm > l.norm_n) {
            match PeriodicApproximant::new(basis1, basis2, alpha, pair, q) {
                Ok(a) => out.push(a),
                Err(Error::ApproximantBounds(_)) => {}
                Err(e) => return Err(e),
            }
        }
        q += 1;
    }
    Ok(out)
}

/// Smallest `q ≤ max_q` with an integer relation `|q·x − p| ≤ tol`.
///
/// The residual is measured on `q·x`, not on `x − p/q`: the latter falls
/// below `1/q²` for every real `x`, so it cannot separate irrationals.
pub fn rational_relation(x: f64, max_q: u64, tol: f64) -> Option<(i64, u64)> {
    (1..=max_q).find_map(|q| {
        let qx = x * q as f64;
        let p = qx.round();
        ((qx - p).abs() <= tol).then_some((p as i64, q))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_angles::SymmetryOrder::{self, *};

    fn golden() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    fn bases(sym: SymmetryOrder, ratio: f64, alpha: f64) -> (LatticeBasis, LatticeBasis) {
        let b1 = LatticeBasis::new(sym, 1.0).unwrap();
        let b2 = LatticeBasis::new(sym, 1.0 / ratio).unwrap().rotated(alpha);
        (b1, b2)
    }

    fn oracle(b1: &LatticeBasis, b2: &LatticeBasis, q: i64) -> f64 {
        // distance of m·e′ to every n·e with |n| bounded, by brute force
        let mut best = f64::INFINITY;
        let r = 2 * q;
        let nb = 3 * q + 2;
        for m1 in -r..=r {
            for m2 in -r..=r {
                if (m1, m2) == (0, 0) {
                    continue;
                }
                let v = b2.point([m1, m2]);
                for n1 in -nb..=nb {
                    for n2 in -nb..=nb {
                        if (n1, n2) != (0, 0) {
                            best = best.min((v - b1.point([n1, n2])).norm());
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn golden_pair_matches_oracle() {
        let (b1, b2) = bases(Four, golden(), 0.0);
        let p = dirichlet_pair(&b1, &b2, 5).unwrap();
        assert!(p.residual < 2f64.sqrt() / 5.0);
        assert!((p.residual - oracle(&b1, &b2, 5)).abs() < 1e-12);
        // along the axis the pair is a ratio of Fibonacci numbers
        assert_eq!(p.m[1], 0);
        assert_eq!(p.n[1], 0);
        let fib = [1, 2, 3, 5, 8, 13, 21];
        assert!(fib.contains(&p.m[0].abs()) && fib.contains(&p.n[0].abs()));
    }

    #[test]
    fn commensurate_bases_collide() {
        let (b1, b2) = bases(Four, 2.0, 0.0);
        assert!(matches!(
            dirichlet_pair(&b1, &b2, 3),
            Err(Error::CommensurateCollision { .. })
        ));
    }

    #[test]
    fn residual_decreases_with_q() {
        let (b1, b2) = bases(Four, golden(), 0.3);
        let r: Vec<f64> = [5, 10, 20, 40]
            .iter()
            .map(|&q| dirichlet_pair(&b1, &b2, q).unwrap().residual)
            .collect();
        for w in r.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn approximant_sequence_invariants() {
        let b1 = LatticeBasis::new(Four, 1.0).unwrap();
        let b2 = LatticeBasis::new(Four, 1.0 / golden()).unwrap();
        let s = build_approximant_sequence(&b1, &b2, 0.3, 4).unwrap();
        assert_eq!(s.len(), 4);
        for w in s.windows(2) {
            assert!(w[1].norm_n > w[0].norm_n);
        }
        for a in &s {
            let n2 = a.norm_n * a.norm_n;
            assert!(a.delta_lambda.abs() < 2.0 * 2f64.sqrt() / n2);
            assert!(a.delta_alpha.abs() < 3.0 / n2);
            let mlen = (Four.norm_sq(a.m_s) as f64).sqrt() * b2.period;
            assert!((a.lambda_s() * a.norm_n - mlen).abs() < 1e-12 * mlen);
            assert!((a.t_s - a.norm_n).abs() < 1e-15);
        }
    }

    #[test]
    fn rational_relation_detects_fractions() {
        assert_eq!(rational_relation(0.375, 100, 1e-12), Some((3, 8)));
        assert_eq!(rational_relation(1.0 / golden(), 1_000_000, 1e-12), None);
        assert_eq!(rational_relation(2f64.sqrt(), 1_000_000, 1e-12), None);
    }
}
