use super::magic::{AngleSign, MagicAngle};
use super::SymmetryOrder;
use crate::error::{Error, Result};

/// Denominators beyond this are not resolved by `f64` partial quotients.
const MAX_DENOMINATOR: i64 = 10_000_000;
const MAGIC_TOL: f64 = 1e-12;

/// The auxiliary ratio `x(α)` whose rational values `m/n` are exactly the
/// magic angles: `sec α + tan α` (square) or
/// `(√3 sec α + 2 tan α)/(√3 − tan α)` (triangular).
pub fn generator_ratio(alpha: f64, symmetry: SymmetryOrder) -> f64 {
    let (s, c) = alpha.sin_cos();
    if symmetry.is_square() {
        (1.0 + s) / c
    } else {
        let r3 = 3f64.sqrt();
        (r3 + 2.0 * s) / (r3 * c - s)
    }
}

/// Convergents `p/q` of the regular continued fraction of `x > 0`, up to
/// `max_count` of them or until `q` exceeds `max_den`.
pub fn continued_fraction_convergents(x: f64, max_count: usize, max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if !(x.is_finite() && x > 0.0) {
        return out;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, 0i64, 1i64);
    let mut t = x;
    while out.len() < max_count {
        let a = t.floor();
        if a > (i64::MAX / 4) as f64 {
            break;
        }
        let a = a as i64;
        let (p, q) = (a * p0 + p1, a * q0 + q1);
        if q > max_den {
            break;
        }
        out.push((p, q));
        (p1, q1, p0, q0) = (p0, q0, p, q);
        let frac = t - a as f64;
        if frac <= f64::EPSILON * t.max(1.0) {
            break;
        }
        t = 1.0 / frac;
    }
    out
}

/// `count` magic angles approaching `alpha`, read off the convergents of
/// [`generator_ratio`]. For order 3, negative `alpha` is approached by the
/// negative series.
pub fn approximate_angle(alpha: f64, symmetry: SymmetryOrder, count: usize) -> Result<Vec<MagicAngle>> {
    let (lo, hi) = symmetry.angle_range();
    if !(alpha > lo && alpha < hi && alpha != 0.0) {
        return Err(Error::InvalidInput(format!(
            "angle {alpha} outside the open range ({lo}, {hi})"
        )));
    }
    let sign = if alpha < 0.0 {
        AngleSign::Negative
    } else {
        AngleSign::Positive
    };
    let x = generator_ratio(alpha.abs(), symmetry);
    let mut out: Vec<MagicAngle> = Vec::with_capacity(count);
    for (m, n) in continued_fraction_convergents(x, usize::MAX, MAX_DENOMINATOR) {
        if m <= n {
            continue;
        }
        let cand = MagicAngle::new(symmetry, m, n, sign)?;
        if (cand.angle_radians - alpha).abs() < MAGIC_TOL {
            return Err(Error::AngleIsMagic { m, n });
        }
        match out.last_mut() {
            // equal denominators only occur for the first two convergents;
            // the later one is closer
            Some(last) if last.n == n => *last = cand,
            _ => out.push(cand),
        }
        if out.len() == count {
            return Ok(out);
        }
    }
    Err(Error::PrecisionExhausted { found: out.len() })
}

/// Approximation bound `1/n²` (square) or `(2/√3)/n²` (triangular).
pub fn approximation_bound(symmetry: SymmetryOrder, n: i64) -> f64 {
    let k = if symmetry.is_square() {
        1.0
    } else {
        2.0 / 3f64.sqrt()
    };
    k / (n as f64 * n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;
    use SymmetryOrder::*;

    #[test]
    fn ratio_is_rational_at_magic_angles() {
        for (sym, m, n) in [(Four, 2, 1), (Four, 7, 4), (Six, 2, 1), (Three, 5, 3)] {
            let a = MagicAngle::positive(sym, m, n).unwrap();
            let x = generator_ratio(a.angle_radians, sym);
            assert!((x - m as f64 / n as f64).abs() < 1e-13, "{sym} {m} {n}: {x}");
        }
    }

    #[test]
    fn silver_ratio_convergents() {
        // 1+√2 = [2; 2, 2, ...]: p_k = 2p_{k-1} + p_{k-2}
        let c = continued_fraction_convergents(1.0 + 2f64.sqrt(), 6, 1 << 40);
        let mut expect = vec![(2i64, 1i64), (5, 2)];
        while expect.len() < 6 {
            let k = expect.len();
            expect.push((2 * expect[k - 1].0 + expect[k - 2].0, 2 * expect[k - 1].1 + expect[k - 2].1));
        }
        assert_eq!(c, expect);
    }

    #[test]
    fn quarter_turn_approximants() {
        let a = approximate_angle(FRAC_PI_4, Four, 4).unwrap();
        let pairs: Vec<_> = a.iter().map(|x| (x.m, x.n)).collect();
        assert_eq!(pairs, vec![(2, 1), (5, 2), (12, 5), (29, 12)]);
        let e = (a[1].angle_radians - FRAC_PI_4).abs();
        assert_eq!(a[1].tan_value.to_string(), "21/20");
        // atan(21/20) − π/4 = atan(1/41)
        assert!((e - (1.0f64 / 41.0).atan()).abs() < 1e-15);
        assert!(e < 0.25);
    }

    #[test]
    fn exact_hit_is_rejected() {
        let a = MagicAngle::positive(Four, 2, 1).unwrap();
        assert_eq!(
            approximate_angle(a.angle_radians, Four, 3),
            Err(Error::AngleIsMagic { m: 2, n: 1 })
        );
    }

    #[test]
    fn negative_series_approximants() {
        let a = approximate_angle(-0.4, Three, 3).unwrap();
        for x in &a {
            assert_eq!(x.sign, AngleSign::Negative);
            assert!((x.angle_radians + 0.4).abs() < approximation_bound(Three, x.n));
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(approximate_angle(1.2, Six, 2).is_err());
        assert!(approximate_angle(-0.1, Four, 2).is_err());
    }
}
