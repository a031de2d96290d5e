use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{common_period, diameter_constant, Resolution};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::lattice_angles::{
    approximate_angle, build_approximant_sequence, minimal_periods, rational_relation, LatticeBasis,
    MagicAngle, PeriodPair, PeriodicApproximant, SymmetryOrder,
};
use crate::levelsets::singular_net;
use crate::potential::{bound_constants, period_mismatch, BoundConstants, SuperpositionSpec};

/// Approximants are limited to `N₀ ≤ 200`.
pub const MAX_REDUCED_NORM: i64 = 200;

const PERIOD_SAMPLES: usize = 1000;
const PERIOD_SEED: u64 = 0x9e37;
const PERIOD_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Approximant {
    Magic(MagicAngle),
    Periodic(PeriodicApproximant),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub approximant: Approximant,
    pub c0: f64,
    pub tol: f64,
    pub resolution: [usize; 2],
    pub constants: BoundConstants,
    pub delta: f64,
    pub bracket: [f64; 2],
    pub width: f64,
    pub net_invariant: bool,
    /// Mismatch along both approximant periods (incommensurate runs only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub period_mismatch: Option<[f64; 2]>,
    /// `√2·T/q` (incommensurate runs only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub target_alpha: f64,
    pub symmetry: SymmetryOrder,
    pub period: f64,
    pub entries: Vec<BracketEntry>,
    pub widths_decreasing: bool,
    pub brackets_overlap: bool,
    /// `|c₀⁽ᵏ⁾ − c₀⁽ᵏ⁺¹⁾| ≤ Δ⁽ᵏ⁾ + Δ⁽ᵏ⁺¹⁾` for all consecutive pairs.
    pub cauchy: bool,
    /// Later `c₀` outside an earlier bracket inflated by `2·tol`.
    pub nesting_violations: usize,
    pub contains_final: bool,
    pub periodic: bool,
    pub residuals_ok: bool,
    pub pass: bool,
}

fn entry(
    approximant: Approximant,
    net_c0: f64,
    tol: f64,
    resolution: [usize; 2],
    constants: BoundConstants,
    delta: f64,
    net_invariant: bool,
) -> BracketEntry {
    BracketEntry {
        approximant,
        c0: net_c0,
        tol,
        resolution,
        constants,
        delta,
        bracket: [net_c0 - delta, net_c0 + delta],
        width: 2.0 * delta,
        net_invariant,
        period_mismatch: None,
        residual_bound: None,
    }
}

/// `Δ_{m,n}` for the approximant `angle`: the sum of the diameter term,
/// the angle-error terms and the equivalence-lattice term.
pub fn delta_mn(angle: &MagicAngle, period: f64, k: &BoundConstants) -> f64 {
    let n0 = angle.reduced_norm() as f64;
    let n2 = (angle.n * angle.n) as f64;
    let sym = angle.symmetry;
    let d = diameter_constant(sym, k.c1);
    let (kf, lat) = if sym.is_square() {
        (1.0, (2.0 * n0).sqrt())
    } else {
        (2.0 / 3f64.sqrt(), (3.0 * n0).sqrt())
    };
    d * period / n0.powf(1.0 / 6.0)
        + kf * k.c1 * n0.powf(5.0 / 6.0) * period / n2
        + kf * k.c2 / n2
        + k.c1 * period / lat
}

/// `Δ₍ₛ₎ = (C + C̃)·T/|n_s|^{1/3}` with `C` the diameter constant and
/// `C̃ = (3+2√2)·C₁`.
pub fn delta_s(symmetry: SymmetryOrder, period: f64, c1: f64, norm_n: f64) -> f64 {
    let c = diameter_constant(symmetry, c1);
    let ct = (3.0 + 2.0 * 2f64.sqrt()) * c1;
    (c + ct) * period / norm_n.cbrt()
}

fn finish(
    target_alpha: f64,
    symmetry: SymmetryOrder,
    period: f64,
    entries: Vec<BracketEntry>,
) -> Result<ConvergenceReport> {
    for (i, w) in entries.windows(2).enumerate() {
        if w[0].bracket[1] < w[1].bracket[0] || w[1].bracket[1] < w[0].bracket[0] {
            return Err(Error::BracketsDisjoint { index: i + 1 });
        }
    }
    let widths_decreasing = entries.windows(2).all(|w| w[1].width < w[0].width);
    let overlap = |a: &BracketEntry, b: &BracketEntry| a.bracket[0] <= b.bracket[1] && b.bracket[0] <= a.bracket[1];
    let brackets_overlap = entries
        .iter()
        .enumerate()
        .all(|(i, a)| entries[i + 1..].iter().all(|b| overlap(a, b)));
    let cauchy = entries
        .windows(2)
        .all(|w| (w[0].c0 - w[1].c0).abs() <= w[0].delta + w[1].delta);
    let mut nesting_violations = 0;
    for (j, later) in entries.iter().enumerate() {
        for earlier in &entries[..j] {
            let slack = 2.0 * earlier.tol.max(later.tol);
            if later.c0 < earlier.bracket[0] - slack || later.c0 > earlier.bracket[1] + slack {
                nesting_violations += 1;
            }
        }
    }
    let contains_final = entries.last().map_or(true, |f| {
        entries.iter().all(|e| e.bracket[0] <= f.c0 && f.c0 <= e.bracket[1])
    });
    let periodic = entries
        .iter()
        .all(|e| e.period_mismatch.map_or(true, |m| m.iter().all(|x| *x <= PERIOD_TOL)));
    let residuals_ok = entries.iter().all(|e| match (&e.approximant, e.residual_bound) {
        (Approximant::Periodic(p), Some(b)) => p.residual <= b,
        _ => true,
    });
    let pass = widths_decreasing
        && brackets_overlap
        && cauchy
        && nesting_violations == 0
        && contains_final
        && periodic
        && residuals_ok;
    Ok(ConvergenceReport {
        target_alpha,
        symmetry,
        period,
        entries,
        widths_decreasing,
        brackets_overlap,
        cauchy,
        nesting_violations,
        contains_final,
        periodic,
        residuals_ok,
        pass,
    })
}

fn longest(p: &PeriodPair) -> Vec2 {
    if p.b1.norm() >= p.b2.norm() {
        p.b1
    } else {
        p.b2
    }
}

/// Brackets `[c₀(α_{m,n}) − Δ_{m,n}, c₀(α_{m,n}) + Δ_{m,n}]` along the
/// first `depth` magic approximants of `alpha` with `N₀ ≤ 200`.
pub fn verify_theorem_convergence(
    family: &SuperpositionSpec,
    alpha: f64,
    depth: usize,
    res: Resolution,
) -> Result<ConvergenceReport> {
    res.validate()?;
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be positive".into()));
    }
    let t = common_period(family)?;
    let sym = family.v1.symmetry();
    let angles: Vec<MagicAngle> = approximate_angle(alpha, sym, depth)?
        .into_iter()
        .take_while(|a| a.reduced_norm() <= MAX_REDUCED_NORM)
        .collect();
    if angles.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no approximant of {alpha} with reduced norm ≤ {MAX_REDUCED_NORM}"
        )));
    }
    let entries: Vec<BracketEntry> = angles
        .par_iter()
        .map(|angle| {
            let spec = SuperpositionSpec { alpha: angle.angle_radians, a: Vec2::ZERO, ..family.clone() };
            let periods = minimal_periods(angle, t)?;
            let side = res.samples(&spec, longest(&periods));
            let net = singular_net(&spec, sym, &periods, Vec2::ZERO, side, side, res.tol)?;
            let k = bound_constants(&spec, 0.0);
            Ok(entry(
                Approximant::Magic(*angle),
                net.c0,
                net.report.tol,
                [side, side],
                k,
                delta_mn(angle, t, &k),
                net.invariant,
            ))
        })
        .collect::<Result<_>>()?;
    finish(alpha, sym, t, entries)
}

/// Brackets `c₀⁽ˢ⁾ ± Δ₍ₛ₎` along periodic approximants of a superposition
/// whose layer periods are incommensurate.
pub fn verify_incommensurate(
    family: &SuperpositionSpec,
    alpha: f64,
    s_max: usize,
    res: Resolution,
) -> Result<ConvergenceReport> {
    res.validate()?;
    if s_max == 0 {
        return Err(Error::InvalidInput("s_max must be positive".into()));
    }
    let sym = family.v1.symmetry();
    let t = family.v1.period();
    let t2 = family.u.period() / family.lambda;
    if !(t2 < t) {
        return Err(Error::InvalidInput(format!("need T′ < T, got T′ = {t2}, T = {t}")));
    }
    if let Some((p, q)) = rational_relation(t2 / t, 1_000_000, 1e-12) {
        return Err(Error::CommensurateCollision { residual: (t2 / t * q as f64 - p as f64).abs() });
    }
    let b1 = LatticeBasis::new(sym, t)?;
    let b2 = LatticeBasis::new(family.u.symmetry(), t2)?;
    let approximants = build_approximant_sequence(&b1, &b2, alpha, s_max)?;
    let entries: Vec<BracketEntry> = approximants
        .into_par_iter()
        .map(|ap| {
            let spec = SuperpositionSpec {
                alpha: ap.alpha_s,
                a: Vec2::ZERO,
                lambda: family.lambda * ap.lambda_s(),
                ..family.clone()
            };
            let periods = PeriodPair { b1: ap.periods[0], b2: ap.periods[1], coords: ap.period_coords, minimal: false };
            let mism = [
                period_mismatch(&spec, periods.b1, PERIOD_SAMPLES, PERIOD_SEED),
                period_mismatch(&spec, periods.b2, PERIOD_SAMPLES, PERIOD_SEED + 1),
            ];
            let side = res.samples(&spec, longest(&periods));
            let net = singular_net(&spec, sym, &periods, Vec2::ZERO, side, side, res.tol)?;
            let k = bound_constants(&spec, 0.0);
            let delta = delta_s(sym, t, k.c1, ap.norm_n);
            let residual_bound = 2f64.sqrt() * t / ap.q as f64;
            let mut e = entry(Approximant::Periodic(ap), net.c0, net.report.tol, [side, side], k, delta, net.invariant);
            e.period_mismatch = Some(mism);
            e.residual_bound = Some(residual_bound);
            Ok(e)
        })
        .collect::<Result<_>>()?;
    finish(alpha, sym, t, entries)
}
