use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{common_period, Resolution};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::lattice_angles::{equivalence_lattice, minimal_periods, MagicAngle, PeriodPair, ShiftVector};
use crate::levelsets::{critical_interval_on_grid, sample, CriticalLevelReport, Window};
use crate::potential::{bound_constants, BoundConstants, SuperpositionSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftSample {
    pub a: ShiftVector,
    pub c_hat_1: f64,
    pub c_hat_2: f64,
    pub tol: f64,
}

impl ShiftSample {
    fn from_report(a: ShiftVector, r: &CriticalLevelReport) -> Self {
        ShiftSample { a, c_hat_1: r.c_hat_1, c_hat_2: r.c_hat_2, tol: r.tol }
    }

    pub fn width(&self) -> f64 {
        self.c_hat_2 - self.c_hat_1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalWidthReport {
    pub angle: MagicAngle,
    pub period: f64,
    pub periods: PeriodPair,
    pub constants: BoundConstants,
    pub resolution: [usize; 2],
    pub samples: Vec<ShiftSample>,
    /// `C₁T/√(2N₀)` (square) or `C₁T/√(3N₀)` (triangular).
    pub bound: f64,
    pub max_width: f64,
    /// `√2·C₁T/√N₀` (square) or `2C₁T/√(3N₀)` (triangular).
    pub union_bound: f64,
    pub union_width: f64,
    /// `2·tol + C₁·(cell diagonal)`.
    pub slack: f64,
    pub symmetric: ShiftSample,
    pub symmetric_degenerate: bool,
    /// Largest endpoint difference between `a` and `a + g₁ + g₂`.
    pub equivalence_diff: f64,
    pub equivalence_ok: bool,
    pub width_pass: bool,
    pub union_pass: bool,
    pub pass: bool,
}

/// Critical intervals for `n_shifts` seeded shifts of the family at `angle`,
/// compared with the width and union bounds.
pub fn verify_interval_width(
    family: &SuperpositionSpec,
    angle: &MagicAngle,
    n_shifts: usize,
    seed: u64,
    res: Resolution,
) -> Result<IntervalWidthReport> {
    res.validate()?;
    if n_shifts == 0 {
        return Err(Error::InvalidInput("need at least one shift".into()));
    }
    if angle.symmetry.is_square() != family.v1.symmetry().is_square() {
        return Err(Error::InvalidInput("angle and family have different lattice types".into()));
    }
    let t = common_period(family)?;
    let base = SuperpositionSpec { alpha: angle.angle_radians, ..family.clone() };
    let periods = minimal_periods(angle, t)?;
    let lat = equivalence_lattice(angle, t, false)?;
    let window = Window::from_periods(Vec2::ZERO, &periods);
    let longest = if periods.b1.norm() >= periods.b2.norm() { periods.b1 } else { periods.b2 };
    let side = res.samples(&base, longest);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<Vec2> = (0..n_shifts)
        .map(|_| lat.g1 * rng.gen_range(0.0..1.0) + lat.g2 * rng.gen_range(0.0..1.0))
        .collect();
    let twin = shifts[0] + lat.g1 + lat.g2;
    let mut jobs = shifts.clone();
    jobs.push(Vec2::ZERO);
    jobs.push(twin);
    let runs: Vec<(CriticalLevelReport, f64)> = jobs
        .par_iter()
        .map(|&a| {
            let g = sample(&base.with_shift(a), window, side, side, true)?;
            Ok((critical_interval_on_grid(&g, res.tol)?, g.cell_diagonal()))
        })
        .collect::<Result<_>>()?;
    let diag = runs[0].1;
    let reports: Vec<CriticalLevelReport> = runs.into_iter().map(|r| r.0).collect();

    let samples: Vec<ShiftSample> = shifts
        .iter()
        .zip(&reports)
        .map(|(&a, r)| ShiftSample::from_report(a, r))
        .collect();
    let symmetric = ShiftSample::from_report(Vec2::ZERO, &reports[n_shifts]);
    let twin_s = ShiftSample::from_report(twin, &reports[n_shifts + 1]);

    let constants = bound_constants(&base, 0.0);
    let c1 = constants.c1;
    let n0 = angle.reduced_norm() as f64;
    let (bound, union_bound) = if angle.symmetry.is_square() {
        (c1 * t / (2.0 * n0).sqrt(), 2f64.sqrt() * c1 * t / n0.sqrt())
    } else {
        (c1 * t / (3.0 * n0).sqrt(), 2.0 * c1 * t / (3.0 * n0).sqrt())
    };
    let tol = reports.iter().map(|r| r.tol).fold(0.0, f64::max);
    let slack = 2.0 * tol + c1 * diag;

    let max_width = samples.iter().map(ShiftSample::width).fold(0.0, f64::max);
    let lo = samples.iter().map(|s| s.c_hat_1).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.c_hat_2).fold(f64::NEG_INFINITY, f64::max);
    let union_width = hi - lo;
    let equivalence_diff = (samples[0].c_hat_1 - twin_s.c_hat_1)
        .abs()
        .max((samples[0].c_hat_2 - twin_s.c_hat_2).abs());

    let width_pass = max_width <= bound + slack;
    let union_pass = union_width <= union_bound + slack;
    let symmetric_degenerate = symmetric.width() <= 2.0 * symmetric.tol;
    let equivalence_ok = equivalence_diff <= slack;
    Ok(IntervalWidthReport {
        angle: *angle,
        period: t,
        periods,
        constants,
        resolution: [side, side],
        samples,
        bound,
        max_width,
        union_bound,
        union_width,
        slack,
        symmetric,
        symmetric_degenerate,
        equivalence_diff,
        equivalence_ok,
        width_pass,
        union_pass,
        pass: width_pass && union_pass && symmetric_degenerate && equivalence_ok,
    })
}
