use serde::{Deserialize, Serialize};

use super::{diameter_constant, Resolution};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::lattice_angles::{LatticeBasis, PeriodPair, SymmetryOrder};
use crate::levelsets::{component_diameters, sample, singular_net, Sign, Window};
use crate::potential::PotentialSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterEntry {
    pub delta_c: f64,
    /// Largest non-wrapping component diameter of `Ω⁻` at `c₀ − Δc`.
    pub below_max: f64,
    /// Same for `Ω⁺` at `c₀ + Δc`.
    pub above_max: f64,
    pub measured: f64,
    /// `√(D·L/Δc)·L`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterReport {
    pub symmetry: SymmetryOrder,
    pub period: f64,
    pub c0: f64,
    pub c1: f64,
    pub d: f64,
    pub copies: usize,
    pub resolution: [usize; 2],
    pub cell_diagonal: f64,
    pub entries: Vec<DiameterEntry>,
    /// Measured diameters do not grow with `Δc`.
    pub nonincreasing: bool,
    pub pass: bool,
}

/// Component diameters of `Ω∓` at `c₀ ∓ Δc` on a `copies × copies` block of
/// periods, against `√(D·L/Δc)·L`.
pub fn verify_diameter_bound(
    potential: &PotentialSpec,
    delta_c: &[f64],
    copies: usize,
    res: Resolution,
) -> Result<DiameterReport> {
    res.validate()?;
    if copies == 0 {
        return Err(Error::InvalidInput("need at least one period per axis".into()));
    }
    if let Some(d) = delta_c.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(Error::InvalidInput(format!("Δc must be positive, got {d}")));
    }
    let sym = potential.symmetry();
    let l = potential.period();
    let basis = LatticeBasis::new(sym, l)?;
    let one = PeriodPair { b1: basis.e1, b2: basis.e2, coords: [[1, 0], [0, 1]], minimal: true };
    let n1 = res.samples(potential, basis.e1);
    let net = singular_net(potential, sym, &one, Vec2::ZERO, n1, n1, res.tol)?;

    let k = copies as f64;
    let window = Window { origin: Vec2::ZERO, axes: [basis.e1 * k, basis.e2 * k] };
    let side = (n1 * copies).min(res.max_samples.max(n1));
    let grid = sample(potential, window, side, side, true)?;
    let c1 = potential.gradient_bound();
    let d = diameter_constant(sym, c1);
    let diag = grid.cell_diagonal();

    let max_of = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..delta_c.len()).collect();
    order.sort_by(|&a, &b| delta_c[a].total_cmp(&delta_c[b]));
    let entries: Vec<DiameterEntry> = delta_c
        .iter()
        .map(|&dc| {
            let below_max = max_of(component_diameters(&grid, net.c0 - dc, Sign::Below));
            let above_max = max_of(component_diameters(&grid, net.c0 + dc, Sign::Above));
            let measured = below_max.max(above_max);
            let bound = (d * l / dc).sqrt() * l;
            DiameterEntry { delta_c: dc, below_max, above_max, measured, bound, pass: measured <= bound + diag }
        })
        .collect();
    let nonincreasing = order
        .windows(2)
        .all(|w| entries[w[1]].measured <= entries[w[0]].measured + diag);
    let pass = nonincreasing && entries.iter().all(|e| e.pass);
    Ok(DiameterReport {
        symmetry: sym,
        period: l,
        c0: net.c0,
        c1,
        d,
        copies,
        resolution: [side, side],
        cell_diagonal: diag,
        entries,
        nonincreasing,
        pass,
    })
}
