use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::contours::{extract_contours, Polyline};
use super::grid::{sample, ScalarGrid, Window};
use super::topology::{label_components, ComponentLabeling, Sign, WrapClass};
use crate::error::{Error, Result};
use crate::geometry::{rotate, Vec2};
use crate::lattice_angles::{PeriodPair, SymmetryOrder};
use crate::potential::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Situation {
    AMinus,
    APlus,
    Open,
    Undetermined,
}

fn situation_from(below_wraps: bool, above_wraps: bool) -> Situation {
    match (below_wraps, above_wraps) {
        (false, true) => Situation::AMinus,
        (true, false) => Situation::APlus,
        (true, true) => Situation::Open,
        (false, false) => Situation::Undetermined,
    }
}

/// Situation of a periodic grid at level `c`, decided by torus wrapping.
pub fn classify_situation(grid: &ScalarGrid, c: f64) -> Situation {
    let below = label_components(grid, c, Sign::Below);
    let above = label_components(grid, c, Sign::Above);
    situation_from(below.any_wraps(), above.any_wraps())
}

/// Wrapping components seen at one probe level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub level: f64,
    pub situation: Situation,
    pub below_wrapping: Vec<WrapClass>,
    pub above_wrapping: Vec<WrapClass>,
}

fn probe(grid: &ScalarGrid, c: f64) -> Evidence {
    let below = label_components(grid, c, Sign::Below);
    let above = label_components(grid, c, Sign::Above);
    let (bw, aw) = (below.wrapping(), above.wrapping());
    Evidence {
        level: c,
        situation: situation_from(!bw.is_empty(), !aw.is_empty()),
        below_wrapping: dedup(bw),
        above_wrapping: dedup(aw),
    }
}

fn dedup(mut v: Vec<WrapClass>) -> Vec<WrapClass> {
    v.sort_by_key(|w| match w {
        WrapClass::Bounded => (0, [0, 0]),
        WrapClass::Line(d) => (1, *d),
        WrapClass::Plane => (2, [0, 0]),
    });
    v.dedup();
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalLevelReport {
    pub c_hat_1: f64,
    pub c_hat_2: f64,
    pub tol: f64,
    pub resolution: [usize; 2],
    pub degenerate: bool,
    pub probes: usize,
    /// Classification at the final bracket ends of both bisections.
    pub evidence: Vec<Evidence>,
}

impl CriticalLevelReport {
    pub fn width(&self) -> f64 {
        self.c_hat_2 - self.c_hat_1
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.c_hat_1 + self.c_hat_2)
    }
}

const MAX_BISECTIONS: usize = 60;

/// Default bisection tolerance: `1e−4` of the sampled range.
pub fn default_tol(grid: &ScalarGrid) -> f64 {
    let (lo, hi) = grid.min_max();
    (hi - lo) * 1e-4
}

/// Bisects for `ĉ₁` (onset of wrapping below) and `ĉ₂` (end of wrapping
/// above) on a periodic grid.
pub fn critical_interval_on_grid(grid: &ScalarGrid, tol: Option<f64>) -> Result<CriticalLevelReport> {
    if !grid.periodic {
        return Err(Error::InvalidInput("critical levels need a periodic grid".into()));
    }
    let (lo, hi) = grid.min_max();
    let tol = tol.unwrap_or_else(|| default_tol(grid));
    let resolution = [grid.nx, grid.ny];
    if hi - lo <= 0.0 {
        return Ok(CriticalLevelReport {
            c_hat_1: lo,
            c_hat_2: lo,
            tol,
            resolution,
            degenerate: true,
            probes: 0,
            evidence: Vec::new(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut seen: Vec<(f64, Situation)> = Vec::new();
    let run = |c: f64, seen: &mut Vec<(f64, Situation)>| {
        let e = probe(grid, c);
        seen.push((c, e.situation));
        e
    };
    let mut evidence = Vec::new();
    // ĉ₁: A(−) at a, not A(−) at b
    for target in [Situation::AMinus, Situation::APlus] {
        let (mut a, mut b) = (lo, hi);
        let (mut ea, mut eb) = (run(a, &mut seen), run(b, &mut seen));
        let left_is = |s: Situation| match target {
            Situation::AMinus => s == Situation::AMinus,
            _ => s != Situation::APlus,
        };
        if !left_is(ea.situation) || left_is(eb.situation) {
            return Err(Error::NonMonotone { level: if left_is(eb.situation) { b } else { a } });
        }
        let mut steps = 0;
        while b - a > tol && steps < MAX_BISECTIONS {
            let m = 0.5 * (a + b);
            let e = run(m, &mut seen);
            if left_is(e.situation) {
                (a, ea) = (m, e);
            } else {
                (b, eb) = (m, e);
            }
            steps += 1;
        }
        evidence.push(ea);
        evidence.push(eb);
    }
    check_monotone(&mut seen)?;
    let c1 = 0.5 * (evidence[0].level + evidence[1].level);
    let c2 = 0.5 * (evidence[2].level + evidence[3].level);
    Ok(CriticalLevelReport {
        c_hat_1: c1,
        c_hat_2: c2,
        tol,
        resolution,
        degenerate: c2 - c1 <= tol,
        probes: seen.len(),
        evidence,
    })
}

/// Along increasing `c` the classification must read `A(−)…, OPEN…, A(+)…`.
fn check_monotone(seen: &mut [(f64, Situation)]) -> Result<()> {
    seen.sort_by(|x, y| x.0.total_cmp(&y.0));
    let rank = |s: Situation| match s {
        Situation::AMinus => Some(0),
        Situation::Open => Some(1),
        Situation::APlus => Some(2),
        Situation::Undetermined => None,
    };
    let mut last = 0;
    for &(c, s) in seen.iter() {
        match rank(s) {
            Some(r) if r >= last => last = r,
            _ => return Err(Error::NonMonotone { level: c }),
        }
    }
    Ok(())
}

/// Samples the period parallelogram and runs [`critical_interval_on_grid`].
pub fn critical_interval<F: Field + ?Sized>(
    field: &F,
    periods: &PeriodPair,
    origin: Vec2,
    nx: usize,
    ny: usize,
    tol: Option<f64>,
) -> Result<CriticalLevelReport> {
    let grid = sample(field, Window::from_periods(origin, periods), nx, ny, true)?;
    critical_interval_on_grid(&grid, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularNet {
    pub c0: f64,
    pub report: CriticalLevelReport,
    pub net: Vec<Polyline>,
    /// Largest distance from a rotated net vertex to the net, on the torus.
    pub symmetry_mismatch: f64,
    pub invariant: bool,
}

const SYMMETRY_PROBES: usize = 32;

/// Maximum of `|V(R·r) − V(r)|` about `center` at seeded points.
pub fn symmetry_mismatch<F: Field + ?Sized>(field: &F, symmetry: SymmetryOrder, center: Vec2, scale: f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5133);
    (0..SYMMETRY_PROBES)
        .map(|_| {
            let r = Vec2::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            let rr = rotate(r, symmetry.symmetry_angle());
            (field.value(center + rr) - field.value(center + r)).abs()
        })
        .fold(0.0, f64::max)
}

/// Critical level and level set of a potential with exact rotational
/// symmetry about `center`. Every contour at `c₀` belongs to the net.
pub fn singular_net<F: Field + ?Sized>(
    field: &F,
    symmetry: SymmetryOrder,
    periods: &PeriodPair,
    center: Vec2,
    nx: usize,
    ny: usize,
    tol: Option<f64>,
) -> Result<SingularNet> {
    let scale = periods.b1.norm().max(periods.b2.norm());
    let mism = symmetry_mismatch(field, symmetry, center, scale);
    if !(mism <= 1e-8) {
        return Err(Error::NotSymmetric { mismatch: mism });
    }
    let grid = sample(field, Window::from_periods(center, periods), nx, ny, true)?;
    let report = critical_interval_on_grid(&grid, tol)?;
    if report.width() > 10.0 * report.tol {
        return Err(Error::IntervalNotDegenerate { width: report.width(), limit: 10.0 * report.tol });
    }
    let c0 = report.midpoint();
    let net = extract_contours(&grid, c0);
    let symmetry_mismatch = net_rotation_mismatch(&grid, &net, symmetry, center);
    Ok(SingularNet {
        c0,
        invariant: symmetry_mismatch <= 1e-3 * grid.cell_diagonal(),
        symmetry_mismatch,
        report,
        net,
    })
}

/// Torus coordinates in `[0, 1)²` of a planar point.
fn torus_coords(grid: &ScalarGrid, p: Vec2) -> [f64; 2] {
    let [a, b] = grid.axes;
    let d = p - grid.origin;
    let det = a.cross(b);
    [(d.cross(b) / det).rem_euclid(1.0), (a.cross(d) / det).rem_euclid(1.0)]
}

fn net_rotation_mismatch(grid: &ScalarGrid, net: &[Polyline], symmetry: SymmetryOrder, center: Vec2) -> f64 {
    use std::collections::HashMap;
    let (bx, by) = (grid.nx as i64, grid.ny as i64);
    let bucket = |u: [f64; 2]| (((u[0] * bx as f64) as i64).min(bx - 1), ((u[1] * by as f64) as i64).min(by - 1));
    let mut buckets: HashMap<(i64, i64), Vec<[f64; 2]>> = HashMap::new();
    for p in net.iter().flat_map(|l| l.points.iter()) {
        let u = torus_coords(grid, *p);
        buckets.entry(bucket(u)).or_default().push(u);
    }
    let [a, b] = grid.axes;
    let torus_dist = |u: [f64; 2], v: [f64; 2]| {
        let mut best = f64::INFINITY;
        for du in [-1.0, 0.0, 1.0] {
            for dv in [-1.0, 0.0, 1.0] {
                let d = a * (u[0] - v[0] + du) + b * (u[1] - v[1] + dv);
                best = best.min(d.norm());
            }
        }
        best
    };
    let mut worst: f64 = 0.0;
    for p in net.iter().flat_map(|l| l.points.iter()) {
        let q = center + rotate(*p - center, symmetry.symmetry_angle());
        let u = torus_coords(grid, q);
        let (i, j) = bucket(u);
        let mut best = f64::INFINITY;
        for di in -1..=1 {
            for dj in -1..=1 {
                let key = ((i + di).rem_euclid(bx), (j + dj).rem_euclid(by));
                for &v in buckets.get(&key).into_iter().flatten() {
                    best = best.min(torus_dist(u, v));
                }
            }
        }
        worst = worst.max(best);
    }
    worst
}

/// Finite-window analogue of [`classify_situation`] on a square of side
/// `side` around `center`: a sign spans when one component touches all four
/// sides; interior components of the other sign must stay below `side/4`.
pub fn classify_window<F: Field + ?Sized>(
    field: &F,
    center: Vec2,
    side: f64,
    nx: usize,
    ny: usize,
    c: f64,
) -> Result<Situation> {
    let grid = sample(field, Window::square(center, side), nx, ny, false)?;
    Ok(classify_window_grid(&grid, c))
}

pub fn classify_window_grid(grid: &ScalarGrid, c: f64) -> Situation {
    let side = grid.axes[0].norm().min(grid.axes[1].norm());
    let below = label_components(grid, c, Sign::Below);
    let above = label_components(grid, c, Sign::Above);
    let spans = |l: &ComponentLabeling| l.components.iter().any(|s| s.touches.iter().all(|&t| t));
    let small = |l: &ComponentLabeling| {
        l.components
            .iter()
            .filter(|s| !s.touches.iter().any(|&t| t))
            .all(|s| s.diameter.is_some_and(|d| d < side / 4.0))
    };
    let (sb, sa) = (spans(&below), spans(&above));
    match (sb, sa) {
        (true, true) => Situation::Open,
        (false, true) if small(&below) => Situation::AMinus,
        (true, false) if small(&above) => Situation::APlus,
        _ => Situation::Undetermined,
    }
}

/// Plane diameters of all non-wrapping components of one sign.
pub fn component_diameters(grid: &ScalarGrid, c: f64, sign: Sign) -> Vec<f64> {
    label_components(grid, c, sign)
        .components
        .iter()
        .filter_map(|s| s.diameter)
        .collect()
}

/// Wrapping class of every component of both signs, inferred only from the
/// traced contours: a component is a strip along `w` when it borders a line
/// of winding `w`, bounded when it lies inside a contractible loop, and
/// doubly periodic otherwise.
pub fn classes_from_contours(
    contours: &[Polyline],
    below: &ComponentLabeling,
    above: &ComponentLabeling,
) -> (Vec<WrapClass>, Vec<WrapClass>) {
    let mut b = vec![WrapClass::Plane; below.components.len()];
    let mut a = vec![WrapClass::Plane; above.components.len()];
    let mut b_line = vec![false; b.len()];
    let mut a_line = vec![false; a.len()];
    for l in contours {
        let lb = below.labels[l.below_node] as usize;
        let la = above.labels[l.above_node] as usize;
        match l.winding {
            Some(w) if w != [0, 0] => {
                let d = super::topology::normalize_direction(w);
                b[lb] = WrapClass::Line(d);
                a[la] = WrapClass::Line(d);
                b_line[lb] = true;
                a_line[la] = true;
            }
            _ => {
                // positive area: the above side is enclosed
                let inside_above = l.signed_area() > 0.0;
                if inside_above && !a_line[la] {
                    a[la] = WrapClass::Bounded;
                } else if !inside_above && !b_line[lb] {
                    b[lb] = WrapClass::Bounded;
                }
            }
        }
    }
    (b, a)
}
