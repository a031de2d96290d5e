use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use novikov_core::lattice_angles::{
    approximate_angle, approximation_bound, enumerate_magic_angles, equivalence_lattice, minimal_periods,
    superposition_periods, AngleSign, EquivalenceLattice, MagicAngle, PeriodPair, SymmetryOrder,
};
use novikov_core::levelsets::{
    contours_csv, contours_svg, critical_interval_on_grid, extract_contours, heatmap_ppm, sample, singular_net,
    write_nvgrid, CriticalLevelReport, MeshKind, ScalarGrid, SvgStyle, Window,
};
use novikov_core::potential::{
    cosine_family, make_symmetric_potential, CoefficientSource, Composition, Monomial, Polynomial,
    PotentialSpec, SuperpositionSpec,
};
use novikov_core::verification::{
    verify_diameter_bound, verify_incommensurate, verify_interval_width, verify_theorem_convergence, Approximant,
    ConvergenceReport, Resolution, MAX_REDUCED_NORM,
};
use novikov_core::Vec2;

use crate::cli::{AngleArgs, Cmd, FamilyArgs, GridArgs, Kind, ResArgs, Verify};
use crate::report::{f, table, verdict, Output};

const DEFAULT_MIN_SAMPLES: usize = 64;
const WIDTHS_MIN_SAMPLES: usize = 256;

fn radians(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

fn sign(negative: bool) -> AngleSign {
    if negative {
        AngleSign::Negative
    } else {
        AngleSign::Positive
    }
}

fn resolution(r: &ResArgs, min_default: usize) -> Resolution {
    Resolution {
        per_wavelength: r.per_wavelength,
        min_samples: r.min_samples.unwrap_or(min_default),
        max_samples: r.max_samples.max(r.min_samples.unwrap_or(min_default)),
        tol: r.tol,
    }
}

fn parse_vec2(s: &str) -> Result<Vec2> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        bail!("expected `x,y`, got {s:?}");
    }
    let x: f64 = parts[0].trim().parse().with_context(|| format!("bad number in {s:?}"))?;
    let y: f64 = parts[1].trim().parse().with_context(|| format!("bad number in {s:?}"))?;
    Ok(Vec2::new(x, y))
}

fn parse_polynomial(s: &str) -> Result<Polynomial> {
    let mut monomials = Vec::new();
    for term in s.split(';').filter(|t| !t.trim().is_empty()) {
        let p: Vec<&str> = term.split(',').map(str::trim).collect();
        if p.len() != 3 {
            bail!("polynomial terms are `i,j,c`, got {term:?}");
        }
        monomials.push(Monomial { i: p[0].parse()?, j: p[1].parse()?, c: p[2].parse()? });
    }
    Ok(Polynomial::new(monomials)?)
}

fn layer(sym: SymmetryOrder, period: f64, seed: Option<u64>, cutoff: u32) -> Result<PotentialSpec> {
    Ok(match seed {
        Some(s) => make_symmetric_potential(CoefficientSource::Seed(s), sym, cutoff, period)?,
        None => cosine_family(sym, period)?,
    })
}

/// The superposition family; `alpha` and `a` are filled in by the caller.
fn family(args: &FamilyArgs) -> Result<SuperpositionSpec> {
    if let Some(path) = &args.family {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(serde_json::from_str(&text).map_err(novikov_core::Error::from)?);
    }
    let sym = args.symmetry;
    let v1 = layer(sym, args.period, args.potential_seed, args.cutoff)?;
    let t2 = args.period2.unwrap_or(args.period * args.lambda);
    let u = layer(sym, t2, args.potential_seed.map(|s| s.wrapping_add(1)), args.cutoff)?;
    let composition = match (args.kind, &args.q) {
        (Kind::Linear, None) => Composition::Linear,
        (Kind::Linear, Some(_)) => bail!(novikov_core::Error::InvalidInput("--q needs --kind pointwise".into())),
        (Kind::Pointwise, Some(q)) => Composition::Pointwise(parse_polynomial(q)?),
        (Kind::Pointwise, None) => Composition::Pointwise(Polynomial::sum()),
    };
    Ok(SuperpositionSpec::new(v1, u, composition, 0.0, Vec2::ZERO, args.lambda)?)
}

enum Angle {
    Magic(MagicAngle),
    Generic(f64),
}

impl Angle {
    fn radians(&self) -> f64 {
        match self {
            Angle::Magic(a) => a.angle_radians,
            Angle::Generic(x) => *x,
        }
    }
}

fn angle(args: &AngleArgs, sym: SymmetryOrder) -> Result<Angle> {
    match (args.m, args.n, args.alpha) {
        (Some(m), Some(n), _) => Ok(Angle::Magic(MagicAngle::new(sym, m, n, sign(args.negative))?)),
        (_, _, Some(a)) => Ok(Angle::Generic(radians(a, args.degrees))),
        _ => bail!(novikov_core::Error::InvalidInput("need --alpha or --m/--n".into())),
    }
}

fn configured(args: &FamilyArgs, ang: &AngleArgs) -> Result<(SuperpositionSpec, Angle)> {
    let fam = family(args)?;
    let ang_v = angle(ang, fam.v1.symmetry())?;
    let a = ang.a.as_deref().map(parse_vec2).transpose()?.unwrap_or(Vec2::ZERO);
    let spec = SuperpositionSpec { alpha: ang_v.radians(), a, ..fam };
    Ok((spec, ang_v))
}

fn magic_periods(spec: &SuperpositionSpec, ang: &Angle) -> Result<PeriodPair> {
    match ang {
        Angle::Magic(a) => Ok(minimal_periods(a, spec.v1.period())?),
        Angle::Generic(_) => bail!(novikov_core::Error::InvalidInput(
            "periodic sampling needs a magic angle (--m/--n) or a --side window".into()
        )),
    }
}

fn longest(p: &PeriodPair) -> Vec2 {
    if p.b1.norm() >= p.b2.norm() {
        p.b1
    } else {
        p.b2
    }
}

fn grid_for(spec: &SuperpositionSpec, ang: &Angle, g: &GridArgs) -> Result<ScalarGrid> {
    let res = resolution(&g.res, DEFAULT_MIN_SAMPLES);
    let (window, periodic) = match g.side {
        Some(side) => (Window::square(Vec2::ZERO, side), false),
        None => (Window::from_periods(Vec2::ZERO, &magic_periods(spec, ang)?), true),
    };
    let long = if window.axes[0].norm() >= window.axes[1].norm() { window.axes[0] } else { window.axes[1] };
    let auto = res.samples(spec, long);
    let nx = g.nx.unwrap_or(auto);
    let ny = g.ny.unwrap_or(auto);
    Ok(sample(spec, window, nx, ny, periodic)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn run(cmd: &Cmd) -> Result<Output> {
    match cmd {
        Cmd::Angles { symmetry, max_m } => angles(*symmetry, *max_m),
        Cmd::Approx { symmetry, alpha, degrees, count } => approx(*symmetry, radians(*alpha, *degrees), *count),
        Cmd::Periods { symmetry, period, m, n, negative } => {
            periods(&MagicAngle::new(*symmetry, *m, *n, sign(*negative))?, *period)
        }
        Cmd::Sample { family, angle, grid, grid_out, ppm } => {
            let (spec, ang) = configured(family, angle)?;
            let g = grid_for(&spec, &ang, grid)?;
            if let Some(p) = grid_out {
                let mut buf = Vec::new();
                write_nvgrid(&g, &mut buf)?;
                write_file(p, &buf)?;
            }
            if let Some(p) = ppm {
                write_file(p, &heatmap_ppm(&g))?;
            }
            sample_summary(&g)
        }
        Cmd::Trace { family, angle, grid, level, svg, csv } => {
            let (spec, ang) = configured(family, angle)?;
            let g = grid_for(&spec, &ang, grid)?;
            let lines = extract_contours(&g, *level);
            let svg_text = contours_svg(&g, &lines, SvgStyle { hatch_level: Some(*level), ..Default::default() });
            if let Some(p) = svg {
                write_file(p, svg_text.as_bytes())?;
            }
            if let Some(p) = csv {
                write_file(p, contours_csv(&lines).as_bytes())?;
            }
            let out = trace_summary(*level, &g, &lines)?;
            Ok(out.file("trace.svg".into(), svg_text.into_bytes()))
        }
        Cmd::Critical { family, angle, grid } => {
            let (spec, ang) = configured(family, angle)?;
            let g = grid_for(&spec, &ang, grid)?;
            let r = critical_interval_on_grid(&g, grid.res.tol)?;
            let t = critical_table(&r);
            Output::new("critical", &r, t)
        }
        Cmd::Net { family, angle, grid, svg } => net(family, angle, grid, svg.as_deref()),
        Cmd::Verify(v) => verify(v),
        Cmd::Sweep { family, res, max_m, from, to, degrees } => sweep(
            family,
            &resolution(res, DEFAULT_MIN_SAMPLES),
            *max_m,
            from.map(|x| radians(x, *degrees)),
            to.map(|x| radians(x, *degrees)),
        ),
    }
}

fn angle_row(a: &MagicAngle) -> Vec<String> {
    vec![
        a.m.to_string(),
        a.n.to_string(),
        a.m0.to_string(),
        a.n0.to_string(),
        format!("{:?}", a.sign).to_lowercase(),
        a.tan_value.to_string(),
        format!("{:.12}", a.angle_radians),
        format!("{:.8}", a.angle_radians.to_degrees()),
    ]
}

const ANGLE_HEADER: [&str; 8] = ["m", "n", "m0", "n0", "sign", "tan", "alpha", "degrees"];

fn angles(sym: SymmetryOrder, max_m: i64) -> Result<Output> {
    if max_m < 2 {
        bail!(novikov_core::Error::InvalidInput(format!("--max-m must be at least 2, got {max_m}")));
    }
    let list = enumerate_magic_angles(sym, max_m);
    let rows: Vec<Vec<String>> = list.iter().map(angle_row).collect();
    Output::new("angles", &list, table(&ANGLE_HEADER, &rows))
}

#[derive(Serialize)]
struct ApproxRow {
    angle: MagicAngle,
    error: f64,
    bound: f64,
}

#[derive(Serialize)]
struct ApproxReport {
    alpha: f64,
    approximants: Vec<ApproxRow>,
}

fn approx(sym: SymmetryOrder, alpha: f64, count: usize) -> Result<Output> {
    let list = approximate_angle(alpha, sym, count)?;
    let approximants: Vec<ApproxRow> = list
        .into_iter()
        .map(|a| ApproxRow { error: (a.angle_radians - alpha).abs(), bound: approximation_bound(sym, a.n), angle: a })
        .collect();
    let mut header = ANGLE_HEADER.to_vec();
    header.extend(["error", "bound"]);
    let rows: Vec<Vec<String>> = approximants
        .iter()
        .map(|r| {
            let mut row = angle_row(&r.angle);
            row.extend([format!("{:.3e}", r.error), format!("{:.3e}", r.bound)]);
            row
        })
        .collect();
    Output::new("approx", &ApproxReport { alpha, approximants }, table(&header, &rows))
}

#[derive(Serialize)]
struct PeriodsReport {
    angle: MagicAngle,
    period: f64,
    superposition: PeriodPair,
    minimal: PeriodPair,
    equivalence: EquivalenceLattice,
    symmetric_shifts: EquivalenceLattice,
}

fn periods(angle: &MagicAngle, period: f64) -> Result<Output> {
    let r = PeriodsReport {
        angle: *angle,
        period,
        superposition: superposition_periods(angle, period)?,
        minimal: minimal_periods(angle, period)?,
        equivalence: equivalence_lattice(angle, period, false)?,
        symmetric_shifts: equivalence_lattice(angle, period, true)?,
    };
    let v = |p: Vec2| format!("({:.6}, {:.6})", p.x, p.y);
    let rows = vec![
        vec!["superposition".into(), v(r.superposition.b1), v(r.superposition.b2), format!("{:?}", r.superposition.coords)],
        vec!["minimal".into(), v(r.minimal.b1), v(r.minimal.b2), format!("{:?}", r.minimal.coords)],
        vec!["equivalence".into(), v(r.equivalence.g1), v(r.equivalence.g2), format!("step {}", f(r.equivalence.step))],
        vec![
            "symmetric shifts".into(),
            v(r.symmetric_shifts.g1),
            v(r.symmetric_shifts.g2),
            format!("step {}", f(r.symmetric_shifts.step)),
        ],
    ];
    Output::new("periods", &r, table(&["lattice", "first", "second", "note"], &rows))
}

#[derive(Serialize)]
struct SampleSummary {
    window: Window,
    resolution: [usize; 2],
    periodic: bool,
    mesh: MeshKind,
    min: f64,
    max: f64,
}

fn sample_summary(g: &ScalarGrid) -> Result<Output> {
    let (min, max) = g.min_max();
    let s = SampleSummary {
        window: Window { origin: g.origin, axes: g.axes },
        resolution: [g.nx, g.ny],
        periodic: g.periodic,
        mesh: g.mesh,
        min,
        max,
    };
    let rows = vec![
        vec!["resolution".into(), format!("{}x{}", g.nx, g.ny)],
        vec!["periodic".into(), g.periodic.to_string()],
        vec!["min".into(), f(min)],
        vec!["max".into(), f(max)],
    ];
    Output::new("sample", &s, table(&["field", "value"], &rows))
}

#[derive(Serialize)]
struct LineSummary {
    points: usize,
    closed: bool,
    winding: Option<[i64; 2]>,
    length: f64,
}

#[derive(Serialize)]
struct TraceSummary {
    level: f64,
    resolution: [usize; 2],
    lines: Vec<LineSummary>,
}

fn line_summaries(lines: &[novikov_core::levelsets::Polyline]) -> Vec<LineSummary> {
    lines
        .iter()
        .map(|l| LineSummary { points: l.points.len(), closed: l.closed, winding: l.winding, length: l.length() })
        .collect()
}

fn trace_summary(level: f64, g: &ScalarGrid, lines: &[novikov_core::levelsets::Polyline]) -> Result<Output> {
    let s = TraceSummary { level, resolution: [g.nx, g.ny], lines: line_summaries(lines) };
    let rows: Vec<Vec<String>> = s
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            vec![
                i.to_string(),
                l.points.to_string(),
                l.closed.to_string(),
                l.winding.map_or("-".into(), |w| format!("{w:?}")),
                f(l.length),
            ]
        })
        .collect();
    Output::new("trace", &s, table(&["line", "points", "closed", "winding", "length"], &rows))
}

fn critical_table(r: &CriticalLevelReport) -> String {
    let rows = vec![
        vec!["c_hat_1".into(), f(r.c_hat_1)],
        vec!["c_hat_2".into(), f(r.c_hat_2)],
        vec!["width".into(), format!("{:.3e}", r.width())],
        vec!["tol".into(), format!("{:.3e}", r.tol)],
        vec!["degenerate".into(), r.degenerate.to_string()],
        vec!["resolution".into(), format!("{}x{}", r.resolution[0], r.resolution[1])],
    ];
    table(&["field", "value"], &rows)
}

#[derive(Serialize)]
struct NetSummary {
    angle: MagicAngle,
    c0: f64,
    report: CriticalLevelReport,
    lines: Vec<LineSummary>,
    symmetry_mismatch: f64,
    invariant: bool,
}

fn net(fam: &FamilyArgs, ang: &AngleArgs, g: &GridArgs, svg: Option<&Path>) -> Result<Output> {
    let (spec, angle) = configured(fam, ang)?;
    let Angle::Magic(magic) = angle else {
        bail!(novikov_core::Error::InvalidInput("the singular net needs a magic angle (--m/--n)".into()));
    };
    if g.side.is_some() {
        bail!(novikov_core::Error::InvalidInput("the singular net lives on the period cell; drop --side".into()));
    }
    let spec = spec.with_shift(Vec2::ZERO);
    let periods = minimal_periods(&magic, spec.v1.period())?;
    let res = resolution(&g.res, DEFAULT_MIN_SAMPLES);
    let auto = res.samples(&spec, longest(&periods));
    let (nx, ny) = (g.nx.unwrap_or(auto), g.ny.unwrap_or(auto));
    let sn = singular_net(&spec, magic.symmetry, &periods, Vec2::ZERO, nx, ny, g.res.tol)?;
    let grid = sample(&spec, Window::from_periods(Vec2::ZERO, &periods), nx, ny, true)?;
    let svg_text = contours_svg(&grid, &sn.net, SvgStyle { hatch_level: Some(sn.c0), ..Default::default() });
    if let Some(p) = svg {
        write_file(p, svg_text.as_bytes())?;
    }
    let s = NetSummary {
        angle: magic,
        c0: sn.c0,
        lines: line_summaries(&sn.net),
        symmetry_mismatch: sn.symmetry_mismatch,
        invariant: sn.invariant,
        report: sn.report,
    };
    let rows = vec![
        vec!["c0".into(), f(s.c0)],
        vec!["lines".into(), s.lines.len().to_string()],
        vec!["symmetry mismatch".into(), format!("{:.3e}", s.symmetry_mismatch)],
        vec!["invariant".into(), s.invariant.to_string()],
    ];
    Ok(Output::new("net", &s, table(&["field", "value"], &rows))?.file("net.svg".into(), svg_text.into_bytes()))
}

fn convergence_table(r: &ConvergenceReport) -> String {
    let rows: Vec<Vec<String>> = r
        .entries
        .iter()
        .map(|e| {
            let label = match &e.approximant {
                Approximant::Magic(a) => format!("({},{})", a.m, a.n),
                Approximant::Periodic(p) => format!("n={:?} q={}", p.n_s, p.q),
            };
            vec![label, f(e.c0), f(e.delta), f(e.bracket[0]), f(e.bracket[1]), e.net_invariant.to_string()]
        })
        .collect();
    let mut t = table(&["approximant", "c0", "delta", "lower", "upper", "invariant"], &rows);
    t.push_str(&format!(
        "widths decreasing: {}  overlap: {}  cauchy: {}  nesting violations: {}  periodic: {}  residuals: {}\n{}\n",
        r.widths_decreasing,
        r.brackets_overlap,
        r.cauchy,
        r.nesting_violations,
        r.periodic,
        r.residuals_ok,
        verdict(r.pass)
    ));
    t
}

fn net_figures(out: Output, r: &ConvergenceReport, fam: &SuperpositionSpec) -> Result<Output> {
    let mut out = out;
    for (i, e) in r.entries.iter().enumerate() {
        let (spec, periods) = match &e.approximant {
            Approximant::Magic(a) => (
                SuperpositionSpec { alpha: a.angle_radians, a: Vec2::ZERO, ..fam.clone() },
                minimal_periods(a, fam.v1.period())?,
            ),
            Approximant::Periodic(p) => (
                SuperpositionSpec { alpha: p.alpha_s, a: Vec2::ZERO, lambda: fam.lambda * p.lambda_s(), ..fam.clone() },
                PeriodPair { b1: p.periods[0], b2: p.periods[1], coords: p.period_coords, minimal: false },
            ),
        };
        let [nx, ny] = e.resolution;
        let grid = sample(&spec, Window::from_periods(Vec2::ZERO, &periods), nx, ny, true)?;
        let lines = extract_contours(&grid, e.c0);
        let svg = contours_svg(&grid, &lines, SvgStyle { hatch_level: Some(e.c0), ..Default::default() });
        out = out.file(format!("net_{i}.svg").into(), svg.into_bytes());
    }
    Ok(out)
}

fn verify(v: &Verify) -> Result<Output> {
    match v {
        Verify::Widths { family: fa, res, m, n, negative, shifts, seed } => {
            let fam = family(fa)?;
            let angle = MagicAngle::new(fam.v1.symmetry(), *m, *n, sign(*negative))?;
            let r = verify_interval_width(&fam, &angle, *shifts, *seed, resolution(res, WIDTHS_MIN_SAMPLES))?;
            let rows: Vec<Vec<String>> = r
                .samples
                .iter()
                .map(|s| vec![f(s.a.x), f(s.a.y), f(s.c_hat_1), f(s.c_hat_2), format!("{:.3e}", s.width())])
                .collect();
            let mut t = table(&["a.x", "a.y", "c_hat_1", "c_hat_2", "width"], &rows);
            t.push_str(&format!(
                "max width {} <= bound {} + slack {}: {}\nunion width {} <= bound {} + slack {}: {}\nsymmetric width {:.3e} (tol {:.3e}): {}\nequivalent shifts differ by {:.3e}: {}\n{}\n",
                f(r.max_width),
                f(r.bound),
                f(r.slack),
                r.width_pass,
                f(r.union_width),
                f(r.union_bound),
                f(r.slack),
                r.union_pass,
                r.symmetric.width(),
                r.symmetric.tol,
                r.symmetric_degenerate,
                r.equivalence_diff,
                r.equivalence_ok,
                verdict(r.pass)
            ));
            Ok(Output::new("verify widths", &r, t)?.with_pass(r.pass))
        }
        Verify::Diameters { symmetry, period, potential_seed, cutoff, delta_c, copies, res } => {
            let p = layer(*symmetry, *period, *potential_seed, *cutoff)?;
            let r = verify_diameter_bound(&p, delta_c, *copies, resolution(res, DEFAULT_MIN_SAMPLES))?;
            let rows: Vec<Vec<String>> = r
                .entries
                .iter()
                .map(|e| vec![f(e.delta_c), f(e.below_max), f(e.above_max), f(e.bound), e.pass.to_string()])
                .collect();
            let mut t = table(&["delta_c", "below", "above", "bound", "pass"], &rows);
            t.push_str(&format!(
                "c0 {}  C1 {}  D {}  nonincreasing: {}\n{}\n",
                f(r.c0),
                f(r.c1),
                f(r.d),
                r.nonincreasing,
                verdict(r.pass)
            ));
            Ok(Output::new("verify diameters", &r, t)?.with_pass(r.pass))
        }
        Verify::Convergence { family: fa, res, alpha, degrees, depth } => {
            let fam = family(fa)?;
            let res = resolution(res, DEFAULT_MIN_SAMPLES);
            let r = verify_theorem_convergence(&fam, radians(*alpha, *degrees), *depth, res)?;
            let out = Output::new("verify convergence", &r, convergence_table(&r))?.with_pass(r.pass);
            net_figures(out, &r, &fam)
        }
        Verify::Incommensurate { family: fa, res, alpha, degrees, s_max } => {
            if fa.period2.is_none() && fa.family.is_none() {
                bail!(novikov_core::Error::InvalidInput("incommensurate runs need --period2".into()));
            }
            let fam = family(fa)?;
            let res = resolution(res, DEFAULT_MIN_SAMPLES);
            let r = verify_incommensurate(&fam, radians(*alpha, *degrees), *s_max, res)?;
            let out = Output::new("verify incommensurate", &r, convergence_table(&r))?.with_pass(r.pass);
            net_figures(out, &r, &fam)
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    m: i64,
    n: i64,
    alpha: f64,
    c0: f64,
    width: f64,
    tol: f64,
}

fn sweep(fa: &FamilyArgs, res: &Resolution, max_m: i64, from: Option<f64>, to: Option<f64>) -> Result<Output> {
    let fam = family(fa)?;
    let sym = fam.v1.symmetry();
    let (lo, hi) = sym.angle_range();
    let (from, to) = (from.unwrap_or(lo), to.unwrap_or(hi));
    if !(from < to) {
        bail!(novikov_core::Error::InvalidInput(format!("empty angle range [{from}, {to}]")));
    }
    let angles: Vec<MagicAngle> = enumerate_magic_angles(sym, max_m)
        .into_iter()
        .filter(|a| a.angle_radians >= from && a.angle_radians <= to && a.reduced_norm() <= MAX_REDUCED_NORM)
        .collect();
    let rows: Vec<SweepRow> = angles
        .par_iter()
        .map(|a| {
            let spec = SuperpositionSpec { alpha: a.angle_radians, a: Vec2::ZERO, ..fam.clone() };
            let periods = minimal_periods(a, fam.v1.period())?;
            let side = res.samples(&spec, longest(&periods));
            let sn = singular_net(&spec, sym, &periods, Vec2::ZERO, side, side, res.tol)?;
            Ok(SweepRow { m: a.m, n: a.n, alpha: a.angle_radians, c0: sn.c0, width: sn.report.width(), tol: sn.report.tol })
        })
        .collect::<Result<_, novikov_core::Error>>()?;
    let mut csv = String::from("m,n,alpha,c0,width,tol\n");
    for r in &rows {
        csv.push_str(&format!("{},{},{:.12},{:.9},{:.3e},{:.3e}\n", r.m, r.n, r.alpha, r.c0, r.width, r.tol));
    }
    Ok(Output::new("sweep", &rows, csv.clone())?.file("sweep.csv".into(), csv.into_bytes()))
}

/// Stable kind name of a core error for the error JSON.
pub fn error_kind(e: &anyhow::Error) -> &'static str {
    use novikov_core::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::InvalidInput(_)) => "invalid_input",
        Some(E::NotCoprime { .. }) => "not_coprime",
        Some(E::AngleIsMagic { .. }) => "angle_is_magic",
        Some(E::PrecisionExhausted { .. }) => "precision_exhausted",
        Some(E::CommensurateCollision { .. }) => "commensurate_collision",
        Some(E::ApproximantBounds(_)) => "approximant_bounds",
        Some(E::NotPeriodic { .. }) => "not_periodic",
        Some(E::NonMonotone { .. }) => "non_monotone",
        Some(E::IntervalNotDegenerate { .. }) => "interval_not_degenerate",
        Some(E::NotSymmetric { .. }) => "not_symmetric",
        Some(E::BracketsDisjoint { .. }) => "brackets_disjoint",
        Some(E::Serialization(_)) => "serialization",
        None => "io",
    }
}

/// Exit code 3 for numerical failures, 1 for everything else.
pub fn error_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<novikov_core::Error>() {
        Some(ce) if ce.is_numerical() => 3,
        _ => 1,
    }
}
