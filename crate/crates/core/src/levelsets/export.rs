use std::fmt::Write as _;
use std::io::{self, Read, Write};

use super::contours::Polyline;
use super::grid::{ScalarGrid, Window};
use crate::error::{Error, Result};
use crate::geometry::Vec2;

const MAGIC: &[u8; 8] = b"NVGRID01";

/// `NVGRID01`, `nx`, `ny` (u32 LE), then row-major f64 LE vertex values.
pub fn write_nvgrid<W: Write>(grid: &ScalarGrid, mut w: W) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(grid.nx as u32).to_le_bytes())?;
    w.write_all(&(grid.ny as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(grid.values.len() * 8);
    for v in &grid.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)
}

/// Reads a grid written by [`write_nvgrid`]; the geometry is not stored and
/// must be supplied.
pub fn read_nvgrid<R: Read>(mut r: R, window: Window, periodic: bool) -> Result<ScalarGrid> {
    let io = |e: io::Error| Error::Serialization(e.to_string());
    let mut head = [0u8; 16];
    r.read_exact(&mut head).map_err(io)?;
    if &head[..8] != MAGIC {
        return Err(Error::Serialization("bad grid magic".into()));
    }
    let nx = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
    let ny = u32::from_le_bytes(head[12..16].try_into().unwrap()) as usize;
    let mut body = Vec::new();
    r.read_to_end(&mut body).map_err(io)?;
    if body.len() != nx * ny * 8 {
        return Err(Error::Serialization(format!(
            "expected {} value bytes, found {}",
            nx * ny * 8,
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ScalarGrid::from_values(window, nx, ny, values, periodic)
}

/// Vertices as `polyline_id,x,y,closed,p,q`; `p,q` are empty off the torus.
pub fn contours_csv(lines: &[Polyline]) -> String {
    let mut s = String::from("polyline_id,x,y,closed,p,q\n");
    for (id, l) in lines.iter().enumerate() {
        let (p, q) = match l.winding {
            Some([p, q]) => (p.to_string(), q.to_string()),
            None => (String::new(), String::new()),
        };
        for v in &l.points {
            writeln!(s, "{id},{:.9},{:.9},{},{p},{q}", v.x, v.y, l.closed).unwrap();
        }
    }
    s
}

#[derive(Clone, Copy, Debug)]
pub struct SvgStyle {
    pub width_px: f64,
    /// Hatch `V < c` and `V > c` on a coarse copy of the grid.
    pub hatch_level: Option<f64>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { width_px: 600.0, hatch_level: None }
    }
}

fn fmt_pt(p: Vec2) -> String {
    format!("{:.4},{:.4}", p.x, -p.y)
}

/// The grid's parallelogram, optional sign hatching and one path per
/// polyline with its winding in a `data-winding` attribute.
pub fn contours_svg(grid: &ScalarGrid, lines: &[Polyline], style: SvgStyle) -> String {
    let [a, b] = grid.axes;
    let o = grid.origin;
    let corners = [o, o + a, o + a + b, o + b];
    let pts = corners.iter().chain(lines.iter().flat_map(|l| l.points.iter()));
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in pts {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let pad = 0.02 * span;
    let stroke = span / 400.0;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
        lo.x - pad,
        -hi.y - pad,
        hi.x - lo.x + 2.0 * pad,
        hi.y - lo.y + 2.0 * pad,
        w = style.width_px,
        h = style.width_px * (hi.y - lo.y + 2.0 * pad) / (hi.x - lo.x + 2.0 * pad),
    )
    .unwrap();
    writeln!(
        s,
        r#"<defs><pattern id="below" width="{d:.4}" height="{d:.4}" patternUnits="userSpaceOnUse"><path d="M0,0L{d:.4},{d:.4}" stroke="steelblue" stroke-width="{sw:.4}"/></pattern><pattern id="above" width="{d:.4}" height="{d:.4}" patternUnits="userSpaceOnUse"><path d="M0,{d:.4}L{d:.4},0" stroke="indianred" stroke-width="{sw:.4}"/></pattern></defs>"#,
        d = span / 60.0,
        sw = stroke * 0.5,
    )
    .unwrap();
    if let Some(c) = style.hatch_level {
        let step = (grid.nx.max(grid.ny) / 64).max(1);
        let (cx, cy) = grid.cells();
        for i in (0..cx).step_by(step) {
            for j in (0..cy).step_by(step) {
                let v = grid.value(i, j);
                let fill = if v < c { "below" } else { "above" };
                let p0 = grid.coords_to_plane(i as f64, j as f64);
                let p1 = grid.coords_to_plane((i + step) as f64, j as f64);
                let p2 = grid.coords_to_plane((i + step) as f64, (j + step) as f64);
                let p3 = grid.coords_to_plane(i as f64, (j + step) as f64);
                writeln!(
                    s,
                    r#"<polygon points="{} {} {} {}" fill="url(#{fill})" stroke="none"/>"#,
                    fmt_pt(p0),
                    fmt_pt(p1),
                    fmt_pt(p2),
                    fmt_pt(p3)
                )
                .unwrap();
            }
        }
    }
    writeln!(
        s,
        r#"<polygon points="{} {} {} {}" fill="none" stroke="gray" stroke-width="{stroke:.4}"/>"#,
        fmt_pt(corners[0]),
        fmt_pt(corners[1]),
        fmt_pt(corners[2]),
        fmt_pt(corners[3])
    )
    .unwrap();
    for (id, l) in lines.iter().enumerate() {
        if l.points.is_empty() {
            continue;
        }
        let mut d = format!("M{}", fmt_pt(l.points[0]));
        for p in &l.points[1..] {
            write!(d, "L{}", fmt_pt(*p)).unwrap();
        }
        if l.closed && !l.winds() {
            d.push('Z');
        }
        let w = l.winding.map_or(String::from("none"), |[p, q]| format!("{p},{q}"));
        writeln!(
            s,
            r#"<path id="line{id}" d="{d}" fill="none" stroke="black" stroke-width="{:.4}" data-winding="{w}"><title>winding {w}</title></path>"#,
            stroke * 1.5
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Binary PPM heat map of the vertex values, blue (low) to red (high).
pub fn heatmap_ppm(grid: &ScalarGrid) -> Vec<u8> {
    let (lo, hi) = grid.min_max();
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = format!("P6\n{} {}\n255\n", grid.nx, grid.ny).into_bytes();
    // image rows run top to bottom along decreasing j
    for j in (0..grid.ny).rev() {
        for i in 0..grid.nx {
            let t = ((grid.value(i, j) - lo) / span).clamp(0.0, 1.0);
            let r = (255.0 * t).round() as u8;
            let b = (255.0 * (1.0 - t)).round() as u8;
            let g = (255.0 * (1.0 - (2.0 * t - 1.0).abs())).round() as u8;
            out.extend_from_slice(&[r, g, b]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelsets::{extract_contours, sample};
    use crate::lattice_angles::SymmetryOrder;
    use crate::potential::cosine_family;
    use std::f64::consts::TAU;

    fn grid() -> ScalarGrid {
        let c = cosine_family(SymmetryOrder::Four, TAU).unwrap();
        let w = Window { origin: Vec2::ZERO, axes: [Vec2::new(TAU, 0.0), Vec2::new(0.0, TAU)] };
        sample(&c, w, 16, 12, true).unwrap()
    }

    #[test]
    fn nvgrid_header_and_round_trip() {
        let g = grid();
        let mut buf = Vec::new();
        write_nvgrid(&g, &mut buf).unwrap();
        assert_eq!(&buf[..8], b"NVGRID01");
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 16);
        assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 12);
        assert_eq!(buf.len(), 16 + 16 * 12 * 8);
        let w = Window { origin: g.origin, axes: g.axes };
        let h = read_nvgrid(&buf[..], w, true).unwrap();
        assert_eq!(h.values, g.values);
        assert!(read_nvgrid(&buf[..20], w, true).is_err());
    }

    #[test]
    fn csv_and_svg_shapes() {
        let g = grid();
        let l = extract_contours(&g, 1.0);
        let csv = contours_csv(&l);
        assert!(csv.starts_with("polyline_id,x,y,closed,p,q\n"));
        assert_eq!(csv.lines().count(), 1 + l.iter().map(|p| p.points.len()).sum::<usize>());
        let svg = contours_svg(&g, &l, SvgStyle { hatch_level: Some(1.0), ..Default::default() });
        assert_eq!(svg.matches("<path id=").count(), l.len());
        assert!(svg.contains("data-winding=\"0,0\""));
        let ppm = heatmap_ppm(&g);
        assert_eq!(ppm.len(), "P6\n16 12\n255\n".len() + 16 * 12 * 3);
    }
}
