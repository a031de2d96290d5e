use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::grid::{Offset, ScalarGrid};
use crate::geometry::Vec2;

/// A level line traced through the mesh, with the side `V > c` on its left.
///
/// On a periodic grid the vertices are lifted to the plane; a closed line
/// with winding `(p, q)` ends where it started, translated by
/// `p·axes[0] + q·axes[1]` (the repeated vertex is not stored).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<Vec2>,
    pub closed: bool,
    pub winding: Option<[i64; 2]>,
    /// A mesh node on each side of the line.
    pub above_node: usize,
    pub below_node: usize,
}

impl Polyline {
    pub fn winds(&self) -> bool {
        self.winding.is_some_and(|w| w != [0, 0])
    }

    /// Shoelace area; positive when the above side is enclosed.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|k| self.points[k].cross(self.points[(k + 1) % n]))
            .sum::<f64>()
            * 0.5
    }

    pub fn length(&self) -> f64 {
        let mut l: f64 = self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        if self.closed && self.points.len() > 1 && !self.winds() {
            l += (self.points[0] - self.points[self.points.len() - 1]).norm();
        }
        l
    }
}

type EdgeKey = (u32, u32, Offset);

struct Segment {
    start: EdgeKey,
    start_off: Offset,
    end: EdgeKey,
    end_off: Offset,
    above: usize,
    below: usize,
}

fn sub(a: Offset, b: Offset) -> Offset {
    [a[0] - b[0], a[1] - b[1]]
}

/// Canonical key of the edge between two node copies, and the offset of
/// the copy of its lower-id endpoint.
fn edge_key(p: (usize, Offset), q: (usize, Offset)) -> (EdgeKey, Offset) {
    let (lo, hi) = if p.0 <= q.0 { (p, q) } else { (q, p) };
    ((lo.0 as u32, hi.0 as u32, sub(hi.1, lo.1)), lo.1)
}

/// Marching triangles at level `c` (nudged off sample values), stitched into
/// polylines. Empty unless `c` lies strictly inside the sampled range.
pub fn extract_contours(grid: &ScalarGrid, c: f64) -> Vec<Polyline> {
    let (lo, hi) = grid.min_max();
    if !(c > lo && c < hi) {
        return Vec::new();
    }
    let level = grid.effective_level(c);
    let ccw = grid.axes[0].cross(grid.axes[1]) > 0.0;
    let above = |id: usize| grid.node_value(id) > level;

    let mut segs: Vec<Segment> = Vec::new();
    grid.for_each_triangle(|t| {
        let s = [above(t[0].0), above(t[1].0), above(t[2].0)];
        if s[0] == s[1] && s[1] == s[2] {
            return;
        }
        // the vertex whose sign differs from the other two
        let k = if s[0] == s[1] { 2 } else if s[0] == s[2] { 1 } else { 0 };
        let (prev, next) = (t[(k + 2) % 3], t[(k + 1) % 3]);
        let (ka, oa) = edge_key(prev, t[k]);
        let (kb, ob) = edge_key(t[k], next);
        // the cut-off corner lies to the right of prev-edge → next-edge
        // in a counterclockwise triangle
        let forward = s[k] != ccw;
        let (other_above, other_below) = if s[k] { (t[k].0, next.0) } else { (next.0, t[k].0) };
        segs.push(if forward {
            Segment { start: ka, start_off: oa, end: kb, end_off: ob, above: other_above, below: other_below }
        } else {
            Segment { start: kb, start_off: ob, end: ka, end_off: oa, above: other_above, below: other_below }
        });
    });

    let point = |key: &EdgeKey| -> Vec2 {
        let (a, b, d) = (key.0 as usize, key.1 as usize, key.2);
        let (va, vb) = (grid.node_value(a), grid.node_value(b));
        let t = (level - va) / (vb - va);
        let pa = grid.lifted_pos(a, [0, 0]);
        let pb = grid.lifted_pos(b, d);
        pa + (pb - pa) * t
    };
    let shift = |o: Offset| grid.axes[0] * o[0] as f64 + grid.axes[1] * o[1] as f64;

    let by_start: HashMap<EdgeKey, usize> = segs.iter().enumerate().map(|(i, s)| (s.start, i)).collect();
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();

    let trace = |first: usize, used: &mut Vec<bool>| -> Polyline {
        let mut pts = Vec::new();
        let mut frame: Offset = [0, 0];
        let s0 = &segs[first];
        pts.push(point(&s0.start) + shift(s0.start_off));
        let mut cur = first;
        loop {
            used[cur] = true;
            let s = &segs[cur];
            pts.push(point(&s.end) + shift(frame) + shift(s.end_off));
            match by_start.get(&s.end) {
                Some(&nx) => {
                    frame = [
                        frame[0] + s.end_off[0] - segs[nx].start_off[0],
                        frame[1] + s.end_off[1] - segs[nx].start_off[1],
                    ];
                    if nx == first {
                        pts.pop();
                        let w = [frame[0] as i64, frame[1] as i64];
                        return Polyline {
                            points: pts,
                            closed: true,
                            winding: grid.periodic.then_some(w),
                            above_node: s0.above,
                            below_node: s0.below,
                        };
                    }
                    cur = nx;
                }
                None => {
                    return Polyline {
                        points: pts,
                        closed: false,
                        winding: None,
                        above_node: s0.above,
                        below_node: s0.below,
                    }
                }
            }
        }
    };

    if !grid.periodic {
        let ends: std::collections::HashSet<EdgeKey> = segs.iter().map(|s| s.end).collect();
        for i in 0..segs.len() {
            if !ends.contains(&segs[i].start) {
                out.push(trace(i, &mut used));
            }
        }
    }
    for i in 0..segs.len() {
        if !used[i] {
            out.push(trace(i, &mut used));
        }
    }
    out
}
