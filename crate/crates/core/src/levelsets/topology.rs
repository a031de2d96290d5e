use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::grid::{Offset, ScalarGrid};
use crate::geometry::{diameter, Vec2};

/// Which side of the level is labeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Below,
    Above,
}

impl Sign {
    pub fn contains(self, v: f64, c: f64) -> bool {
        match self {
            Sign::Below => v < c,
            Sign::Above => v > c,
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Below => Sign::Above,
            Sign::Above => Sign::Below,
        }
    }
}

/// Homology of a component's lift: bounded, a periodic strip along `(p, q)`,
/// or doubly periodic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WrapClass {
    Bounded,
    Line([i64; 2]),
    Plane,
}

impl WrapClass {
    pub fn wraps(self) -> bool {
        self != WrapClass::Bounded
    }

    /// `(p, q)`; `(0, 0)` for bounded components.
    pub fn pq(self) -> [i64; 2] {
        match self {
            WrapClass::Line(d) => d,
            _ => [0, 0],
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive direction with the first nonzero entry positive.
pub fn normalize_direction(v: [i64; 2]) -> [i64; 2] {
    let g = gcd(v[0], v[1]);
    if g == 0 {
        return [0, 0];
    }
    let (p, q) = (v[0] / g, v[1] / g);
    if p < 0 || (p == 0 && q < 0) {
        [-p, -q]
    } else {
        [p, q]
    }
}

/// Subgroup of `Z²` in Hermite normal form: rows `(a, b)` and `(0, d)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Subgroup {
    rows: [[i64; 2]; 2],
}

impl Subgroup {
    pub fn insert(&mut self, v: [i64; 2]) {
        let mut r = [self.rows[0], self.rows[1], v];
        // column 0 by Euclid
        loop {
            r.sort_by_key(|x| if x[0] == 0 { i64::MAX } else { x[0].abs() });
            if r[1][0] == 0 {
                break;
            }
            let k = r[1][0] / r[0][0];
            r[1] = [r[1][0] - k * r[0][0], r[1][1] - k * r[0][1]];
        }
        let mut d = gcd(r[1][1], r[2][1]);
        let mut top = r[0];
        if top[0] < 0 {
            top = [-top[0], -top[1]];
        }
        if top[0] == 0 {
            // rank ≤ 1 along the second axis
            d = gcd(d, top[1]);
            self.rows = [[0, 0], [0, d]];
            return;
        }
        if d != 0 {
            top[1] = top[1].rem_euclid(d);
        }
        self.rows = [top, [0, d]];
    }

    pub fn union(&mut self, o: &Subgroup) {
        for r in o.rows {
            if r != [0, 0] {
                self.insert(r);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| **r != [0, 0]).count()
    }

    pub fn class(&self) -> WrapClass {
        match self.rank() {
            0 => WrapClass::Bounded,
            1 => {
                let g = if self.rows[0] != [0, 0] { self.rows[0] } else { self.rows[1] };
                WrapClass::Line(normalize_direction(g))
            }
            _ => WrapClass::Plane,
        }
    }
}

/// Union-find whose elements carry an integer lattice offset relative to
/// their root, so that cycles with nonzero translation are detected.
pub(crate) struct OffsetUnionFind {
    parent: Vec<u32>,
    off: Vec<Offset>,
    rank: Vec<u8>,
    groups: HashMap<u32, Subgroup>,
}

fn add(a: Offset, b: Offset) -> Offset {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: Offset, b: Offset) -> Offset {
    [a[0] - b[0], a[1] - b[1]]
}

impl OffsetUnionFind {
    pub fn new(n: usize) -> Self {
        OffsetUnionFind {
            parent: (0..n as u32).collect(),
            off: vec![[0, 0]; n],
            rank: vec![0; n],
            groups: HashMap::new(),
        }
    }

    /// Root of `x` and the offset of `x` relative to it.
    pub fn find(&mut self, x: usize) -> (usize, Offset) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] as usize != cur {
            path.push(cur);
            cur = self.parent[cur] as usize;
        }
        let root = cur;
        // compress, accumulating offsets from the top of the path down
        let mut acc = [0, 0];
        for &p in path.iter().rev() {
            acc = add(acc, self.off[p]);
            self.off[p] = acc;
            self.parent[p] = root as u32;
        }
        (root, if path.is_empty() { [0, 0] } else { self.off[x] })
    }

    /// Records that copy `b + d` is adjacent to `a`, i.e. `lift(b) = lift(a) + d`.
    pub fn union(&mut self, a: usize, b: usize, d: Offset) {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        let rel = sub(add(oa, d), ob);
        if ra == rb {
            if rel != [0, 0] {
                self.groups
                    .entry(ra as u32)
                    .or_default()
                    .insert([rel[0] as i64, rel[1] as i64]);
            }
            return;
        }
        // attach the lower-rank root; offsets are relative to the new root
        let (child, root, child_off) = if self.rank[ra] < self.rank[rb] {
            (ra, rb, [-rel[0], -rel[1]])
        } else {
            (rb, ra, rel)
        };
        if self.rank[ra] == self.rank[rb] {
            self.rank[root] += 1;
        }
        self.parent[child] = root as u32;
        self.off[child] = child_off;
        if let Some(g) = self.groups.remove(&(child as u32)) {
            self.groups.entry(root as u32).or_default().union(&g);
        }
    }

    pub fn group(&self, root: usize) -> Subgroup {
        self.groups.get(&(root as u32)).copied().unwrap_or_default()
    }
}

/// Per-component summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub label: u32,
    pub size: usize,
    pub wrap: WrapClass,
    /// Diameter of the planar lift; absent for wrapping components.
    pub diameter: Option<f64>,
    pub bbox: [Vec2; 2],
    /// Window sides touched: `[s = 0, s = max, t = 0, t = max]`.
    pub touches: [bool; 4],
}

/// Connected components of `{V < c}` or `{V > c}` on the mesh nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentLabeling {
    /// Effective level after tie breaking.
    pub level: f64,
    pub sign: Sign,
    /// Component label per mesh node, `NONE` for nodes of the other sign.
    pub labels: Vec<u32>,
    pub components: Vec<ComponentStats>,
    #[serde(skip)]
    pub(crate) lifts: Vec<Offset>,
}

impl ComponentLabeling {
    pub const NONE: u32 = u32::MAX;

    pub fn any_wraps(&self) -> bool {
        self.components.iter().any(|c| c.wrap.wraps())
    }

    pub fn wrapping(&self) -> Vec<WrapClass> {
        self.components.iter().map(|c| c.wrap).filter(|w| w.wraps()).collect()
    }
}

/// Labels one sign of the level set, tracking lattice translations so that
/// components which wrap around the torus are recognised.
pub fn label_components(grid: &ScalarGrid, c: f64, sign: Sign) -> ComponentLabeling {
    let level = grid.effective_level(c);
    let n = grid.num_nodes();
    let inside: Vec<bool> = (0..n).map(|id| sign.contains(grid.node_value(id), level)).collect();
    let mut uf = OffsetUnionFind::new(n);
    grid.for_each_edge(|(a, oa), (b, ob)| {
        if inside[a] && inside[b] {
            uf.union(a, b, sub(ob, oa));
        }
    });
    let mut labels = vec![ComponentLabeling::NONE; n];
    let mut lifts = vec![[0, 0]; n];
    let mut root_label: HashMap<usize, u32> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for id in 0..n {
        if !inside[id] {
            continue;
        }
        let (root, off) = uf.find(id);
        let l = *root_label.entry(root).or_insert_with(|| {
            members.push(Vec::new());
            (members.len() - 1) as u32
        });
        labels[id] = l;
        lifts[id] = off;
        members[l as usize].push(id);
    }
    let mut roots = vec![0usize; members.len()];
    for (&r, &l) in &root_label {
        roots[l as usize] = r;
    }
    let components = members
        .iter()
        .enumerate()
        .map(|(l, ids)| {
            let wrap = uf.group(roots[l]).class();
            let pts: Vec<Vec2> = ids.iter().map(|&id| grid.lifted_pos(id, lifts[id])).collect();
            let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
            let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
            for p in &pts {
                lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
                hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
            }
            let mut touches = [false; 4];
            for &id in ids {
                for (t, b) in touches.iter_mut().zip(grid.boundary_sides(id)) {
                    *t |= b;
                }
            }
            ComponentStats {
                label: l as u32,
                size: ids.len(),
                wrap,
                diameter: (!wrap.wraps()).then(|| diameter(&pts)),
                bbox: [lo, hi],
                touches,
            }
        })
        .collect();
    ComponentLabeling { level, sign, labels, components, lifts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_hnf() {
        let mut g = Subgroup::default();
        assert_eq!(g.class(), WrapClass::Bounded);
        g.insert([2, 4]);
        assert_eq!(g.class(), WrapClass::Line([1, 2]));
        g.insert([-1, -2]);
        assert_eq!(g.rank(), 1);
        g.insert([0, 3]);
        assert_eq!(g.class(), WrapClass::Plane);
        let mut h = Subgroup::default();
        h.insert([0, -5]);
        assert_eq!(h.class(), WrapClass::Line([0, 1]));
        h.insert([0, 3]);
        assert_eq!(h.rank(), 1);
    }

    #[test]
    fn cycle_offsets_are_detected() {
        // a ring of 4 elements closing with translation (1, 0)
        let mut uf = OffsetUnionFind::new(4);
        uf.union(0, 1, [0, 0]);
        uf.union(1, 2, [0, 0]);
        uf.union(2, 3, [0, 0]);
        let (r, _) = uf.find(0);
        assert_eq!(uf.group(r).rank(), 0);
        uf.union(3, 0, [1, 0]);
        let (r, _) = uf.find(2);
        assert_eq!(uf.group(r).class(), WrapClass::Line([1, 0]));
    }

    #[test]
    fn offsets_compose_through_paths() {
        let mut uf = OffsetUnionFind::new(5);
        uf.union(0, 1, [1, 0]);
        uf.union(2, 3, [0, 1]);
        uf.union(1, 2, [0, 0]);
        uf.union(3, 4, [0, 0]);
        let (r0, o0) = uf.find(0);
        let (r4, o4) = uf.find(4);
        assert_eq!(r0, r4);
        assert_eq!(sub(o4, o0), [1, 1]);
    }
}
