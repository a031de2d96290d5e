use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::lattice_angles::PeriodPair;
use crate::potential::Field;

/// Triangulation of each grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshKind {
    /// Four triangles around an extra sample at the cell center.
    CenterFan,
    /// Two triangles split along the `(i+1, j)`–`(i, j+1)` diagonal.
    DiagonalSplit,
}

impl MeshKind {
    /// `DiagonalSplit` for periodic cells with a 60° or 120° corner (the
    /// split is then along the short diagonal), `CenterFan` otherwise.
    pub fn for_axes(axes: [Vec2; 2], periodic: bool) -> Self {
        let cos = axes[0].dot(axes[1]) / (axes[0].norm() * axes[1].norm());
        if periodic && (cos.abs() - 0.5).abs() < 1e-9 {
            MeshKind::DiagonalSplit
        } else {
            MeshKind::CenterFan
        }
    }
}

/// Sampled parallelogram `origin + s·axes[0] + t·axes[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub origin: Vec2,
    pub axes: [Vec2; 2],
}

impl Window {
    pub fn from_periods(origin: Vec2, p: &PeriodPair) -> Self {
        Window { origin, axes: [p.b1, p.b2] }
    }

    /// Axis-aligned square of side `side` centred at `center`.
    pub fn square(center: Vec2, side: f64) -> Self {
        Window {
            origin: center - Vec2::new(0.5 * side, 0.5 * side),
            axes: [Vec2::new(side, 0.0), Vec2::new(0.0, side)],
        }
    }
}

/// Samples of a field on a (possibly periodic) parallelogram grid.
///
/// Vertex `(i, j)` sits at `origin + (i/nx)·axes[0] + (j/ny)·axes[1]` and is
/// stored at `values[i*ny + j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarGrid {
    pub origin: Vec2,
    pub axes: [Vec2; 2],
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    /// Cell-center samples, present for [`MeshKind::CenterFan`].
    pub centers: Option<Vec<f64>>,
    pub periodic: bool,
    pub mesh: MeshKind,
}

/// Lattice offset of a node copy, in units of the grid axes.
pub(crate) type Offset = [i32; 2];

pub(crate) const MIN_SAMPLES: usize = 8;

impl ScalarGrid {
    /// Grid from precomputed vertex values; center samples are linearly
    /// interpolated when the mesh needs them.
    pub fn from_values(
        window: Window,
        nx: usize,
        ny: usize,
        values: Vec<f64>,
        periodic: bool,
    ) -> Result<Self> {
        check_size(nx, ny)?;
        if values.len() != nx * ny {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                nx * ny,
                values.len()
            )));
        }
        let mesh = MeshKind::for_axes(window.axes, periodic);
        let mut g = ScalarGrid {
            origin: window.origin,
            axes: window.axes,
            nx,
            ny,
            values,
            centers: None,
            periodic,
            mesh,
        };
        if mesh == MeshKind::CenterFan {
            let (cx, cy) = g.cells();
            let mut c = Vec::with_capacity(cx * cy);
            for i in 0..cx {
                for j in 0..cy {
                    let v = |a: usize, b: usize| g.values[(a % nx) * ny + b % ny];
                    c.push(0.25 * (v(i, j) + v(i + 1, j) + v(i, j + 1) + v(i + 1, j + 1)));
                }
            }
            g.centers = Some(c);
        }
        Ok(g)
    }

    /// Number of cells along each axis.
    pub fn cells(&self) -> (usize, usize) {
        if self.periodic {
            (self.nx, self.ny)
        } else {
            (self.nx - 1, self.ny - 1)
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.nx * self.ny
    }

    pub fn num_nodes(&self) -> usize {
        self.num_vertices() + self.centers.as_ref().map_or(0, Vec::len)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny + j]
    }

    pub(crate) fn node_value(&self, id: usize) -> f64 {
        let nv = self.num_vertices();
        if id < nv {
            self.values[id]
        } else {
            self.centers.as_ref().expect("center node without centers")[id - nv]
        }
    }

    /// Grid coordinates `(s, t)` of a node, in vertex-index units.
    pub(crate) fn node_coords(&self, id: usize) -> (f64, f64) {
        let nv = self.num_vertices();
        if id < nv {
            ((id / self.ny) as f64, (id % self.ny) as f64)
        } else {
            let cy = self.cells().1;
            let k = id - nv;
            ((k / cy) as f64 + 0.5, (k % cy) as f64 + 0.5)
        }
    }

    pub(crate) fn coords_to_plane(&self, s: f64, t: f64) -> Vec2 {
        self.origin + self.axes[0] * (s / self.nx as f64) + self.axes[1] * (t / self.ny as f64)
    }

    pub(crate) fn lifted_pos(&self, id: usize, off: Offset) -> Vec2 {
        let (s, t) = self.node_coords(id);
        self.coords_to_plane(s, t)
            + self.axes[0] * off[0] as f64
            + self.axes[1] * off[1] as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        let it = self.values.iter().chain(self.centers.iter().flatten());
        it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// `c`, nudged upward one ulp at a time until no sample equals it.
    pub fn effective_level(&self, c: f64) -> f64 {
        let mut c = c;
        while self
            .values
            .iter()
            .chain(self.centers.iter().flatten())
            .any(|&v| v == c)
        {
            c = c.next_up();
        }
        c
    }

    /// Vertex `(i, j)` with indices wrapped onto the torus.
    fn vertex(&self, i: usize, j: usize) -> (usize, Offset) {
        if self.periodic {
            let off = [(i / self.nx) as i32, (j / self.ny) as i32];
            ((i % self.nx) * self.ny + j % self.ny, off)
        } else {
            (i * self.ny + j, [0, 0])
        }
    }

    fn center(&self, i: usize, j: usize) -> (usize, Offset) {
        (self.num_vertices() + i * self.cells().1 + j, [0, 0])
    }

    /// Every triangle, counterclockwise in grid coordinates.
    pub(crate) fn for_each_triangle(&self, mut f: impl FnMut([(usize, Offset); 3])) {
        let (cx, cy) = self.cells();
        for i in 0..cx {
            for j in 0..cy {
                let v00 = self.vertex(i, j);
                let v10 = self.vertex(i + 1, j);
                let v01 = self.vertex(i, j + 1);
                let v11 = self.vertex(i + 1, j + 1);
                match self.mesh {
                    MeshKind::CenterFan => {
                        let c = self.center(i, j);
                        f([v00, v10, c]);
                        f([v10, v11, c]);
                        f([v11, v01, c]);
                        f([v01, v00, c]);
                    }
                    MeshKind::DiagonalSplit => {
                        f([v00, v10, v01]);
                        f([v10, v11, v01]);
                    }
                }
            }
        }
    }

    /// Every mesh edge once, as two node copies.
    pub(crate) fn for_each_edge(&self, mut f: impl FnMut((usize, Offset), (usize, Offset))) {
        let (cx, cy) = self.cells();
        let (ex, ey) = if self.periodic { (self.nx, self.ny) } else { (self.nx - 1, self.ny - 1) };
        for i in 0..ex {
            for j in 0..self.ny {
                f(self.vertex(i, j), self.vertex(i + 1, j));
            }
        }
        for i in 0..self.nx {
            for j in 0..ey {
                f(self.vertex(i, j), self.vertex(i, j + 1));
            }
        }
        for i in 0..cx {
            for j in 0..cy {
                match self.mesh {
                    MeshKind::CenterFan => {
                        let c = self.center(i, j);
                        for v in [
                            self.vertex(i, j),
                            self.vertex(i + 1, j),
                            self.vertex(i, j + 1),
                            self.vertex(i + 1, j + 1),
                        ] {
                            f(c, v);
                        }
                    }
                    MeshKind::DiagonalSplit => f(self.vertex(i + 1, j), self.vertex(i, j + 1)),
                }
            }
        }
    }

    /// Whether vertex `id` lies on the window boundary: `[s=0, s=max, t=0, t=max]`.
    pub(crate) fn boundary_sides(&self, id: usize) -> [bool; 4] {
        if self.periodic || id >= self.num_vertices() {
            return [false; 4];
        }
        let (i, j) = (id / self.ny, id % self.ny);
        [i == 0, i == self.nx - 1, j == 0, j == self.ny - 1]
    }

    /// Longest cell diagonal in the plane.
    pub fn cell_diagonal(&self) -> f64 {
        let (a, b) = (self.axes[0] * (1.0 / self.nx as f64), self.axes[1] * (1.0 / self.ny as f64));
        (a + b).norm().max((a - b).norm())
    }
}

fn check_size(nx: usize, ny: usize) -> Result<()> {
    if nx < MIN_SAMPLES || ny < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "grid needs at least {MIN_SAMPLES} samples per axis, got {nx}×{ny}"
        )));
    }
    Ok(())
}

const PERIOD_PROBES: usize = 32;
const PERIOD_TOL: f64 = 1e-8;

/// Checks `V(r + axis) = V(r)` for both axes at seeded probe points.
pub fn check_periodic<F: Field + ?Sized>(field: &F, window: &Window) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let scale = window.axes[0].norm().max(window.axes[1].norm());
    let probes: Vec<Vec2> = (0..PERIOD_PROBES)
        .map(|_| {
            window.origin
                + window.axes[0] * rng.gen_range(0.0..1.0)
                + window.axes[1] * rng.gen_range(0.0..1.0)
                + Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
        })
        .collect();
    for (axis, &v) in window.axes.iter().enumerate() {
        let mismatch = probes
            .iter()
            .map(|&r| (field.value(r + v) - field.value(r)).abs())
            .fold(0.0, f64::max);
        if !(mismatch <= PERIOD_TOL) {
            return Err(Error::NotPeriodic { axis, mismatch });
        }
    }
    Ok(())
}

/// Samples `field` on `window`; rows are evaluated in parallel.
pub fn sample<F: Field + ?Sized>(
    field: &F,
    window: Window,
    nx: usize,
    ny: usize,
    periodic: bool,
) -> Result<ScalarGrid> {
    check_size(nx, ny)?;
    if !(window.origin.is_finite() && window.axes.iter().all(|a| a.is_finite()))
        || window.axes[0].cross(window.axes[1]) == 0.0
    {
        return Err(Error::InvalidInput("degenerate sampling window".into()));
    }
    if periodic {
        check_periodic(field, &window)?;
    }
    let mesh = MeshKind::for_axes(window.axes, periodic);
    let mut g = ScalarGrid {
        origin: window.origin,
        axes: window.axes,
        nx,
        ny,
        values: vec![0.0; nx * ny],
        centers: None,
        periodic,
        mesh,
    };
    let at = |s: f64, t: f64| {
        window.origin + window.axes[0] * (s / nx as f64) + window.axes[1] * (t / ny as f64)
    };
    g.values.par_chunks_mut(ny).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = field.value(at(i as f64, j as f64));
        }
    });
    if mesh == MeshKind::CenterFan {
        let (cx, cy) = g.cells();
        let mut c = vec![0.0; cx * cy];
        c.par_chunks_mut(cy).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = field.value(at(i as f64 + 0.5, j as f64 + 0.5));
            }
        });
        g.centers = Some(c);
    }
    Ok(g)
}

/// Samples per axis giving at least `per_wavelength` samples per shortest
/// wavelength of the field.
pub fn resolution_for<F: Field + ?Sized>(field: &F, axis: Vec2, per_wavelength: usize) -> usize {
    let n = (axis.norm() / field.shortest_wavelength() * per_wavelength as f64).ceil() as usize;
    n.max(MIN_SAMPLES)
}
