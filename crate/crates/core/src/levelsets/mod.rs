//! Level sets of sampled potentials: contours, component labeling on the
//! torus and classification of the open-line regime.

mod analysis;
mod contours;
mod export;
mod grid;
mod topology;

pub use analysis::{
    classes_from_contours, classify_situation, classify_window, classify_window_grid,
    component_diameters, critical_interval, critical_interval_on_grid, default_tol, singular_net,
    symmetry_mismatch, CriticalLevelReport, Evidence, Situation, SingularNet,
};
pub use contours::{extract_contours, Polyline};
pub use export::{contours_csv, contours_svg, heatmap_ppm, read_nvgrid, write_nvgrid, SvgStyle};
pub use grid::{check_periodic, resolution_for, sample, MeshKind, ScalarGrid, Window};
pub use topology::{
    label_components, normalize_direction, ComponentLabeling, ComponentStats, Sign, Subgroup,
    WrapClass,
};
