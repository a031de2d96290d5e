use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use novikov_core::lattice_angles::SymmetryOrder;

#[derive(Debug, Parser)]
#[command(name = "novikov", version, about = "Level-line topology of superposed periodic potentials")]
pub struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// JSON file whose keys mirror command-line flags; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Worker threads.
    #[arg(long, global = true, env = "NOVIKOV_JOBS")]
    pub jobs: Option<usize>,

    /// Directory receiving the JSON report, the table and any figures.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Enumerate magic angles.
    Angles {
        #[arg(long, default_value = "4")]
        symmetry: SymmetryOrder,
        #[arg(long)]
        max_m: i64,
    },
    /// Magic angles approaching a given angle.
    Approx {
        #[arg(long, default_value = "4")]
        symmetry: SymmetryOrder,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Periods and equivalence lattices of a magic angle.
    Periods {
        #[arg(long, default_value = "4")]
        symmetry: SymmetryOrder,
        #[arg(long, default_value_t = TAU)]
        period: f64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        negative: bool,
    },
    /// Sample a superposition on a grid.
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// NVGRID01 output file.
        #[arg(long, value_name = "PATH")]
        grid_out: Option<PathBuf>,
        /// PPM heatmap output file.
        #[arg(long, value_name = "PATH")]
        ppm: Option<PathBuf>,
    },
    /// Trace level lines.
    Trace {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, allow_hyphen_values = true)]
        level: f64,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Bisect for the interval of levels carrying open lines.
    Critical {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Singular net of the symmetric superposition at a magic angle.
    Net {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Verification suites.
    #[command(subcommand)]
    Verify(Verify),
    /// Critical level of the symmetric superposition over magic angles, as CSV.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        res: ResArgs,
        #[arg(long)]
        max_m: i64,
        /// Lower end of the angle range (radians unless --degrees).
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        degrees: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Interval widths over random shifts at a magic angle.
    Widths {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        res: ResArgs,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        negative: bool,
        #[arg(long, default_value_t = 20)]
        shifts: usize,
        /// Seed of the shift sample.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Component diameters near the critical level of a symmetric potential.
    Diameters {
        #[arg(long, default_value = "4")]
        symmetry: SymmetryOrder,
        #[arg(long, default_value_t = TAU)]
        period: f64,
        /// Seeded random potential instead of the cosine family.
        #[arg(long)]
        potential_seed: Option<u64>,
        #[arg(long, default_value_t = 2)]
        cutoff: u32,
        /// Level offsets, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        delta_c: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        copies: usize,
        #[command(flatten)]
        res: ResArgs,
    },
    /// Brackets along magic approximants of a generic angle.
    Convergence {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        res: ResArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Brackets along periodic approximants of incommensurate layers.
    Incommensurate {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        res: ResArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(long, default_value_t = 3)]
        s_max: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Linear,
    Pointwise,
}

#[derive(Clone, Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, default_value = "4")]
    pub symmetry: SymmetryOrder,
    /// Period T of the first layer.
    #[arg(long, default_value_t = TAU)]
    pub period: f64,
    /// Period T′ of the second layer; defaults to T.
    #[arg(long)]
    pub period2: Option<f64>,
    /// Seeded random layers instead of the cosine family.
    #[arg(long)]
    pub potential_seed: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub cutoff: u32,
    #[arg(long, value_enum, default_value_t = Kind::Linear)]
    pub kind: Kind,
    /// Polynomial Q as `i,j,c;i,j,c;…` for pointwise superpositions.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// JSON superposition document; replaces the layer flags above.
    #[arg(long, value_name = "PATH")]
    pub family: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct AngleArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["m", "n"])]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, requires = "n")]
    pub m: Option<i64>,
    #[arg(long, requires = "m")]
    pub n: Option<i64>,
    #[arg(long)]
    pub negative: bool,
    /// Shift `x,y` of the second layer.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
}

#[derive(Clone, Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Square window of this side centered at the origin (non-periodic).
    #[arg(long)]
    pub side: Option<f64>,
    #[command(flatten)]
    pub res: ResArgs,
}

#[derive(Clone, Debug, Args)]
pub struct ResArgs {
    #[arg(long, default_value_t = 16)]
    pub per_wavelength: usize,
    #[arg(long)]
    pub min_samples: Option<usize>,
    #[arg(long, default_value_t = 512)]
    pub max_samples: usize,
    /// Bisection tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}
