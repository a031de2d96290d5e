use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::lattice_angles::SymmetryOrder;

/// One Fourier mode `c·exp(i K·r)`, `K = k¹g₁ + k²g₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub k: [i64; 2],
    pub re: f64,
    pub im: f64,
}

impl FourierTerm {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Where the coefficients of [`make_symmetric_potential`] come from.
#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientSource {
    Seed(u64),
    Explicit(Vec<FourierTerm>),
}

#[derive(Serialize, Deserialize)]
struct PotentialDoc {
    symmetry: SymmetryOrder,
    period: f64,
    terms: Vec<FourierTerm>,
}

/// Real finite Fourier series on the reciprocal lattice of a square or
/// triangular period lattice, invariant under rotation by `2π/order`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PotentialDoc", into = "PotentialDoc")]
pub struct PotentialSpec {
    symmetry: SymmetryOrder,
    period: f64,
    terms: Vec<FourierTerm>,
    // (K, 2·re, 2·im) for one representative of each ±k pair
    compiled: Vec<(Vec2, f64, f64)>,
}

impl PartialEq for PotentialSpec {
    fn eq(&self, o: &Self) -> bool {
        self.symmetry == o.symmetry && self.period == o.period && self.terms == o.terms
    }
}

impl TryFrom<PotentialDoc> for PotentialSpec {
    type Error = Error;
    fn try_from(d: PotentialDoc) -> Result<Self> {
        PotentialSpec::new(d.symmetry, d.period, d.terms)
    }
}

impl From<PotentialSpec> for PotentialDoc {
    fn from(p: PotentialSpec) -> Self {
        PotentialDoc {
            symmetry: p.symmetry,
            period: p.period,
            terms: p.terms,
        }
    }
}

/// Reciprocal basis with `gᵢ·eⱼ = 2π δᵢⱼ`.
pub fn reciprocal_basis(symmetry: SymmetryOrder, period: f64) -> [Vec2; 2] {
    let s = TAU / period;
    if symmetry.is_square() {
        [Vec2::new(s, 0.0), Vec2::new(0.0, s)]
    } else {
        let r3 = 3f64.sqrt();
        [Vec2::new(s, -s / r3), Vec2::new(0.0, 2.0 * s / r3)]
    }
}

/// Integer action of the base rotation (90° or 60°) on reciprocal coordinates.
fn rotate_k(symmetry: SymmetryOrder, k: [i64; 2]) -> [i64; 2] {
    let [a, b] = k;
    if symmetry.is_square() {
        [-b, a]
    } else {
        [a - b, a]
    }
}

/// The rotation-group orbit of `k` (90° steps, 120° steps or 60° steps).
pub fn orbit(symmetry: SymmetryOrder, k: [i64; 2]) -> Vec<[i64; 2]> {
    let step = |k| match symmetry {
        SymmetryOrder::Three => rotate_k(symmetry, rotate_k(symmetry, k)),
        _ => rotate_k(symmetry, k),
    };
    let mut out = vec![k];
    let mut cur = step(k);
    while cur != k {
        out.push(cur);
        cur = step(cur);
    }
    out
}

const COEFF_TOL: f64 = 1e-14;

impl PotentialSpec {
    /// Validates realness and symmetry of explicit terms.
    pub fn new(symmetry: SymmetryOrder, period: f64, terms: Vec<FourierTerm>) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        let mut map = BTreeMap::new();
        for t in &terms {
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coefficient at {:?}", t.k)));
            }
            if map.insert(t.k, (t.re, t.im)).is_some() {
                return Err(Error::InvalidInput(format!("duplicate wave vector {:?}", t.k)));
            }
        }
        let get = |k: [i64; 2]| map.get(&k).copied().unwrap_or((0.0, 0.0));
        for t in &terms {
            let (re, im) = get([-t.k[0], -t.k[1]]);
            let mism = (re - t.re).abs().max((im + t.im).abs());
            if mism > COEFF_TOL {
                return Err(Error::InvalidInput(format!(
                    "potential is not real: coefficient of {:?} lacks its conjugate partner",
                    t.k
                )));
            }
            let orb = orbit(symmetry, t.k);
            let (re, im) = get(orb[1 % orb.len()]);
            let mism = (re - t.re).abs().max((im - t.im).abs());
            if mism > COEFF_TOL {
                return Err(Error::NotSymmetric { mismatch: mism });
            }
        }
        let mut spec = PotentialSpec {
            symmetry,
            period,
            terms,
            compiled: Vec::new(),
        };
        spec.compile();
        Ok(spec)
    }

    /// Constant zero field.
    pub fn zero(symmetry: SymmetryOrder, period: f64) -> Result<Self> {
        Self::new(symmetry, period, Vec::new())
    }

    fn compile(&mut self) {
        self.terms.sort_by_key(|t| t.k);
        let g = reciprocal_basis(self.symmetry, self.period);
        self.compiled = self
            .terms
            .iter()
            .filter(|t| t.k > [-t.k[0], -t.k[1]] && (t.re != 0.0 || t.im != 0.0))
            .map(|t| (g[0] * t.k[0] as f64 + g[1] * t.k[1] as f64, 2.0 * t.re, 2.0 * t.im))
            .collect();
        // k = 0 carries the mean value
        if let Some(t) = self.terms.iter().find(|t| t.k == [0, 0]) {
            self.compiled.push((Vec2::ZERO, t.re, 0.0));
        }
    }

    pub fn symmetry(&self) -> SymmetryOrder {
        self.symmetry
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn terms(&self) -> &[FourierTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.compiled.is_empty()
    }

    pub fn wave_vector(&self, k: [i64; 2]) -> Vec2 {
        let g = reciprocal_basis(self.symmetry, self.period);
        g[0] * k[0] as f64 + g[1] * k[1] as f64
    }

    pub fn eval(&self, r: Vec2) -> f64 {
        self.compiled
            .iter()
            .map(|&(k, re, im)| {
                let (s, c) = k.dot(r).sin_cos();
                re * c - im * s
            })
            .sum()
    }

    pub fn eval_grad(&self, r: Vec2) -> Vec2 {
        self.compiled.iter().fold(Vec2::ZERO, |acc, &(k, re, im)| {
            let (s, c) = k.dot(r).sin_cos();
            acc + k * (-re * s - im * c)
        })
    }

    /// `Σ|c_k|`, a bound on `sup|V|`.
    pub fn amplitude_bound(&self) -> f64 {
        self.terms.iter().map(FourierTerm::modulus).sum()
    }

    /// `Σ|c_k||K|`, a bound on `sup|∇V|`.
    pub fn gradient_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.modulus() * self.wave_vector(t.k).norm())
            .sum()
    }

    /// Shortest wavelength `2π/max|K|`; the period for a constant field.
    pub fn shortest_wavelength(&self) -> f64 {
        let kmax = self
            .compiled
            .iter()
            .map(|c| c.0.norm())
            .fold(0.0, f64::max);
        if kmax > 0.0 {
            TAU / kmax
        } else {
            self.period
        }
    }

    /// Every coefficient multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| FourierTerm { re: t.re * s, im: t.im * s, ..*t })
            .collect();
        Self::new(self.symmetry, self.period, terms).expect("scaling keeps symmetry")
    }

    /// Same coefficients on a lattice of another period.
    pub fn with_period(&self, period: f64) -> Result<Self> {
        Self::new(self.symmetry, period, self.terms.clone())
    }
}

/// Projects arbitrary coefficients onto real, rotation-invariant ones by
/// orbit averaging.
pub fn symmetrize(symmetry: SymmetryOrder, raw: &[FourierTerm]) -> Vec<FourierTerm> {
    let mut acc: BTreeMap<[i64; 2], (f64, f64)> = BTreeMap::new();
    for t in raw {
        let orb = orbit(symmetry, t.k);
        let w = 1.0 / orb.len() as f64;
        for k in orb {
            let e = acc.entry(k).or_default();
            e.0 += t.re * w;
            e.1 += t.im * w;
        }
    }
    let mut out = Vec::with_capacity(acc.len());
    for (&k, &(re, im)) in &acc {
        let (pre, pim) = acc.get(&[-k[0], -k[1]]).copied().unwrap_or((0.0, 0.0));
        let (re, im) = (0.5 * (re + pre), 0.5 * (im - pim));
        if re != 0.0 || im != 0.0 {
            out.push(FourierTerm { k, re, im });
        }
    }
    // the partner of each surviving k survives too; add missing ones
    let have: std::collections::BTreeSet<_> = out.iter().map(|t| t.k).collect();
    let extra: Vec<_> = out
        .iter()
        .filter(|t| !have.contains(&[-t.k[0], -t.k[1]]))
        .map(|t| FourierTerm { k: [-t.k[0], -t.k[1]], re: t.re, im: -t.im })
        .collect();
    out.extend(extra);
    out.sort_by_key(|t| t.k);
    out
}

/// Symmetric potential from seeded random or explicit coefficients.
///
/// Random coefficients are drawn for every `k ≠ 0` with
/// `max(|k¹|, |k²|) ≤ cutoff`, with modulus below `(1+|k|)⁻³` where `|k|`
/// is measured in reciprocal-lattice units.
pub fn make_symmetric_potential(
    source: CoefficientSource,
    symmetry: SymmetryOrder,
    cutoff: u32,
    period: f64,
) -> Result<PotentialSpec> {
    if cutoff < 1 {
        return Err(Error::InvalidInput("cutoff must be at least 1".into()));
    }
    let raw = match source {
        CoefficientSource::Explicit(t) if t.is_empty() => {
            return Err(Error::InvalidInput("empty coefficient set".into()));
        }
        CoefficientSource::Explicit(t) => t,
        CoefficientSource::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = cutoff as i64;
            let unit = reciprocal_basis(symmetry, TAU);
            let mut t = Vec::new();
            for k1 in -c..=c {
                for k2 in -c..=c {
                    if (k1, k2) == (0, 0) {
                        continue;
                    }
                    let kn = (unit[0] * k1 as f64 + unit[1] * k2 as f64).norm();
                    let bound = (1.0 + kn).powi(-3);
                    let rho = bound * rng.gen::<f64>();
                    let phi = TAU * rng.gen::<f64>();
                    t.push(FourierTerm { k: [k1, k2], re: rho * phi.cos(), im: rho * phi.sin() });
                }
            }
            t
        }
    };
    PotentialSpec::new(symmetry, period, symmetrize(symmetry, &raw))
}

/// `cos(2πx/T) + cos(2πy/T)` (square) or the three-cosine sum
/// `Σ cos(K·r)` over the shortest reciprocal vectors (triangular).
pub fn cosine_family(symmetry: SymmetryOrder, period: f64) -> Result<PotentialSpec> {
    let ks: &[[i64; 2]] = if symmetry.is_square() {
        &[[1, 0], [-1, 0], [0, 1], [0, -1]]
    } else {
        &[[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]]
    };
    let terms = ks
        .iter()
        .map(|&k| FourierTerm { k, re: 0.5, im: 0.0 })
        .collect();
    PotentialSpec::new(symmetry, period, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotate;
    use SymmetryOrder::*;

    fn points(n: usize, seed: u64, scale: f64) -> Vec<Vec2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Vec2::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
            .collect()
    }

    #[test]
    fn reciprocal_duality() {
        for sym in [Four, Three] {
            let b = crate::lattice_angles::LatticeBasis::new(sym, 1.3).unwrap();
            let g = reciprocal_basis(sym, 1.3);
            let e = [b.e1, b.e2];
            for i in 0..2 {
                for j in 0..2 {
                    let d = if i == j { TAU } else { 0.0 };
                    assert!((g[i].dot(e[j]) - d).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn integer_rotation_matches_geometry() {
        for sym in [Four, Six] {
            let g = reciprocal_basis(sym, 1.0);
            for k in [[1, 0], [2, -3], [0, 1]] {
                let kr = rotate_k(sym, k);
                let v = g[0] * k[0] as f64 + g[1] * k[1] as f64;
                let w = g[0] * kr[0] as f64 + g[1] * kr[1] as f64;
                assert!((rotate(v, sym.lattice_angle()) - w).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_symmetric_input_is_unchanged() {
        let c = cosine_family(Four, TAU).unwrap();
        let s = make_symmetric_potential(CoefficientSource::Explicit(c.terms().to_vec()), Four, 1, TAU)
            .unwrap();
        assert_eq!(c, s);
        let r = Vec2::new(0.3, -1.1);
        assert!((c.eval(r) - (0.3f64.cos() + 1.1f64.cos())).abs() < 1e-15);
    }

    #[test]
    fn empty_coefficients_rejected() {
        assert!(make_symmetric_potential(CoefficientSource::Explicit(vec![]), Four, 2, 1.0).is_err());
    }

    #[test]
    fn seeded_potentials_are_symmetric() {
        for (sym, seed) in [(Four, 1), (Six, 2), (Three, 3)] {
            let v = make_symmetric_potential(CoefficientSource::Seed(seed), sym, 3, 1.0).unwrap();
            for r in points(1000, seed, 3.0) {
                let d = (v.eval(rotate(r, sym.symmetry_angle())) - v.eval(r)).abs();
                assert!(d < 1e-12, "{sym}: {d}");
            }
        }
    }

    #[test]
    fn order_three_is_not_six_fold() {
        let v = make_symmetric_potential(CoefficientSource::Seed(11), Three, 3, 1.0).unwrap();
        let worst = points(1000, 5, 2.0)
            .into_iter()
            .map(|r| (v.eval(rotate(r, std::f64::consts::FRAC_PI_3)) - v.eval(r)).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }

    #[test]
    fn decay_bound_holds_after_symmetrization() {
        let v = make_symmetric_potential(CoefficientSource::Seed(9), Four, 4, 1.0).unwrap();
        let unit = reciprocal_basis(Four, TAU);
        for t in v.terms() {
            let kn = (unit[0] * t.k[0] as f64 + unit[1] * t.k[1] as f64).norm();
            assert!(t.modulus() <= (1.0 + kn).powi(-3) + 1e-15);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let v = make_symmetric_potential(CoefficientSource::Seed(4), Three, 3, 1.7).unwrap();
        let h = 1e-5;
        for r in points(1000, 8, 4.0) {
            let g = v.eval_grad(r);
            let fx = (v.eval(r + Vec2::new(h, 0.0)) - v.eval(r - Vec2::new(h, 0.0))) / (2.0 * h);
            let fy = (v.eval(r + Vec2::new(0.0, h)) - v.eval(r - Vec2::new(0.0, h))) / (2.0 * h);
            assert!((g - Vec2::new(fx, fy)).norm() < 1e-6);
        }
    }

    #[test]
    fn asymmetric_terms_rejected() {
        let t = vec![
            FourierTerm { k: [1, 0], re: 0.5, im: 0.0 },
            FourierTerm { k: [-1, 0], re: 0.5, im: 0.0 },
        ];
        assert!(matches!(PotentialSpec::new(Four, 1.0, t), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn json_round_trip() {
        let v = make_symmetric_potential(CoefficientSource::Seed(21), Six, 2, 2.5).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let w: PotentialSpec = serde_json::from_str(&s).unwrap();
        for r in points(100, 1, 3.0) {
            assert!((v.eval(r) - w.eval(r)).abs() <= 1e-15);
        }
    }
}
