use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fourier::PotentialSpec;
use crate::error::{Error, Result};
use crate::geometry::{rotate, Vec2};
use crate::lattice_angles::{LatticeBasis, ShiftVector};

/// Highest total degree accepted for the pointwise composition.
pub const MAX_DEGREE: u32 = 4;

/// `c · u^i · v^j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub c: f64,
}

/// Bivariate polynomial `Q(u, v)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self> {
        for m in &monomials {
            if m.i + m.j > MAX_DEGREE {
                return Err(Error::InvalidInput(format!(
                    "monomial degree {} exceeds {MAX_DEGREE}",
                    m.i + m.j
                )));
            }
            if !m.c.is_finite() {
                return Err(Error::InvalidInput("non-finite polynomial coefficient".into()));
            }
        }
        Ok(Polynomial { monomials })
    }

    /// `Q(u, v) = u + v`.
    pub fn sum() -> Self {
        Polynomial {
            monomials: vec![Monomial { i: 1, j: 0, c: 1.0 }, Monomial { i: 0, j: 1, c: 1.0 }],
        }
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.monomials
            .iter()
            .map(|m| m.c * u.powi(m.i as i32) * v.powi(m.j as i32))
            .sum()
    }

    /// `(∂Q/∂u, ∂Q/∂v)`.
    pub fn grad(&self, u: f64, v: f64) -> (f64, f64) {
        self.monomials.iter().fold((0.0, 0.0), |(gu, gv), m| {
            let du = if m.i > 0 {
                m.c * m.i as f64 * u.powi(m.i as i32 - 1) * v.powi(m.j as i32)
            } else {
                0.0
            };
            let dv = if m.j > 0 {
                m.c * m.j as f64 * u.powi(m.i as i32) * v.powi(m.j as i32 - 1)
            } else {
                0.0
            };
            (gu + du, gv + dv)
        })
    }

    /// Upper bounds of `|∂Q/∂u|` and `|∂Q/∂v|` on `[−A, A] × [−B, B]`.
    pub fn partial_bounds(&self, a: f64, b: f64) -> (f64, f64) {
        self.monomials.iter().fold((0.0, 0.0), |(su, sv), m| {
            let c = m.c.abs();
            let du = if m.i > 0 {
                c * m.i as f64 * a.powi(m.i as i32 - 1) * b.powi(m.j as i32)
            } else {
                0.0
            };
            let dv = if m.j > 0 {
                c * m.j as f64 * a.powi(m.i as i32) * b.powi(m.j as i32 - 1)
            } else {
                0.0
            };
            (su + du, sv + dv)
        })
    }
}

/// How the two layers combine.
#[derive(Clone, Debug, PartialEq)]
pub enum Composition {
    Linear,
    Pointwise(Polynomial),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Linear,
    Pointwise,
}

#[derive(Serialize, Deserialize)]
struct SuperpositionDoc {
    v1: PotentialSpec,
    u: PotentialSpec,
    kind: Kind,
    alpha: f64,
    a: Vec2,
    lambda: f64,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    q: Option<Polynomial>,
}

/// `V(r) = V₁(r) ⊕ U(λ·π_{−α}(r − a))`, where `⊕` is `+` or `Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SuperpositionDoc", into = "SuperpositionDoc")]
pub struct SuperpositionSpec {
    pub v1: PotentialSpec,
    pub u: PotentialSpec,
    pub composition: Composition,
    pub alpha: f64,
    pub a: ShiftVector,
    pub lambda: f64,
}

impl TryFrom<SuperpositionDoc> for SuperpositionSpec {
    type Error = Error;
    fn try_from(d: SuperpositionDoc) -> Result<Self> {
        let composition = match (d.kind, d.q) {
            (Kind::Linear, None) => Composition::Linear,
            (Kind::Pointwise, Some(q)) => Composition::Pointwise(Polynomial::new(q.monomials)?),
            (Kind::Linear, Some(_)) => {
                return Err(Error::InvalidInput("linear superposition takes no Q".into()))
            }
            (Kind::Pointwise, None) => {
                return Err(Error::InvalidInput("pointwise superposition needs Q".into()))
            }
        };
        SuperpositionSpec::new(d.v1, d.u, composition, d.alpha, d.a, d.lambda)
    }
}

impl From<SuperpositionSpec> for SuperpositionDoc {
    fn from(s: SuperpositionSpec) -> Self {
        let (kind, q) = match s.composition {
            Composition::Linear => (Kind::Linear, None),
            Composition::Pointwise(q) => (Kind::Pointwise, Some(q)),
        };
        SuperpositionDoc {
            v1: s.v1,
            u: s.u,
            kind,
            alpha: s.alpha,
            a: s.a,
            lambda: s.lambda,
            q,
        }
    }
}

impl SuperpositionSpec {
    pub fn new(
        v1: PotentialSpec,
        u: PotentialSpec,
        composition: Composition,
        alpha: f64,
        a: ShiftVector,
        lambda: f64,
    ) -> Result<Self> {
        if v1.symmetry().is_square() != u.symmetry().is_square() {
            return Err(Error::InvalidInput("layers have different lattice types".into()));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
        }
        if !(alpha.is_finite() && a.is_finite()) {
            return Err(Error::InvalidInput("alpha and a must be finite".into()));
        }
        Ok(SuperpositionSpec { v1, u, composition, alpha, a, lambda })
    }

    /// Linear superposition with `λ = 1`.
    pub fn linear(v1: PotentialSpec, u: PotentialSpec, alpha: f64, a: ShiftVector) -> Result<Self> {
        Self::new(v1, u, Composition::Linear, alpha, a, 1.0)
    }

    pub fn with_shift(&self, a: ShiftVector) -> Self {
        SuperpositionSpec { a, ..self.clone() }
    }

    /// Second-layer argument `λ·π_{−α}(r − a)`.
    pub fn embed(&self, r: Vec2) -> Vec2 {
        rotate(r - self.a, -self.alpha) * self.lambda
    }

    pub fn eval(&self, r: Vec2) -> f64 {
        let p = self.v1.eval(r);
        let q = self.u.eval(self.embed(r));
        match &self.composition {
            Composition::Linear => p + q,
            Composition::Pointwise(poly) => poly.eval(p, q),
        }
    }

    pub fn eval_grad(&self, r: Vec2) -> Vec2 {
        let z = self.embed(r);
        let g1 = self.v1.eval_grad(r);
        let g2 = rotate(self.u.eval_grad(z), self.alpha) * self.lambda;
        match &self.composition {
            Composition::Linear => g1 + g2,
            Composition::Pointwise(poly) => {
                let (qu, qv) = poly.grad(self.v1.eval(r), self.u.eval(z));
                g1 * qu + g2 * qv
            }
        }
    }

    /// Shortest wavelength over both layers, as seen in the plane.
    pub fn shortest_wavelength(&self) -> f64 {
        self.v1
            .shortest_wavelength()
            .min(self.u.shortest_wavelength() / self.lambda)
    }

    /// The four-periodic function whose restriction is this superposition.
    pub fn lift(&self) -> LiftedFunction<'_> {
        LiftedFunction { spec: self }
    }

    /// Bound on `sup|V|` via the coefficient moduli.
    pub fn amplitude_bound(&self) -> f64 {
        let (a, b) = (self.v1.amplitude_bound(), self.u.amplitude_bound());
        match &self.composition {
            Composition::Linear => a + b,
            Composition::Pointwise(q) => q
                .monomials
                .iter()
                .map(|m| m.c.abs() * a.powi(m.i as i32) * b.powi(m.j as i32))
                .sum(),
        }
    }
}

/// `F(z) = V₁(z¹, z²) ⊕ U(z³, z⁴)` on `R⁴`.
#[derive(Clone, Copy, Debug)]
pub struct LiftedFunction<'a> {
    pub spec: &'a SuperpositionSpec,
}

impl LiftedFunction<'_> {
    /// `r ↦ (x, y, A(x, y))`.
    pub fn embedding(&self, r: Vec2) -> [f64; 4] {
        let z = self.spec.embed(r);
        [r.x, r.y, z.x, z.y]
    }

    pub fn eval(&self, z: [f64; 4]) -> f64 {
        let p = self.spec.v1.eval(Vec2::new(z[0], z[1]));
        let q = self.spec.u.eval(Vec2::new(z[2], z[3]));
        match &self.spec.composition {
            Composition::Linear => p + q,
            Composition::Pointwise(poly) => poly.eval(p, q),
        }
    }

    pub fn grad(&self, z: [f64; 4]) -> [f64; 4] {
        let (r, w) = (Vec2::new(z[0], z[1]), Vec2::new(z[2], z[3]));
        let (g1, g2) = (self.spec.v1.eval_grad(r), self.spec.u.eval_grad(w));
        let (qu, qv) = match &self.spec.composition {
            Composition::Linear => (1.0, 1.0),
            Composition::Pointwise(poly) => poly.grad(self.spec.v1.eval(r), self.spec.u.eval(w)),
        };
        [g1.x * qu, g1.y * qu, g2.x * qv, g2.y * qv]
    }
}

/// Certified bounds on the derivatives of the lift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "C3")]
    pub c3: f64,
}

/// `C1` bounds both `|∇_z F|` and the planar Lipschitz constant of `V`
/// (the second layer enters scaled by `max(λ, 1)`). `C2` and `C3` bound
/// `∂_α V` and `∂_λ V` on the disk `|r − a| ≤ window_radius`.
pub fn bound_constants(spec: &SuperpositionSpec, window_radius: f64) -> BoundConstants {
    let (s1, s2) = (spec.v1.gradient_bound(), spec.u.gradient_bound());
    let (w1, w2) = match &spec.composition {
        Composition::Linear => (1.0, 1.0),
        Composition::Pointwise(q) => {
            q.partial_bounds(spec.v1.amplitude_bound(), spec.u.amplitude_bound())
        }
    };
    let s2 = w2 * s2;
    let radius = window_radius.max(0.0);
    BoundConstants {
        c1: w1 * s1 + spec.lambda.max(1.0) * s2,
        c2: spec.lambda * s2 * radius,
        c3: s2 * radius,
    }
}

fn probe_points(n: usize, seed: u64, scale: f64) -> impl Iterator<Item = Vec2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(move |_| Vec2::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
}

/// Largest `|V(r + v) − V(r)|` over `samples` seeded probe points.
pub fn period_mismatch(spec: &SuperpositionSpec, v: Vec2, samples: usize, seed: u64) -> f64 {
    let scale = 4.0 * spec.v1.period().max(spec.u.period());
    probe_points(samples, seed, scale)
        .map(|r| (spec.eval(r + v) - spec.eval(r)).abs())
        .fold(0.0, f64::max)
}

/// Checks `V(r; a + s) = V(r − t; a)` at 10³ seeded points to `1e−10`.
pub fn translation_identity(spec: &SuperpositionSpec, s: Vec2, t: Vec2) -> bool {
    let shifted = spec.with_shift(spec.a + s);
    let scale = 4.0 * spec.v1.period().max(spec.u.period());
    probe_points(1000, 0x5eed, scale).all(|r| (shifted.eval(r) - spec.eval(r - t)).abs() <= 1e-10)
}

/// Both shift identities for basis vector `which` (0 or 1): shifting `a` by
/// `eᵢ` translates the plane by `eᵢ`, and shifting `a` by `π_α(e′ᵢ)/λ`
/// changes nothing.
pub fn shift_identity_check(spec: &SuperpositionSpec, which: usize) -> Result<bool> {
    if which > 1 {
        return Err(Error::InvalidInput(format!("basis index must be 0 or 1, got {which}")));
    }
    let pick = |b: LatticeBasis| if which == 0 { b.e1 } else { b.e2 };
    let e = pick(LatticeBasis::new(spec.v1.symmetry(), spec.v1.period())?);
    let e2 = pick(LatticeBasis::new(spec.u.symmetry(), spec.u.period())?);
    let s2 = rotate(e2, spec.alpha) * (1.0 / spec.lambda);
    Ok(translation_identity(spec, e, e) && translation_identity(spec, s2, Vec2::ZERO))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_angles::SymmetryOrder::*;
    use crate::potential::fourier::{cosine_family, make_symmetric_potential, CoefficientSource};
    use std::f64::consts::{PI, TAU};

    fn cos2(alpha: f64, a: Vec2) -> SuperpositionSpec {
        let c = cosine_family(Four, TAU).unwrap();
        SuperpositionSpec::linear(c.clone(), c, alpha, a).unwrap()
    }

    fn seeded(seed: u64) -> SuperpositionSpec {
        let v = make_symmetric_potential(CoefficientSource::Seed(seed), Four, 2, 1.0).unwrap();
        let u = make_symmetric_potential(CoefficientSource::Seed(seed + 1), Four, 2, 1.0).unwrap();
        SuperpositionSpec::new(v, u, Composition::Linear, 0.41, Vec2::new(0.13, -0.27), 1.07).unwrap()
    }

    #[test]
    fn cosine_values() {
        assert!((cos2(0.0, Vec2::ZERO).eval(Vec2::ZERO) - 4.0).abs() < 1e-15);
        assert!(cos2(0.0, Vec2::new(PI, PI)).eval(Vec2::ZERO).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let q = Polynomial::new(vec![
            Monomial { i: 1, j: 1, c: 0.5 },
            Monomial { i: 2, j: 0, c: -0.3 },
            Monomial { i: 0, j: 3, c: 0.2 },
        ])
        .unwrap();
        let mut s = seeded(3);
        for comp in [Composition::Linear, Composition::Pointwise(q)] {
            s.composition = comp;
            let h = 1e-5;
            for r in probe_points(1000, 2, 3.0) {
                let g = s.eval_grad(r);
                let fx = (s.eval(r + Vec2::new(h, 0.0)) - s.eval(r - Vec2::new(h, 0.0))) / (2.0 * h);
                let fy = (s.eval(r + Vec2::new(0.0, h)) - s.eval(r - Vec2::new(0.0, h))) / (2.0 * h);
                assert!((g - Vec2::new(fx, fy)).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn lift_restricts_to_superposition() {
        let s = seeded(5);
        let f = s.lift();
        for r in probe_points(1000, 4, 5.0) {
            assert!((f.eval(f.embedding(r)) - s.eval(r)).abs() <= 1e-12);
        }
        let s = cos2(0.7, Vec2::new(0.2, 0.9));
        let f = s.lift();
        for r in probe_points(100, 6, 5.0) {
            let z = f.embedding(r);
            for i in 0..4 {
                let mut w = z;
                w[i] += TAU;
                assert!((f.eval(w) - f.eval(z)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pointwise_product() {
        // single-cosine layers are not 4-fold symmetric; use cos z¹ + cos z²
        let v = cosine_family(Four, TAU).unwrap();
        let q = Polynomial::new(vec![Monomial { i: 1, j: 1, c: 1.0 }]).unwrap();
        let s = SuperpositionSpec::new(v.clone(), v, Composition::Pointwise(q), 0.0, Vec2::ZERO, 1.0)
            .unwrap();
        assert!((s.lift().eval([0.0; 4]) - 4.0).abs() < 1e-15);
        assert!((s.lift().eval([0.0, 0.0, PI, 0.0])).abs() < 1e-15);
    }

    #[test]
    fn cosine_bound_constant() {
        let b = bound_constants(&cos2(0.3, Vec2::ZERO), 0.0);
        assert!((b.c1 - 4.0).abs() < 1e-12);
        assert_eq!((b.c2, b.c3), (0.0, 0.0));
        let z = PotentialSpec::zero(Four, 1.0).unwrap();
        let s = SuperpositionSpec::linear(z.clone(), z, 0.3, Vec2::ZERO).unwrap();
        let b = bound_constants(&s, 10.0);
        assert_eq!((b.c1, b.c2, b.c3), (0.0, 0.0, 0.0));
        let s = seeded(1);
        let two = SuperpositionSpec { v1: s.v1.scaled(2.0), u: s.u.scaled(2.0), ..s.clone() };
        let (b1, b2) = (bound_constants(&s, 0.0).c1, bound_constants(&two, 0.0).c1);
        assert!((b2 - 2.0 * b1).abs() < 1e-12 * b2);
    }

    #[test]
    fn bounds_dominate_lift_gradient() {
        let s = seeded(7);
        let c1 = bound_constants(&s, 0.0).c1;
        let f = s.lift();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let z: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
            let g = f.grad(z);
            assert!(g.iter().map(|x| x * x).sum::<f64>().sqrt() <= c1);
        }
    }

    #[test]
    fn shift_identities() {
        for s in [seeded(2), cos2(0.5, Vec2::new(0.3, 1.9))] {
            assert!(shift_identity_check(&s, 0).unwrap());
            assert!(shift_identity_check(&s, 1).unwrap());
        }
        let s = cos2(0.5, Vec2::new(0.3, 1.9));
        let half = Vec2::new(0.5 * TAU, 0.0);
        assert!(!translation_identity(&s, half, half));
        let z = PotentialSpec::zero(Four, 1.0).unwrap();
        let s = SuperpositionSpec::linear(z.clone(), z, 0.3, Vec2::ZERO).unwrap();
        assert!(shift_identity_check(&s, 0).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let mut s = seeded(9);
        s.composition = Composition::Pointwise(Polynomial::sum());
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"kind\":\"pointwise\"") && j.contains("\"Q\""));
        let t: SuperpositionSpec = serde_json::from_str(&j).unwrap();
        for r in probe_points(100, 3, 2.0) {
            assert!((s.eval(r) - t.eval(r)).abs() <= 1e-15);
        }
        let bad = j.replace("\"kind\":\"pointwise\"", "\"kind\":\"linear\"");
        assert!(serde_json::from_str::<SuperpositionSpec>(&bad).is_err());
    }
}
