use std::f64::consts::{FRAC_PI_2, TAU};

use novikov_core::lattice_angles::{
    approximate_angle, approximation_bound, dirichlet_pair, equivalence_lattice, minimal_periods, reduce_shift,
    superposition_periods, LatticeBasis, MagicAngle, SymmetryOrder,
};
use novikov_core::levelsets::{
    classes_from_contours, extract_contours, label_components, sample, Sign, Window,
};
use novikov_core::potential::{
    bound_constants, make_symmetric_potential, period_mismatch, CoefficientSource, PotentialSpec,
    SuperpositionSpec,
};
use novikov_core::{Error, Vec2};
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn coprime_pair(max: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max, 1..max).prop_filter("coprime m > n", |&(m, n)| m > n && gcd(m, n) == 1)
}

fn symmetry() -> impl Strategy<Value = SymmetryOrder> {
    prop_oneof![Just(SymmetryOrder::Four), Just(SymmetryOrder::Three), Just(SymmetryOrder::Six)]
}

fn seeded(seed: u64, sym: SymmetryOrder, period: f64) -> PotentialSpec {
    make_symmetric_potential(CoefficientSource::Seed(seed), sym, 2, period).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pythagorean_identity((m, n) in coprime_pair(400)) {
        let a = MagicAngle::positive(SymmetryOrder::Four, m, n).unwrap();
        let t = a.tan_value;
        let h2 = (t.num as i128).pow(2) + (t.den as i128).pow(2);
        let h = (h2 as f64).sqrt().round() as i128;
        prop_assert_eq!(h * h, h2);
        let legs = (m * m - n * n, 2 * m * n);
        let g = gcd(legs.0, legs.1);
        prop_assert_eq!((t.num, t.den), (legs.0 / g, legs.1 / g));
    }

    #[test]
    fn exact_rotation_maps_source_to_target(sym in symmetry(), (m, n) in coprime_pair(60)) {
        let a = MagicAngle::positive(sym, m, n).unwrap();
        prop_assert_eq!(a.exact_rotation().apply(a.source()), Some(a.target()));
        let (c, s) = a.exact_rotation().cos_sin();
        prop_assert!((c - a.angle_radians.cos()).abs() < 1e-12);
        prop_assert!((s - a.angle_radians.sin()).abs() < 1e-12);
    }

    #[test]
    fn reduce_shift_is_idempotent(
        sym in symmetry(),
        (m, n) in coprime_pair(12),
        x in -40.0..40.0f64,
        y in -40.0..40.0f64,
        to_sym in any::<bool>(),
    ) {
        let a = MagicAngle::positive(sym, m, n).unwrap();
        let lat = equivalence_lattice(&a, TAU, to_sym).unwrap();
        let r = reduce_shift(Vec2::new(x, y), &a, TAU, to_sym).unwrap();
        prop_assert!(r.norm() <= lat.covering_radius * (1.0 + 1e-9));
        prop_assert!(lat.contains(Vec2::new(x, y) - r, 1e-9));
        let rr = reduce_shift(r, &a, TAU, to_sym).unwrap();
        prop_assert!((rr - r).norm() <= 1e-9);
    }

    #[test]
    fn approximants_meet_their_bound(alpha in 0.05..(FRAC_PI_2 - 0.05)) {
        match approximate_angle(alpha, SymmetryOrder::Four, 4) {
            Ok(list) => {
                for a in list {
                    prop_assert!((a.angle_radians - alpha).abs() < approximation_bound(SymmetryOrder::Four, a.n));
                }
            }
            Err(Error::AngleIsMagic { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn lipschitz_bound_holds(
        seed in 0u64..1000,
        alpha in 0.0..FRAC_PI_2,
        x in -20.0..20.0f64,
        y in -20.0..20.0f64,
        dx in -0.5..0.5f64,
        dy in -0.5..0.5f64,
    ) {
        let v = seeded(seed, SymmetryOrder::Four, TAU);
        let u = seeded(seed + 1, SymmetryOrder::Four, TAU);
        let s = SuperpositionSpec::linear(v, u, alpha, Vec2::new(0.3, -0.1)).unwrap();
        let c1 = bound_constants(&s, 0.0).c1;
        let (p, q) = (Vec2::new(x, y), Vec2::new(x + dx, y + dy));
        prop_assert!((s.eval(p) - s.eval(q)).abs() <= c1 * (p - q).norm() * (1.0 + 1e-12));
        prop_assert!(s.eval_grad(p).norm() <= c1 * (1.0 + 1e-12));
    }

    #[test]
    fn magic_superpositions_are_periodic(sym in symmetry(), (m, n) in coprime_pair(8), seed in 0u64..100) {
        let a = MagicAngle::positive(sym, m, n).unwrap();
        let s = SuperpositionSpec::linear(seeded(seed, sym, 1.5), seeded(seed + 7, sym, 1.5), a.angle_radians, Vec2::new(0.2, 0.1))
            .unwrap();
        for p in [superposition_periods(&a, 1.5).unwrap(), minimal_periods(&a, 1.5).unwrap()] {
            prop_assert!(period_mismatch(&s, p.b1, 200, seed) <= 1e-9);
            prop_assert!(period_mismatch(&s, p.b2, 200, seed) <= 1e-9);
        }
    }

    #[test]
    fn sign_duality(seed in 0u64..500, sym in symmetry(), frac in 0.1..0.9f64) {
        let v = seeded(seed, sym, TAU);
        let b = LatticeBasis::new(sym, TAU).unwrap();
        let w = Window { origin: Vec2::ZERO, axes: [b.e1, b.e2] };
        let g = sample(&v, w, 24, 24, true).unwrap();
        let gm = sample(&v.scaled(-1.0), w, 24, 24, true).unwrap();
        let (lo, hi) = g.min_max();
        let c = lo + frac * (hi - lo);
        let below = label_components(&g, c, Sign::Below);
        let above_neg = label_components(&gm, -c, Sign::Above);
        let mut x: Vec<_> = below.components.iter().map(|s| (s.size, s.wrap)).collect();
        let mut y: Vec<_> = above_neg.components.iter().map(|s| (s.size, s.wrap)).collect();
        x.sort_by_key(|e| e.0);
        y.sort_by_key(|e| e.0);
        prop_assert_eq!(x, y);
    }
}

/// Brute-force `min |m·e′ − n·e|` over `|mᵢ| ≤ 2q`, `|nᵢ| ≤ bound`, `n ≠ 0`.
fn dirichlet_oracle(b1: &LatticeBasis, b2: &LatticeBasis, q: i64) -> f64 {
    let mut best = f64::INFINITY;
    let reach = 2 * q + 2;
    for m1 in -2 * q..=2 * q {
        for m2 in -2 * q..=2 * q {
            let p = b2.point([m1, m2]);
            let [u, w] = b1.coordinates(p);
            for n1 in (u.floor() as i64 - 1)..=(u.floor() as i64 + 2) {
                for n2 in (w.floor() as i64 - 1)..=(w.floor() as i64 + 2) {
                    if (n1, n2) == (0, 0) || n1.abs() > 4 * reach || n2.abs() > 4 * reach {
                        continue;
                    }
                    best = best.min((p - b1.point([n1, n2])).norm());
                }
            }
        }
    }
    best
}

#[test]
fn dirichlet_pair_matches_brute_force() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    for (sym, ratio, alpha) in [
        (SymmetryOrder::Four, 1.0 / phi, 0.3),
        (SymmetryOrder::Four, 1.0 / 2f64.sqrt(), 1.1),
        (SymmetryOrder::Three, 1.0 / phi, 0.2),
    ] {
        let b1 = LatticeBasis::new(sym, 1.0).unwrap();
        let b2 = LatticeBasis::new(sym, ratio).unwrap().rotated(alpha);
        for q in (1..=50).step_by(7) {
            let p = dirichlet_pair(&b1, &b2, q as u32).unwrap();
            let oracle = dirichlet_oracle(&b1, &b2, q);
            assert!((p.residual - oracle).abs() <= 1e-12, "{sym} q={q}: {} vs {oracle}", p.residual);
        }
    }
}

#[test]
fn contour_and_union_find_classes_agree() {
    let mut checked = 0;
    for seed in 0..50u64 {
        let sym = [SymmetryOrder::Four, SymmetryOrder::Three, SymmetryOrder::Six][seed as usize % 3];
        let v = seeded(seed, sym, TAU);
        let b = LatticeBasis::new(sym, TAU).unwrap();
        let g = sample(&v, Window { origin: Vec2::ZERO, axes: [b.e1, b.e2] }, 40, 40, true).unwrap();
        let (lo, hi) = g.min_max();
        for frac in [0.2, 0.45, 0.5, 0.55, 0.8] {
            let c = lo + frac * (hi - lo);
            let below = label_components(&g, c, Sign::Below);
            let above = label_components(&g, c, Sign::Above);
            let lines = extract_contours(&g, c);
            let (cb, ca) = classes_from_contours(&lines, &below, &above);
            let ub: Vec<_> = below.components.iter().map(|s| s.wrap).collect();
            let ua: Vec<_> = above.components.iter().map(|s| s.wrap).collect();
            assert_eq!(cb, ub, "seed {seed} level {c}");
            assert_eq!(ca, ua, "seed {seed} level {c}");
            checked += ub.len() + ua.len();
        }
    }
    assert!(checked > 250);
}
