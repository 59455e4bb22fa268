use num_complex::Complex64;
use proptest::prelude::*;

use harmonic_core::config::ModelConfig;
use harmonic_core::functions::{line_grid, RadialFunction};
use harmonic_core::geometry::{sphere_average, ExplicitSpace, Point};
use harmonic_core::pde::{kg_kernel, radial_heat_solve, HeatOptions};
use harmonic_core::profile::GaussianBump;
use harmonic_core::spherical::{phi, phi_ode, RadialGrid};
use harmonic_core::transforms::abel;
use harmonic_core::two_radius::{find_l_zeros, LBox, Target};
use harmonic_core::{make_damek_ricci, make_euclidean, make_real_hyperbolic, DensityModel};

fn model() -> impl Strategy<Value = DensityModel> {
    prop_oneof![
        (0u32..5).prop_map(make_euclidean),
        (1u32..5).prop_map(|n| make_real_hyperbolic(n).unwrap()),
        (1u32..4, 1u32..4).prop_map(|(m, k)| make_damek_ricci(m, k).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn density_increases_and_curvature_decreases(m in model(), r1 in 0.01f64..50.0, gap in 0.0f64..20.0) {
        let r2 = (r1 + gap).min(50.0);
        prop_assert!(m.theta(r2) >= m.theta(r1));
        prop_assert!(m.log_theta(r2) >= m.log_theta(r1));
        let (c1, c2) = (m.mean_curvature(r1), m.mean_curvature(r2));
        prop_assert!(c1 >= c2 - 1e-12 * c2.abs().max(1.0));
        prop_assert!(c2 >= m.h() - 1e-12);
    }

    #[test]
    fn small_radius_normalization(m in model(), r in 1e-6f64..1e-3) {
        let ratio = m.theta(r) / r.powi(m.n() as i32);
        prop_assert!((ratio - 1.0).abs() <= 1e-5);
    }

    #[test]
    fn phi_is_even_in_lambda(m in model(), re in -3.0f64..3.0, im in -2.0f64..2.0) {
        let grid = RadialGrid::uniform(4.0, 32).unwrap();
        let lam = Complex64::new(re, im);
        let a = phi(&m, lam, &grid).unwrap();
        let b = phi(&m, -lam, &grid).unwrap();
        prop_assert_eq!(a.values, b.values);
    }

    #[test]
    fn trivial_eigenvalue_is_constant(m in model(), sign in prop::bool::ANY) {
        let grid = RadialGrid::uniform(6.0, 60).unwrap();
        let s = if sign { 0.5 } else { -0.5 };
        let lam = Complex64::new(0.0, s * m.h());
        for f in [phi(&m, lam, &grid).unwrap(), phi_ode(&m, lam, &grid).unwrap()] {
            for v in &f.values {
                prop_assert!((v - 1.0).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn kg_kernel_is_even(h in 0.0f64..4.0, t in 0.0f64..10.0, frac in 0.0f64..1.0) {
        let s = frac * t;
        let (a, b) = (kg_kernel(h, t, s).unwrap(), kg_kernel(h, t, -s).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn abel_on_the_line_is_the_profile(center in 0.0f64..1.0, width in 0.1f64..0.4) {
        let f = RadialFunction::from_bump(GaussianBump::new(center, width));
        let s = line_grid(f.support_radius() * 1.2, 96);
        let g = abel(&make_euclidean(0), &f, &s).unwrap();
        for &x in &s {
            prop_assert!((g.eval(x) - f.eval(x)).abs() < 1e-8);
            prop_assert_eq!(g.eval(x), g.eval(-x));
        }
    }

    #[test]
    fn harmonic_polynomials_have_the_mean_value_property(
        x in -2.0f64..2.0, y in -2.0f64..2.0, r in 0.01f64..3.0,
    ) {
        let f = |p: &Point| p[0] * p[0] - p[1] * p[1] + 3.0 * p[0] * p[1];
        let c = [x, y, 0.0];
        let avg = sphere_average(ExplicitSpace::Plane, &f, &c, r, 64).unwrap();
        prop_assert!((avg - f(&c)).abs() < 1e-10 * (1.0 + r * r));
    }

    #[test]
    fn config_text_round_trip(m in model()) {
        let text = match m.kind() {
            harmonic_core::DensityKind::Euclidean { n } => format!("model = euclidean\nn = {n}\n"),
            harmonic_core::DensityKind::Hyperbolic { n } => format!("model = hyperbolic\nn = {n}\n"),
            harmonic_core::DensityKind::DamekRicci { m, k } => format!("model = damek-ricci\nm = {m}\nk = {k}\n"),
            harmonic_core::DensityKind::Custom { .. } => unreachable!(),
        };
        let built = ModelConfig::parse(&text).unwrap().build().unwrap();
        prop_assert_eq!(built.name(), m.name());
        prop_assert_eq!(built.kind(), m.kind());
        prop_assert_eq!(built.h().to_bits(), m.h().to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(8) })]

    #[test]
    fn heat_stays_positive_and_conserves_mass(m in model(), t in 0.05f64..1.0) {
        let traj = radial_heat_solve(&m, t, 0.15, &HeatOptions::default()).unwrap();
        prop_assert!(traj.min_value >= 0.0);
        prop_assert!(traj.max_mass_drift < 1e-5);
        prop_assert!(traj.last().k.iter().all(|&k| k >= 0.0));
    }

    #[test]
    fn zeros_come_in_conjugate_pairs(m in model(), r in 0.5f64..3.0) {
        let z = find_l_zeros(&m, r, Target::Sphere, LBox::new(-60.0, 5.0, -5.0, 5.0), 64).unwrap();
        for a in &z.zeros {
            let d = z.zeros.iter().map(|b| (b.l - a.l.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-9, "{} has no conjugate partner", a.l);
            prop_assert!(a.l.re < 0.0);
        }
    }
}
