use harmonic_core::config::ModelConfig;
use harmonic_core::{
    make_custom, make_damek_ricci, make_euclidean, make_real_hyperbolic, mean_curvature_limit, unit_sphere_volume,
    DensityModel, Error,
};

fn builtins() -> Vec<DensityModel> {
    let mut v: Vec<DensityModel> = (0..4).map(make_euclidean).collect();
    v.extend((1..4).map(|n| make_real_hyperbolic(n).unwrap()));
    for (m, k) in [(1, 1), (2, 1), (1, 2), (3, 1), (2, 3)] {
        v.push(make_damek_ricci(m, k).unwrap());
    }
    v
}

#[test]
fn euclidean_power_rule() {
    let line = make_euclidean(0);
    assert_eq!(line.theta(5.0), 1.0);
    assert_eq!(line.h(), 0.0);
    assert_eq!(line.dim(), 1);
    let r3 = make_euclidean(2);
    assert_eq!(r3.theta(1.0), 1.0);
    assert!((r3.mean_curvature(1.0) - 2.0).abs() < 1e-15);
    assert!(r3.mean_curvature(1e6) < 1e-5);
    assert!((mean_curvature_limit(&r3, 100.0).unwrap() - 0.02).abs() < 1e-15);
}

#[test]
fn hyperbolic_closed_forms() {
    let h3 = make_real_hyperbolic(2).unwrap();
    assert_eq!(h3.h(), 2.0);
    assert_eq!(h3.dim(), 3);
    for r in [0.1f64, 1.0, 5.0, 20.0] {
        let coth = r.cosh() / r.sinh();
        assert!((h3.mean_curvature(r) - 2.0 * coth).abs() < 1e-12 * coth);
        assert!((h3.theta(r) - r.sinh().powi(2)).abs() < 1e-13 * r.sinh().powi(2));
    }
    assert!((mean_curvature_limit(&h3, 20.0).unwrap() - 2.0).abs() < 1e-10);
    let h2 = make_real_hyperbolic(1).unwrap();
    assert!((h2.theta(1e-4) / 1e-4 - 1.0).abs() < 1e-8);
    let mut prev = 0.0;
    for i in 1..=1000 {
        let t = h3.theta(0.01 * i as f64);
        assert!(t > prev);
        prev = t;
    }
}

#[test]
fn damek_ricci_closed_forms() {
    let m = make_damek_ricci(2, 1).unwrap();
    assert_eq!(m.dim(), 4);
    assert!((m.h() - 2.0).abs() < 1e-12);
    assert!((mean_curvature_limit(&m, 50.0).unwrap() - 2.0).abs() < 1e-12);
    for r in [0.3f64, 2.0, 7.0] {
        let (s, c) = ((0.5 * r).sinh(), (0.5 * r).cosh());
        let theta = 8.0 * s.powi(3) * c;
        assert!((m.theta(r) - theta).abs() < 1e-13 * theta);
        let ratio = 1.5 * c / s + 0.5 * s / c;
        assert!((m.mean_curvature(r) - ratio).abs() < 1e-12 * ratio);
    }
    assert!((m.theta(1e-4) / 1e-12 - 1.0).abs() < 1e-7);
    for (mm, k) in [(1, 1), (1, 2), (3, 1), (2, 3)] {
        let d = make_damek_ricci(mm, k).unwrap();
        assert!((d.h() - (0.5 * mm as f64 + k as f64)).abs() < 1e-12, "{}", d.name());
    }
}

#[test]
fn log_space_matches_direct_evaluation() {
    for model in builtins() {
        for r in [29.0, 31.0, 45.0] {
            let direct = model.theta(r).ln();
            assert!((model.log_theta(r) - direct).abs() < 1e-12 * direct.abs().max(1.0), "{}", model.name());
        }
        assert!(model.log_theta(500.0).is_finite());
    }
}

#[test]
fn builtin_invariants() {
    for model in builtins() {
        let n = model.n() as i32;
        for r in [1e-3, 1e-4, 1e-5] {
            let ratio = model.theta(r) / r.powi(n);
            assert!((ratio - 1.0).abs() <= 1e-5, "{} at {r}", model.name());
        }
        let mut prev_theta = 0.0;
        let mut prev_curv = f64::INFINITY;
        for i in 1..=2000 {
            let r = 0.025 * i as f64;
            let t = model.theta(r);
            let c = model.mean_curvature(r);
            assert!(t > 0.0 && t >= prev_theta, "{} θ at {r}", model.name());
            assert!(c <= prev_curv + 1e-12 && c >= model.h() - 1e-12, "{} θ'/θ at {r}", model.name());
            prev_theta = t;
            prev_curv = c;
        }
    }
}

#[test]
fn theta_prime_is_the_derivative() {
    for model in builtins() {
        for r in [0.5, 2.0, 6.0] {
            let d = 1e-5;
            let fd = (model.theta(r + d) - model.theta(r - d)) / (2.0 * d);
            assert!((model.theta_prime(r) - fd).abs() < 1e-6 * fd.abs().max(1.0), "{}", model.name());
        }
    }
}

#[test]
fn sphere_constants() {
    use std::f64::consts::PI;
    assert_eq!(unit_sphere_volume(0), 2.0);
    assert!((unit_sphere_volume(1) - 2.0 * PI).abs() < 1e-15);
    assert!((unit_sphere_volume(2) - 4.0 * PI).abs() < 1e-14);
    assert!((unit_sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-14);
    assert!((unit_sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
}

#[test]
fn custom_models_are_validated() {
    let m = make_custom(2, "sinh(r)^2").unwrap();
    assert!((m.h() - 2.0).abs() < 1e-6);
    assert!((m.theta(1.3) - 1.3f64.sinh().powi(2)).abs() < 1e-12);
    // wrong normalization
    assert!(matches!(make_custom(2, "2*r^2"), Err(Error::InvalidDensity { .. })));
    // θ'/θ increasing
    assert!(matches!(make_custom(1, "r*exp(r^2)"), Err(Error::InvalidDensity { .. })));
    // θ decreasing
    assert!(matches!(make_custom(0, "exp(-r)"), Err(Error::InvalidDensity { .. })));
    assert!(matches!(make_custom(1, "sinh(q)"), Err(Error::Config(_))));
    assert!(matches!(make_custom(1, "sinh(r"), Err(Error::Config(_))));
}

#[test]
fn config_files() {
    let c = ModelConfig::parse("# a comment\nmodel = damek-ricci\nm = 2\nk = 1\n").unwrap();
    assert_eq!(c.build().unwrap().name(), "damek-ricci(2,1)");
    let c = ModelConfig::parse("model = custom\nn = 1\ntheta = sinh(r)\nzero_tol = 1e-10\n").unwrap();
    assert_eq!(c.zero_tol, 1e-10);
    assert!((c.build().unwrap().h() - 1.0).abs() < 1e-6);
    for bad in [
        "model = euclidean\n",
        "model = sphere\nn = 2\n",
        "model = euclidean\nn = -1\n",
        "model = euclidean\nn = 1\nn = 2\n",
        "model = euclidean\ncolour = red\n",
        "model euclidean\n",
        "model = custom\nn = 1\n",
        "model = euclidean\nn = 1\nzero_tol = 0\n",
    ] {
        let r = ModelConfig::parse(bad).and_then(|c| c.build());
        assert!(matches!(r, Err(Error::Config(_))), "{bad:?} gave {r:?}");
    }
    assert!(matches!(
        ModelConfig::parse("model = hyperbolic\nn = 0\n").unwrap().build(),
        Err(Error::InvalidParameter(_))
    ));
}
