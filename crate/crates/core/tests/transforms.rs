use std::f64::consts::PI;

use harmonic_core::functions::{line_grid, EvenLineFunction, RadialFunction};
use harmonic_core::profile::{GaussianBump, Profile, SharedProfile};
use harmonic_core::quadrature::PanelGrid;
use harmonic_core::transforms::*;
use harmonic_core::{make_damek_ricci, make_euclidean, make_real_hyperbolic, DensityModel};

fn models() -> Vec<DensityModel> {
    vec![
        make_euclidean(0),
        make_euclidean(2),
        make_real_hyperbolic(2).unwrap(),
        make_damek_ricci(2, 1).unwrap(),
        make_damek_ricci(1, 1).unwrap(),
    ]
}

fn sup(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    (0..=n)
        .map(|i| f(a + (b - a) * i as f64 / n as f64).abs())
        .fold(0.0, f64::max)
}

#[test]
fn paley_wiener_support() {
    for m in models() {
        let f = RadialFunction::from_bump(GaussianBump::new(1.0, 0.15));
        let r = f.support_radius();
        let s = line_grid(3.0 * r, 768);
        let g = abel(&m, &f, &s).unwrap();
        let delta = 2.0 * s[1];
        let leak = s.iter().filter(|&&x| x > r + delta).map(|&x| g.eval(x).abs()).fold(0.0, f64::max);
        let peak = sup(400, 0.0, r, |x| g.eval(x));
        println!("{}: leak {leak:e} peak {peak:e}", m.name());
        assert!(leak < 1e-8);
    }
}

#[test]
fn r3_spectral_matches_geometric() {
    let m = make_euclidean(2);
    for b in [GaussianBump::centered(0.3), GaussianBump::new(0.8, 0.2)] {
        let f = RadialFunction::from_bump(b);
        let g = abel(&m, &f, &line_grid(f.support_radius(), 128)).unwrap();
        let err = sup(400, 0.0, f.support_radius() * 1.1, |s| g.eval(s) - flat_abel_r3(&f, s));
        println!("r3 abel err {err:e}");
        assert!(err < 1e-8);
        let back = abel_inverse(&m, &g).unwrap();
        let err = sup(300, 0.05, f.support_radius(), |r| {
            back.eval(r) + g.derivative(r, 1) / (2.0 * PI * r)
        });
        assert!(err < 1e-6, "derivative formula {err:e}");
    }
}

#[test]
fn round_trip_and_factorization() {
    for m in models() {
        let f = RadialFunction::from_bump(GaussianBump::new(0.4, 0.2));
        let g = RadialFunction::from_bump(GaussianBump::centered(0.3).scaled(2.0));
        let t = std::time::Instant::now();
        let af = abel(&m, &f, &line_grid(f.support_radius(), 128)).unwrap();
        let back = abel_inverse(&m, &af).unwrap();
        let rt = sup(400, 0.0, f.support_radius(), |r| back.eval(r) - f.eval(r));
        let fg = radial_convolve(&m, &f, &g).unwrap();
        let gf = radial_convolve(&m, &g, &f).unwrap();
        let comm = sup(400, 0.0, fg.support_radius(), |r| fg.eval(r) - gf.eval(r));
        let lams: Vec<f64> = (0..=50).map(|i| 0.1 * i as f64).collect();
        let a = spherical_fourier(&m, &fg, &lams).unwrap();
        let b1 = spherical_fourier(&m, &f, &lams).unwrap();
        let b2 = spherical_fourier(&m, &g, &lams).unwrap();
        let prod: Vec<f64> = b1.values.iter().zip(&b2.values).map(|(x, y)| x * y).collect();
        let scale = prod.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let fact = a.values.iter().zip(&prod).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale;
        println!("{}: round trip {rt:e} comm {comm:e} fact {fact:e} ({:?})", m.name(), t.elapsed());
        assert!(rt < 1e-6 && fact < 1e-6 && comm < 1e-9);
    }
}

#[test]
fn multiplier() {
    for m in models() {
        let f = RadialFunction::from_bump(GaussianBump::new(0.3, 0.2));
        let res = eigen_multiplier_check(&m, &f, 0.7).unwrap();
        println!("{}: multiplier {res:e}", m.name());
        assert!(res < 1e-5);
    }
}

#[test]
fn lift_of_trivial_character_is_one() {
    for m in [make_real_hyperbolic(2).unwrap(), make_damek_ricci(2, 1).unwrap()] {
        let h = m.h();
        let u = EvenLineFunction::from_profile(
            SharedProfile::from_fn(move |s| (0.5 * h * s).cosh()),
            f64::INFINITY,
            line_grid(2.0, 64),
        );
        let one = lift_a(&m, &u).unwrap();
        let err = sup(100, 0.0, 2.0, |r| one.eval(r) - 1.0);
        assert!(err < 1e-6, "{}: {err:e}", m.name());
    }
}

#[test]
fn associativity_on_hyperbolic_space() {
    let m = make_real_hyperbolic(2).unwrap();
    let f = RadialFunction::from_bump(GaussianBump::centered(0.2));
    let g = RadialFunction::from_bump(GaussianBump::new(0.3, 0.15));
    let h = RadialFunction::from_bump(GaussianBump::centered(0.25).scaled(3.0));
    let left = radial_convolve(&m, &radial_convolve(&m, &f, &g).unwrap(), &h).unwrap();
    let right = radial_convolve(&m, &f, &radial_convolve(&m, &g, &h).unwrap()).unwrap();
    let scale = sup(200, 0.0, left.support_radius(), |r| left.eval(r));
    let err = sup(200, 0.0, left.support_radius(), |r| left.eval(r) - right.eval(r));
    assert!(err < 1e-6 * scale.max(1.0), "{err:e}");
}

#[test]
fn line_convolution_oracles() {
    // on ℝ the radial convolution is the even convolution of even extensions
    let m = make_euclidean(0);
    let bf = GaussianBump::new(0.5, 0.2);
    let bg = GaussianBump::centered(0.3);
    let fg = radial_convolve(&m, &RadialFunction::from_bump(bf), &RadialFunction::from_bump(bg)).unwrap();
    let panels = PanelGrid::uniform(-bg.support(), bg.support(), 0.005);
    let err = sup(200, 0.0, fg.support_radius(), |r| {
        fg.eval(r) - panels.integrate_fn(|u| bf.value(r - u) * bg.value(u))
    });
    assert!(err < 1e-6, "{err:e}");

    let g = EvenLineFunction::from_bump(GaussianBump::centered(0.4));
    let hat = line_convolve(&g, &g);
    let energy = PanelGrid::uniform(-g.support_radius(), g.support_radius(), 0.01)
        .integrate_fn(|s| g.eval(s).powi(2));
    assert!((hat.eval(0.0) - energy).abs() < 1e-12);
    for s in [0.1, 0.9, 2.3] {
        assert_eq!(hat.eval(s).to_bits(), hat.eval(-s).to_bits());
    }
}

#[test]
fn narrow_bump_has_unit_multiplier() {
    let m = make_damek_ricci(2, 1).unwrap();
    let b = GaussianBump::centered(0.02);
    let raw = RadialFunction::from_bump(b);
    let mass = spherical_fourier(&m, &raw, &[0.0]).unwrap().values[0];
    let f = RadialFunction::from_bump(b.scaled(1.0 / mass));
    let lams: Vec<f64> = (0..=6).map(|i| 0.5 * i as f64).collect();
    for v in spherical_fourier(&m, &f, &lams).unwrap().values {
        assert!((v - 1.0).abs() < 1e-3, "{v}");
    }
}
