use harmonic_core::geometry::*;
use std::f64::consts::PI;

const PLANE: ExplicitSpace = ExplicitSpace::Plane;
const H2: ExplicitSpace = ExplicitSpace::HyperbolicPlane;

/// `J₀(x) = (1/π) ∫_0^π cos(x sin t) dt` by the midpoint rule, which is
/// spectrally accurate for this periodic integrand.
fn bessel_j0(x: f64) -> f64 {
    let n = 400;
    (0..n)
        .map(|k| (x * (PI * (k as f64 + 0.5) / n as f64).sin()).cos())
        .sum::<f64>()
        / n as f64
}

fn gaussian(space: ExplicitSpace, c: Point, w: f64) -> impl Fn(&Point) -> f64 + Sync {
    move |p: &Point| (-(space.distance(&c, p) / w).powi(2)).exp()
}

#[test]
fn sphere_average_examples() {
    let o = PLANE.origin();
    for r in [0.3, 1.0, 2.5] {
        let harmonic = sphere_average(PLANE, &|p| p[0] * p[0] - p[1] * p[1], &o, r, 64).unwrap();
        assert!(harmonic.abs() < 1e-14);
        let sq = sphere_average(PLANE, &|p| p[0] * p[0], &o, r, 64).unwrap();
        assert!((sq - r * r / 2.0).abs() < 1e-14);
        let one = sphere_average(H2, &|_| 1.0, &H2.polar(0.7, 0.2), r, 64).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
    }
    assert!(sphere_average(PLANE, &|_| 1.0, &o, 1.0, 32).is_err());
}

#[test]
fn circumference_matches_density() {
    for space in [PLANE, H2] {
        let m = space.density_model();
        for r in [0.1, 1.0, 5.0, 12.0] {
            let model = m.sphere_const() * m.theta(r);
            assert!((space.circumference(r) - model).abs() <= 1e-12 * model);
        }
    }
}

#[test]
fn plane_eigenfunction_is_bessel() {
    let phi = radial_eigenfunction(PLANE, 1.0, 7.0).unwrap();
    for r in [0.0, 0.5, 2.0, 4.4, 6.9] {
        assert!((phi(r) - bessel_j0(r)).abs() < 1e-10, "{r}");
    }
}

#[test]
fn displacement_identity() {
    let radii: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
    // Graf's addition theorem with an independent J₀
    let j0 = |r: f64| bessel_j0(r);
    for (rad, ang) in [(0.5, 0.0), (2.0, 1.0), (3.0, -2.2)] {
        let x = PLANE.polar(rad, ang);
        assert!(displacement_residual(PLANE, &j0, &x, &radii, 64) < 1e-8);
        assert!(displacement_identity_check(PLANE, 1.0, &x, &radii, 64).unwrap() < 1e-8);
    }
    // x at the origin: π(φ) = φ
    let e = displacement_identity_check(H2, 1.0, &H2.origin(), &radii, 64).unwrap();
    assert!(e < 1e-12);
    let e = displacement_identity_check(H2, 1.0, &H2.polar(1.0, 0.3), &[1.0], 64).unwrap();
    assert!(e < 1e-6);
    let e = displacement_identity_check(H2, 1.7, &H2.polar(1.5, 2.0), &radii, 128).unwrap();
    assert!(e < 1e-6);
}

#[test]
fn displacement_converges_spectrally() {
    let j8 = |r: f64| bessel_j0(8.0 * r);
    let x = PLANE.polar(2.0, 0.4);
    let radii: Vec<f64> = (1..=30).map(|i| 0.1 * i as f64).collect();
    let (e16, e32) = (displacement_residual(PLANE, &j8, &x, &radii, 16), displacement_residual(PLANE, &j8, &x, &radii, 32));
    assert!(e16 / e32 >= 4.0, "{e16} {e32}");
}

#[test]
fn projector_commutes_with_sphere_convolution() {
    let radii: Vec<f64> = (1..=10).map(|i| 0.25 * i as f64).collect();
    let radial = |p: &Point| (-(p[1] * p[1] + p[0] * p[0])).exp();
    assert!(projector_convolution_check(PLANE, 1.0, &radial, &radii, 64).unwrap() < 1e-10);
    let odd = |p: &Point| p[1];
    assert!(projector_convolution_check(PLANE, 1.0, &odd, &radii, 64).unwrap() < 1e-12);
    let exp = |p: &Point| p[1].exp();
    assert!(projector_convolution_check(PLANE, 1.0, &exp, &radii, 64).unwrap() < 1e-6);
    let h = |p: &Point| (0.4 * p[1] - 0.3 * p[2]).exp();
    assert!(projector_convolution_check(H2, 0.8, &h, &radii, 64).unwrap() < 1e-6);
}

#[test]
fn projector_is_self_adjoint_and_idempotent() {
    for space in [PLANE, H2] {
        let x = space.polar(0.3, -1.0);
        let f = gaussian(space, space.polar(0.5, 0.2), 0.4);
        let g = gaussian(space, space.polar(0.8, 2.0), 0.5);
        assert!(projector_selfadjoint_check(space, &f, &g, &x, 6.0, 64).unwrap() < 1e-6);
        assert!(projector_selfadjoint_check(space, &f, &f, &x, 6.0, 64).unwrap() < 1e-12);
        let about_x = gaussian(space, x, 0.6);
        assert!(projector_selfadjoint_check(space, &f, &about_x, &x, 6.0, 64).unwrap() < 1e-8);
        let radii: Vec<f64> = (1..=20).map(|i| 0.15 * i as f64).collect();
        assert!(idempotence_check(space, &f, &x, &radii, 64).unwrap() < 1e-10);
    }
}
