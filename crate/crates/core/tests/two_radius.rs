use std::f64::consts::{PI, TAU};
use std::time::Instant;

use harmonic_core::two_radius::*;
use harmonic_core::{make_damek_ricci, make_euclidean, make_real_hyperbolic};
use num_complex::Complex64;

#[test]
fn odd_over_odd_bad_radii() {
    let m = make_euclidean(0);
    let t = Instant::now();
    let bad = bad_radii(&m, 1.0, Target::Sphere, LBox::default(), 5.0).unwrap();
    println!("bad radii {} in {:?}", bad.len(), t.elapsed());
    for j in 0..=4usize {
        for jp in 0..30usize {
            let r2 = (2 * jp + 1) as f64 / (2 * j + 1) as f64;
            if r2 > 5.0 {
                continue;
            }
            let err = bad.iter().map(|b| (b - r2).abs()).fold(f64::INFINITY, f64::min);
            assert!(err < 1e-10, "r2 = {r2}: {err:e}");
        }
    }
    assert!(min_gap(&bad) > 1e-8);
}

#[test]
fn certificates_on_the_line() {
    let m = make_euclidean(0);
    let t = Instant::now();
    let c = certify_pair(&m, 1.0, 3.0, Target::Sphere, LBox::default()).unwrap();
    println!("{c:?} {:?}", t.elapsed());
    match c.verdict {
        Verdict::CommonZeroFound { l } => assert!((l - Complex64::new(-(PI / 2.0).powi(2), 0.0)).norm() < 1e-9),
        v => panic!("{v:?}"),
    }
    let t = Instant::now();
    let c = certify_pair(&m, 1.0, 2f64.sqrt(), Target::Sphere, LBox::default()).unwrap();
    println!("{c:?} {:?}", t.elapsed());
    assert_eq!(c.verdict, Verdict::NoCommonZeroInBox);
    let c = certify_pair(&m, TAU, 2.0 * TAU, Target::Mvp, LBox::new(-30.0, 30.0, -10.0, 10.0)).unwrap();
    println!("{c:?}");
    assert!(matches!(c.verdict, Verdict::CommonZeroFound { l } if (l + 1.0).norm() < 1e-9));
}

#[test]
fn curved_models() {
    for m in [make_real_hyperbolic(2).unwrap(), make_damek_ricci(2, 1).unwrap()] {
        for target in [Target::Sphere, Target::Mvp, Target::Ball] {
            let t = Instant::now();
            let zs = find_l_zeros(&m, 2.0, target, LBox::default(), 1000).unwrap();
            let refined = winding_count(
                &TargetFunction::new(&m, 2.0, target).unwrap(),
                &zs.lbox,
                true,
            )
            .unwrap();
            println!("{} {target:?}: {} zeros in {:?}", m.name(), zs.count(), t.elapsed());
            assert_eq!(refined, zs.winding_total);
            assert_eq!(zs.count() as i64, zs.winding_total);
            for z in &zs.zeros {
                assert!(z.residual < 1e-9, "{z:?}");
                let conj = zs.zeros.iter().any(|y| (y.l - z.l.conj()).norm() < 1e-9);
                assert!(conj || !zs.lbox.contains(z.l.conj()));
            }
        }
    }
}

#[test]
fn r_zero_examples() {
    let line = find_r_zeros(&make_euclidean(0), Complex64::new(-1.0, 0.0), 10.0).unwrap();
    let expect: Vec<f64> = (0..3).map(|j| (2 * j + 1) as f64 * PI / 2.0).collect();
    assert_eq!(line.len(), expect.len());
    for (a, b) in line.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-10);
    }
    let r3 = find_r_zeros(&make_euclidean(2), Complex64::new(-1.0, 0.0), 10.0).unwrap();
    assert_eq!(r3.len(), 3);
    for (k, a) in r3.iter().enumerate() {
        assert!((a - (k + 1) as f64 * PI).abs() < 1e-10);
    }
    // real λ on a model with H > 0: zeros are simple
    let m = make_damek_ricci(2, 1).unwrap();
    let l = Complex64::new(-(2.0f64.powi(2) + 0.25 * m.h() * m.h()), 0.0);
    let zs = find_r_zeros(&m, l, 12.0).unwrap();
    assert!(!zs.is_empty());
    let states = harmonic_core::spherical::phi_ode_at(&m, l, &zs, &Default::default()).unwrap();
    for (r, (p, dp)) in zs.iter().zip(states) {
        assert!(p.norm() < 1e-9 && dp.norm() > 1e-6, "r = {r}");
    }
}

#[test]
fn ball_target_has_no_zero_at_trivial_eigenvalue() {
    for m in [make_euclidean(2), make_real_hyperbolic(2).unwrap(), make_damek_ricci(1, 1).unwrap()] {
        let zs = find_l_zeros(&m, 1.5, Target::Ball, LBox::around(Complex64::new(0.0, 0.0), 0.5), 10).unwrap();
        assert_eq!(zs.winding_total, 0);
    }
}
