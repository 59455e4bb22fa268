use harmonic_core::asymptotics::*;
use harmonic_core::{make_damek_ricci, make_euclidean, make_real_hyperbolic, Error};

#[test]
fn flat_growth_is_polynomial() {
    let g = volume_growth(&make_euclidean(2), &[10.0, 40.0]).unwrap();
    // vol B_r = 4π r³/3 and area/vol = 3/r
    let exact = (4.0 * std::f64::consts::PI / 3.0 * 40f64.powi(3)).ln() / 40.0;
    assert!((g[1].log_volume_rate - exact).abs() < 1e-12);
    assert!((g[1].area_over_volume - 3.0 / 40.0).abs() < 1e-12);
    assert!((g[1].theta_ratio - 2.0 / 40.0).abs() < 1e-14);
    assert!(g[1].log_volume_rate < g[0].log_volume_rate);
}

#[test]
fn hyperbolic_growth_stages() {
    let g = volume_growth(&make_real_hyperbolic(2).unwrap(), &[40.0]).unwrap()[0];
    // ∫ sinh² = (sinh 2r)/4 - r/2, in log form for large r
    let r: f64 = 40.0;
    let vol_log = (4.0 * std::f64::consts::PI / 8.0).ln() + 2.0 * r + (1.0 - 4.0 * r * (-2.0 * r).exp() - (-4.0 * r).exp()).ln();
    assert!((g.log_volume_rate - vol_log / r).abs() < 1e-10, "{} {}", g.log_volume_rate, vol_log / r);
    assert!((g.log_volume_rate - 2.0).abs() < 0.05);
    assert!((g.theta_ratio - 2.0).abs() < 1e-10);
}

#[test]
fn damek_ricci_stages_and_report() {
    let m = make_damek_ricci(2, 1).unwrap();
    let g = volume_growth(&m, &[40.0]).unwrap()[0];
    assert!((g.log_volume_rate - 2.0).abs() < 0.05);
    assert!((g.area_over_volume - 2.0).abs() < 1e-3);
    assert!((g.theta_ratio - 2.0).abs() < 1e-10);
    let rep = cheeger_chain_report(&m, 40.0).unwrap();
    assert!(rep.passed(), "{:?}", rep.verdicts);
    assert!(!rep.flat);
}

#[test]
fn ground_values_against_closed_forms() {
    // on the ball of R³ the radial Dirichlet value is (π/R)²
    let v = ground_value(&make_euclidean(2), 10.0).unwrap();
    assert!((v.value - (std::f64::consts::PI / 10.0).powi(2)).abs() < 1e-6, "{v:?}");
    // on H³ the substitution u = v / sinh r gives 1 + (π/R)²
    let v = ground_value(&make_real_hyperbolic(2).unwrap(), 20.0).unwrap();
    assert!((v.value - 1.0 - (std::f64::consts::PI / 20.0).powi(2)).abs() < 1e-6, "{v:?}");
}

#[test]
fn lambda0_estimates() {
    for (m, target) in [
        (make_real_hyperbolic(2).unwrap(), 1.0),
        (make_damek_ricci(2, 1).unwrap(), 1.0),
        (make_damek_ricci(1, 1).unwrap(), 9.0 / 16.0),
    ] {
        let est = lambda0_estimate(&m, &[20.0, 30.0, 40.0]).unwrap();
        assert!((est.extrapolated - target).abs() < 0.02 * target, "{}: {}", m.name(), est.extrapolated);
        assert!(est.values.windows(2).all(|w| w[1].value <= w[0].value));
        assert!(est.values.iter().all(|v| v.value >= target));
    }
    let flat = lambda0_estimate(&make_euclidean(2), &[20.0, 30.0, 40.0]).unwrap();
    assert!(flat.extrapolated.abs() < 1e-6);
}

#[test]
fn flat_report_notes_rigidity() {
    let rep = cheeger_chain_report(&make_euclidean(3), 40.0).unwrap();
    assert!(rep.flat && rep.passed());
    assert!(rep.notes.iter().any(|n| n.contains("isometric to Euclidean")));
    let rep = cheeger_chain_report(&make_damek_ricci(1, 1).unwrap(), 40.0).unwrap();
    assert!((rep.h - 1.5).abs() < 1e-15 && rep.passed());
}

#[test]
fn refuses_large_radii() {
    let m = make_real_hyperbolic(2).unwrap();
    assert!(matches!(volume_growth(&m, &[61.0]), Err(Error::InvalidParameter(_))));
    assert!(lambda0_estimate(&m, &[20.0, 30.0]).is_err());
    // the log-space volume stays finite where θ itself is huge
    let g = volume_growth(&make_damek_ricci(4, 3).unwrap(), &[60.0]).unwrap()[0];
    assert!(g.log_volume_rate.is_finite() && g.area_over_volume.is_finite());
}
