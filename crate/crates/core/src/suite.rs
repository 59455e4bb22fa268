//! The full battery of numerical checks behind `harmonic suite`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{ground_value, lambda0_estimate, volume_growth};
use crate::density::{make_damek_ricci, make_euclidean, make_real_hyperbolic, DensityModel};
use crate::error::Result;
use crate::functions::{line_grid, EvenLineFunction, RadialFunction};
use crate::geometry::{
    displacement_identity_check, displacement_residual, idempotence_check, projector_convolution_check,
    projector_selfadjoint_check, radial_eigenfunction, ExplicitSpace, Point,
};
use crate::pde::{
    abel_mass_identity, heat_identity_check, intertwine_check, kg_kernel, kg_residual, line_heat_exact,
    propagation_slope, radial_heat_solve, radial_wave_solve, wave_to_kg_check, HeatOptions, KgSolution,
    WaveOptions,
};
use crate::profile::GaussianBump;
use crate::spherical::{coefficient_bound, phi, phi_ode, phi_series, volterra_coefficients, RadialGrid};
use crate::transforms::{abel, abel_inverse, flat_abel_r3, radial_convolve, spherical_fourier};
use crate::two_radius::{bad_radii, certify_pair, mvp_counterexample_demo, LBox, Target, Verdict};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub criterion: u32,
    pub passed: bool,
    /// Measured quantity compared against `tolerance`.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub quick: bool,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// How a measured value is compared with its tolerance.
#[derive(Clone, Copy)]
enum Bound {
    Below,
    /// ratio checks: value must reach the tolerance
    AtLeast,
}

struct Spec {
    name: String,
    criterion: u32,
    tolerance: f64,
    bound: Bound,
    run: Box<dyn Fn() -> Result<(f64, String)> + Send + Sync>,
}

fn below(name: impl Into<String>, criterion: u32, tolerance: f64, run: impl Fn() -> Result<(f64, String)> + Send + Sync + 'static) -> Spec {
    Spec {
        name: name.into(),
        criterion,
        tolerance,
        bound: Bound::Below,
        run: Box::new(run),
    }
}

fn at_least(name: impl Into<String>, criterion: u32, tolerance: f64, run: impl Fn() -> Result<(f64, String)> + Send + Sync + 'static) -> Spec {
    Spec {
        bound: Bound::AtLeast,
        ..below(name, criterion, tolerance, run)
    }
}

fn sup(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    (0..=n)
        .map(|i| f(a + (b - a) * i as f64 / n as f64).abs())
        .fold(0.0, f64::max)
}

fn bump(center: f64, width: f64) -> RadialFunction {
    RadialFunction::from_bump(GaussianBump::new(center, width))
}

fn flat_line() -> DensityModel {
    make_euclidean(0)
}

fn flat_space() -> DensityModel {
    make_euclidean(2)
}

fn h3() -> DensityModel {
    make_real_hyperbolic(2).expect("valid")
}

fn dr21() -> DensityModel {
    make_damek_ricci(2, 1).expect("valid")
}

fn dr11() -> DensityModel {
    make_damek_ricci(1, 1).expect("valid")
}

const LAMBDAS: [(f64, f64); 4] = [(0.5, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 0.5)];

fn eigen_oracle(model: DensityModel, exact: fn(Complex64, f64) -> Complex64) -> Result<(f64, String)> {
    let grid = RadialGrid::uniform(10.0, 500)?;
    let mut worst = 0.0f64;
    for (re, im) in LAMBDAS {
        let lam = Complex64::new(re, im);
        let f = phi(&model, lam, &grid)?;
        for (&r, v) in grid.points().iter().zip(&f.values) {
            worst = worst.max((v - exact(lam, r)).norm());
        }
    }
    Ok((worst, format!("{} against its closed form, λ ∈ {{0.5, 1, 2, 1+0.5i}}", model.name())))
}

fn criterion_specs(quick: bool, seed: u64) -> Vec<Spec> {
    let mut v = Vec::new();

    // 1: eigenfunctions
    v.push(below("phi_line_cosine", 1, 1e-8, || eigen_oracle(flat_line(), |l, r| (l * r).cos())));
    v.push(below("phi_r3_sinc", 1, 1e-8, || {
        eigen_oracle(flat_space(), |l, r| if r == 0.0 { 1.0.into() } else { (l * r).sin() / (l * r) })
    }));
    v.push(below("phi_h3_closed_form", 1, 1e-8, || {
        eigen_oracle(h3(), |l, r| if r == 0.0 { 1.0.into() } else { (l * r).sin() / (l * r.sinh()) })
    }));
    v.push(below("phi_series_matches_ode_damek_ricci", 1, 1e-8, || {
        let m = dr21();
        let grid = RadialGrid::uniform(10.0, 200)?;
        let mut worst = 0.0f64;
        for (re, im) in LAMBDAS {
            let lam = Complex64::new(re, im);
            let a = phi_series(&m, lam, &grid, 1e-14)?;
            let b = phi_ode(&m, lam, &grid)?;
            worst = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(worst, f64::max);
        }
        Ok((worst, "series and ODE paths on damek-ricci(2,1), r ≤ 10".into()))
    }));

    // 2: coefficient bound
    for model in [flat_space(), h3(), dr21(), dr11()] {
        v.push(below(format!("coefficient_bound_{}", model.name()), 2, 1e-12, move || {
            let grid = RadialGrid::uniform(10.0, 100)?;
            let c = volterra_coefficients(&model, &grid, 20)?;
            let mut excess = 0.0f64;
            for (k, row) in c.a.iter().enumerate() {
                for (&r, &a) in grid.points().iter().zip(row) {
                    let b = coefficient_bound(k, r);
                    excess = excess.max((-a).max(a - b) / b.max(f64::MIN_POSITIVE));
                }
            }
            Ok((excess.max(0.0), "largest violation of 0 ≤ a_k ≤ r^{2k}/(2k)!, k ≤ 20, r ≤ 10".into()))
        }));
    }
    v.push(below("coefficient_equality_on_line", 2, 1e-12, || {
        let grid = RadialGrid::uniform(10.0, 100)?;
        let c = volterra_coefficients(&flat_line(), &grid, 20)?;
        let mut worst = 0.0f64;
        for (k, row) in c.a.iter().enumerate() {
            for (&r, &a) in grid.points().iter().zip(row) {
                let b = coefficient_bound(k, r);
                worst = worst.max((a - b).abs() / b.max(f64::MIN_POSITIVE));
            }
        }
        Ok((worst, "a_k = r^{2k}/(2k)! on ℝ".into()))
    }));

    // 3: trivial eigenvalue
    for model in [flat_space(), h3(), dr21(), dr11()] {
        v.push(below(format!("trivial_eigenvalue_{}", model.name()), 3, 1e-10, move || {
            let grid = RadialGrid::uniform(10.0, 200)?;
            let f = phi(&model, Complex64::new(0.0, 0.5 * model.h()), &grid)?;
            let worst = f.values.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max);
            Ok((worst, "φ at λ = iH/2 against 1".into()))
        }));
    }

    // 4: transforms
    v.push(below("abel_paley_wiener_leak", 4, 1e-8, || {
        let m = dr21();
        let f = bump(1.0, 0.15);
        let r = f.support_radius();
        let s = line_grid(3.0 * r, 768);
        let g = abel(&m, &f, &s)?;
        let leak = s.iter().filter(|&&x| x > r + 2.0 * s[1]).map(|&x| g.eval(x).abs()).fold(0.0, f64::max);
        Ok((leak, format!("sup |Af| beyond the support radius {r}")))
    }));
    v.push(below("abel_r3_spectral_vs_geometric", 4, 1e-8, || {
        let f = bump(0.8, 0.2);
        let g = abel(&flat_space(), &f, &line_grid(f.support_radius(), 128))?;
        let err = sup(400, 0.0, 1.1 * f.support_radius(), |s| g.eval(s) - flat_abel_r3(&f, s));
        Ok((err, "spectral Abel against 2π ∫_s f(r) r dr".into()))
    }));
    v.push(below("convolution_factorization", 4, 1e-6, || {
        let m = h3();
        let f = bump(0.4, 0.2);
        let g = bump(0.0, 0.3);
        let fg = radial_convolve(&m, &f, &g)?;
        let lams: Vec<f64> = (0..=50).map(|i| 0.1 * i as f64).collect();
        let a = spherical_fourier(&m, &fg, &lams)?;
        let b1 = spherical_fourier(&m, &f, &lams)?;
        let b2 = spherical_fourier(&m, &g, &lams)?;
        let prod: Vec<f64> = b1.values.iter().zip(&b2.values).map(|(x, y)| x * y).collect();
        let scale = prod.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let err = a.values.iter().zip(&prod).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale;
        Ok((err, "‖F(f∗g) − Ff·Fg‖ / ‖Ff·Fg‖ on H³".into()))
    }));
    v.push(below("abel_round_trip", 4, 1e-6, || {
        let m = dr21();
        let f = bump(0.4, 0.2);
        let af = abel(&m, &f, &line_grid(f.support_radius(), 128))?;
        let back = abel_inverse(&m, &af)?;
        let err = sup(400, 0.0, f.support_radius(), |r| back.eval(r) - f.eval(r));
        Ok((err, "abel_inverse ∘ abel on damek-ricci(2,1)".into()))
    }));

    // 5: intertwining
    let bumps: Vec<(f64, f64)> = if quick {
        vec![(0.0, 0.3), (0.6, 0.2)]
    } else {
        vec![(0.0, 0.3), (0.6, 0.2), (1.0, 0.15), (0.0, 0.5), (0.3, 0.25)]
    };
    for model in [flat_line(), flat_space(), h3(), dr21()] {
        let bumps = bumps.clone();
        v.push(below(format!("intertwining_{}", model.name()), 5, 1e-5, move || {
            let mut worst = 0.0f64;
            for &(c, w) in &bumps {
                worst = worst.max(intertwine_check(&model, &bump(c, w))?);
            }
            Ok((worst, format!("sup |A(Δf) − (Af)'' + H²/4 Af| over {} bumps", bumps.len())))
        }));
    }

    // 6: Klein–Gordon
    v.push(below("kg_kernel_edge_value", 6, 1e-15, || {
        let mut worst = 0.0f64;
        for t in [0.5, 1.0, 4.0, 10.0] {
            for h in [0.5, 2.0, 3.0] {
                worst = worst.max((kg_kernel(h, t, t)? + h * h * t / 16.0).abs() / (1.0 + h * h * t));
            }
        }
        Ok((worst, "W(t, t) + H²t/16".into()))
    }));
    v.push(below("kg_energy_drift", 6, 1e-6, || {
        let g = EvenLineFunction::from_bump(GaussianBump::centered(0.4));
        let e0 = KgSolution::new(2.0, &g, 0.0)?.energy();
        let mut worst = 0.0f64;
        for i in 1..=10 {
            let e = KgSolution::new(2.0, &g, i as f64)?.energy();
            worst = worst.max(((e - e0) / e0).abs());
        }
        Ok((worst, "relative energy change over t ∈ [0, 10], H = 2".into()))
    }));
    v.push(below("wave_to_kg_h3", 6, 1e-4, || {
        let rep = wave_to_kg_check(&h3(), &bump(0.0, 0.3), 3.0, 0.0025)?;
        Ok((rep.max_residual, "sup_t ‖A w(t) − v(t)‖ at t = 1, 2, 3".into()))
    }));
    v.push(below("abel_mass_identity_h3", 6, 1e-8, || {
        let (a, b) = abel_mass_identity(&h3(), &bump(0.0, 0.3))?;
        Ok(((a - b).abs() / b, "∫ e^{Hs/2} A q₀ against ω_n ∫ q₀ θ".into()))
    }));

    // 7: propagation speed
    for model in [flat_line(), flat_space(), h3(), dr21()] {
        v.push(below(format!("propagation_slope_{}", model.name()), 7, 0.02, move || {
            let slope = propagation_slope(&model, &bump(0.0, 0.05), &WaveOptions::default())?;
            Ok(((slope - 1.0).abs(), format!("support slope {slope:.6} on t ∈ [1, 1.05]")))
        }));
    }

    // 8: two radii on the line
    v.push(below("bad_radii_odd_over_odd", 8, 1e-10, || {
        let bad = bad_radii(&flat_line(), 1.0, Target::Sphere, LBox::default(), 5.0)?;
        let mut worst = 0.0f64;
        for j in 0..=4u32 {
            for jp in 0..30u32 {
                let r2 = f64::from(2 * jp + 1) / f64::from(2 * j + 1);
                if r2 <= 5.0 {
                    worst = worst.max(bad.iter().map(|b| (b - r2).abs()).fold(f64::INFINITY, f64::min));
                }
            }
        }
        Ok((worst, format!("{} bad radii for r₁ = 1 below 5", bad.len())))
    }));
    v.push(below("certify_1_3_rejects", 8, 1e-9, || {
        let c = certify_pair(&flat_line(), 1.0, 3.0, Target::Sphere, LBox::default())?;
        let target = Complex64::new(-(PI / 2.0).powi(2), 0.0);
        Ok(match c.verdict {
            Verdict::CommonZeroFound { l } => ((l - target).norm(), format!("witness L = {:.13} {:+.1e}i", l.re, l.im)),
            other => (f64::INFINITY, format!("verdict {other:?}")),
        })
    }));
    v.push(below("certify_1_sqrt2_accepts", 8, 0.5, || {
        let c = certify_pair(&flat_line(), 1.0, 2f64.sqrt(), Target::Sphere, LBox::default())?;
        let ok = c.verdict == Verdict::NoCommonZeroInBox;
        Ok((if ok { 0.0 } else { 1.0 }, format!("verdict {:?} in |Re L| ≤ 400", c.verdict)))
    }));
    v.push(below("mvp_cosine_counterexample", 8, 1e-14, move || {
        let d = mvp_counterexample_demo(seed);
        Ok((d.max_residual, format!("max |cos''| = {:.3}, residual at π = {:.3}", d.max_laplacian, d.residual_at_pi)))
    }));

    // 9: heat
    for model in [flat_line(), h3(), dr21()] {
        v.push(below(format!("heat_identity_{}", model.name()), 9, 1e-3, move || {
            let lams: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
            let chk = heat_identity_check(&model, 0.5, &lams, 0.1, &HeatOptions::default())?;
            Ok((chk.max_rel_err, format!("t = 0.5, λ ∈ [0, 2], mass drift {:.2e}", chk.mass_drift)))
        }));
    }
    v.push(below("heat_mass_conservation", 9, 1e-5, || {
        let mut worst = 0.0f64;
        for model in [flat_line(), h3(), dr21()] {
            worst = worst.max(radial_heat_solve(&model, 0.5, 0.1, &HeatOptions::default())?.max_mass_drift);
        }
        Ok((worst, "max |mass − 1| over the trajectory".into()))
    }));

    // 10: asymptotics
    for model in [h3(), dr21(), dr11()] {
        let h = model.h();
        let m1 = model.clone();
        v.push(below(format!("mean_curvature_at_40_{}", model.name()), 10, 1e-8, move || {
            let g = volume_growth(&m1, &[40.0])?[0];
            Ok(((g.theta_ratio - h).abs(), format!("θ'/θ(40) = {:.15}", g.theta_ratio)))
        }));
        let m2 = model.clone();
        v.push(below(format!("volume_growth_rate_{}", model.name()), 10, 0.05, move || {
            let g = volume_growth(&m2, &[40.0])?[0];
            Ok(((g.log_volume_rate - h).abs(), format!("ln vol B_40 / 40 = {:.6}", g.log_volume_rate)))
        }));
        v.push(below(format!("lambda0_{}", model.name()), 10, 0.02, move || {
            let est = lambda0_estimate(&model, &[20.0, 30.0, 40.0])?;
            let target = 0.25 * h * h;
            Ok(((est.extrapolated - target).abs() / target, format!("extrapolated λ₀ = {:.6}", est.extrapolated)))
        }));
    }

    // 11: explicit spaces
    v.push(below("displacement_plane", 11, 1e-6, || {
        let radii: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
        let sp = ExplicitSpace::Plane;
        let mut worst = 0.0f64;
        for (r, a) in [(0.5, 0.0), (2.0, 1.0), (3.0, -2.2)] {
            worst = worst.max(displacement_identity_check(sp, 1.0, &sp.polar(r, a), &radii, 64)?);
        }
        Ok((worst, "π((φ₁)_x) − φ₁(x) φ₁, |x| ≤ 3, r ≤ 3".into()))
    }));
    v.push(below("displacement_hyperbolic_plane", 11, 1e-6, || {
        let sp = ExplicitSpace::HyperbolicPlane;
        let radii: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
        let e = displacement_identity_check(sp, 1.0, &sp.polar(1.0, 0.3), &radii, 64)?;
        Ok((e, "λ = 1, |x| = 1".into()))
    }));
    v.push(below("projector_self_adjoint", 11, 1e-6, || {
        let mut worst = 0.0f64;
        for sp in [ExplicitSpace::Plane, ExplicitSpace::HyperbolicPlane] {
            let f = move |p: &Point| (-(sp.distance(&sp.polar(0.5, 0.2), p) / 0.4).powi(2)).exp();
            let g = move |p: &Point| (-(sp.distance(&sp.polar(0.8, 2.0), p) / 0.5).powi(2)).exp();
            worst = worst.max(projector_selfadjoint_check(sp, &f, &g, &sp.polar(0.3, -1.0), 6.0, 64)?);
        }
        Ok((worst, "⟨π_x f, g⟩ − ⟨f, π_x g⟩ on both spaces".into()))
    }));
    v.push(below("projector_commutes_with_t_r", 11, 1e-6, || {
        let radii: Vec<f64> = (1..=10).map(|i| 0.25 * i as f64).collect();
        let a = projector_convolution_check(ExplicitSpace::Plane, 1.0, &|p: &Point| p[1].exp(), &radii, 64)?;
        let b = projector_convolution_check(
            ExplicitSpace::HyperbolicPlane,
            0.8,
            &|p: &Point| (0.4 * p[1] - 0.3 * p[2]).exp(),
            &radii,
            64,
        )?;
        Ok((a.max(b), "π(T_r f) − T_r(π f)".into()))
    }));
    v.push(below("projector_idempotent", 11, 1e-10, || {
        let radii: Vec<f64> = (1..=20).map(|i| 0.15 * i as f64).collect();
        let mut worst = 0.0f64;
        for sp in [ExplicitSpace::Plane, ExplicitSpace::HyperbolicPlane] {
            let f = move |p: &Point| (-(sp.distance(&sp.polar(0.5, 0.2), p) / 0.4).powi(2)).exp();
            worst = worst.max(idempotence_check(sp, &f, &sp.polar(0.3, -1.0), &radii, 64)?);
        }
        Ok((worst, "π(π f) − π f".into()))
    }));

    // 12: convergence orders
    v.push(at_least("order_wave_r3", 12, 3.5, || {
        let q = bump(0.0, 0.1);
        let t = 0.8;
        let err = |dr: f64| -> Result<f64> {
            let traj = radial_wave_solve(&flat_space(), &q, t, &WaveOptions { dr, ..Default::default() })?;
            let st = traj.states.last().expect("nonempty");
            Ok(st
                .grid
                .points()
                .iter()
                .zip(&st.u)
                .filter(|(r, _)| **r > 0.05)
                .map(|(&r, &u)| {
                    let exact = ((r - t) * q.eval((r - t).abs()) + (r + t) * q.eval(r + t)) / (2.0 * r);
                    (u - exact).abs()
                })
                .fold(0.0, f64::max))
        };
        let (a, b) = (err(0.004)?, err(0.002)?);
        Ok((a / b, format!("error {a:.2e} → {b:.2e}")))
    }));
    v.push(at_least("order_heat_line", 12, 3.5, || {
        let (b, t) = (0.1, 0.5);
        let c = 1.0 / (b * PI.sqrt());
        let err = |dr: f64| -> Result<f64> {
            let opts = HeatOptions {
                dr,
                dt: 0.5 * dr,
                ..Default::default()
            };
            let traj = radial_heat_solve(&flat_line(), t, b, &opts)?;
            let last = traj.states.last().expect("nonempty");
            Ok(last
                .grid
                .points()
                .iter()
                .zip(&last.k)
                .map(|(&r, &k)| (k - line_heat_exact(c, b, t, r)).abs())
                .fold(0.0, f64::max))
        };
        let (e1, e2) = (err(0.004)?, err(0.002)?);
        Ok((e1 / e2, format!("error {e1:.2e} → {e2:.2e}")))
    }));
    v.push(at_least("order_kg_residual", 12, 3.5, || {
        let g = EvenLineFunction::from_bump(GaussianBump::centered(0.5));
        let s: Vec<f64> = (0..20).map(|i| 0.15 * i as f64).collect();
        let (a, b) = (kg_residual(1.0, &g, 2.0, &s, 0.1)?, kg_residual(1.0, &g, 2.0, &s, 0.05)?);
        Ok((a / b, format!("finite-difference residual {a:.2e} → {b:.2e}")))
    }));
    v.push(at_least("order_wave_to_kg_line", 12, 3.5, || {
        let q = bump(0.0, 0.3);
        let a = wave_to_kg_check(&flat_line(), &q, 1.5, 0.01)?.max_residual;
        let b = wave_to_kg_check(&flat_line(), &q, 1.5, 0.005)?.max_residual;
        Ok((a / b, format!("residual {a:.2e} → {b:.2e}")))
    }));
    v.push(at_least("order_sphere_quadrature_plane", 12, 4.0, || {
        let sp = ExplicitSpace::Plane;
        let phi = radial_eigenfunction(sp, 8.0, 6.0)?;
        let radii: Vec<f64> = (1..=30).map(|i| 0.1 * i as f64).collect();
        let x = sp.polar(2.0, 0.4);
        let (a, b) = (displacement_residual(sp, &phi, &x, &radii, 16), displacement_residual(sp, &phi, &x, &radii, 32));
        Ok((a / b.max(1e-300), format!("residual {a:.2e} → {b:.2e} for 16 → 32 points")))
    }));
    v.push(at_least("order_sphere_quadrature_h2", 12, 4.0, || {
        let sp = ExplicitSpace::HyperbolicPlane;
        let phi = radial_eigenfunction(sp, 8.0, 5.0)?;
        let radii: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
        let x = sp.polar(1.5, 0.4);
        let (a, b) = (displacement_residual(sp, &phi, &x, &radii, 16), displacement_residual(sp, &phi, &x, &radii, 32));
        Ok((a / b.max(1e-300), format!("residual {a:.2e} → {b:.2e} for 16 → 32 points")))
    }));
    v.push(below("dirichlet_mesh_convergence", 12, 1e-6, || {
        let g = ground_value(&flat_space(), 10.0)?;
        Ok(((g.value - (PI / 10.0).powi(2)).abs(), format!("extrapolated from {} cells", g.intervals)))
    }));
    v
}

/// Runs every check; `quick` trims the larger sweeps.
pub fn run_suite(quick: bool, seed: u64) -> SuiteReport {
    let specs = criterion_specs(quick, seed);
    let checks: Vec<Check> = specs
        .par_iter()
        .map(|s| {
            let start = Instant::now();
            let out = (s.run)();
            let seconds = start.elapsed().as_secs_f64();
            let (value, detail, ok) = match out {
                Ok((value, detail)) => {
                    let ok = match s.bound {
                        Bound::Below => value <= s.tolerance,
                        Bound::AtLeast => value >= s.tolerance,
                    };
                    (value, detail, ok)
                }
                Err(e) => (f64::NAN, format!("error: {e}"), false),
            };
            Check {
                name: s.name.clone(),
                criterion: s.criterion,
                passed: ok,
                value,
                tolerance: s.tolerance,
                detail,
                seconds,
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    SuiteReport {
        quick,
        seed,
        failed: checks.len() - passed,
        passed,
        checks,
    }
}
