//! Klein–Gordon on the line, the radial wave and heat equations, and the
//! identities linking them through the Abel transform.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::functions::{line_grid, EvenLineFunction, RadialFunction};
use crate::ode::OdeOptions;
use crate::profile::SharedProfile;
use crate::quadrature::PanelGrid;
use crate::spherical::{phi_ode_at, spectral_parameter, RadialGrid};
use crate::transforms::{abel, abel_with, AbelOptions};

/// Largest `H·t` for which the alternating kernel series is summed in
/// double precision without losing more than about eight digits.
pub const MAX_HT: f64 = 40.0;

/// `W(t, s) = t Σ_k (-H²/16)^{k+1} (t² - s²)^k / (k! (k+1)!)` for `|s| ≤ t`.
#[derive(Debug, Clone, Copy)]
pub struct KgKernel {
    h: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct KernelValues {
    pub w: f64,
    pub w_t: f64,
    pub w_s: f64,
}

impl KgKernel {
    pub fn new(h: f64) -> Self {
        Self { h }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    fn check(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t = {t} must be nonnegative")));
        }
        if self.h * t > MAX_HT {
            return Err(Error::InvalidParameter(format!(
                "H t = {} exceeds the summation cap {MAX_HT}",
                self.h * t
            )));
        }
        Ok(())
    }

    /// `Σ_k c^{k+m} q^k / (k! (k+m)!)`, `c = -H²/16`.
    fn series(&self, q: f64, m: u32) -> f64 {
        let c = -self.h * self.h / 16.0;
        let mut term = c.powi(m as i32) / (1..=m).map(f64::from).product::<f64>();
        let mut sum = term;
        let x = c * q;
        for k in 0..500u32 {
            term *= x / (f64::from(k + 1) * f64::from(k + 1 + m));
            sum += term;
            let past_peak = f64::from(k + 1) > x.abs().sqrt();
            if past_peak && (term.abs() < 1e-16 * sum.abs() || term.abs() < 1e-30) {
                break;
            }
        }
        sum
    }

    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        Ok(self.with_derivatives(t, s)?.w)
    }

    /// `W`, `∂_t W` and `∂_s W` at `(t, s)`, `|s| ≤ t`.
    pub fn with_derivatives(&self, t: f64, s: f64) -> Result<KernelValues> {
        self.check(t)?;
        Ok(self.values(t, s))
    }

    fn values(&self, t: f64, s: f64) -> KernelValues {
        if self.h == 0.0 {
            return KernelValues { w: 0.0, w_t: 0.0, w_s: 0.0 };
        }
        let q = (t * t - s * s).max(0.0);
        let s1 = self.series(q, 1);
        let s2 = self.series(q, 2);
        KernelValues {
            w: t * s1,
            w_t: s1 + 2.0 * t * t * s2,
            w_s: -2.0 * t * s * s2,
        }
    }
}

pub fn kg_kernel(h: f64, t: f64, s: f64) -> Result<f64> {
    KgKernel::new(h).eval(t, s)
}

/// `v(t, ·)` for `v_tt = v_ss - (H²/4) v`, `v(0) = g`, `v_t(0) = 0`:
/// `v(t, s) = (g(s - t) + g(s + t))/2 + ∫_{-t}^{t} W(t, u) g(s - u) du`.
#[derive(Debug, Clone)]
pub struct KgSolution {
    kernel: KgKernel,
    g: EvenLineFunction,
    t: f64,
    panel: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct KgValues {
    pub v: f64,
    pub v_s: f64,
    pub v_t: f64,
}

impl KgSolution {
    pub fn new(h: f64, g: &EvenLineFunction, t: f64) -> Result<Self> {
        let kernel = KgKernel::new(h);
        kernel.check(t)?;
        let r = g.support_radius();
        if !r.is_finite() {
            return Err(Error::UnboundedSupport);
        }
        Ok(Self {
            kernel,
            g: g.clone(),
            t,
            panel: (r / 32.0).min(0.02),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn support_radius(&self) -> f64 {
        self.g.support_radius() + self.t
    }

    fn window(&self, s: f64) -> Option<PanelGrid> {
        let r = self.g.support_radius();
        let lo = (-self.t).max(s - r);
        let hi = self.t.min(s + r);
        (hi > lo && self.kernel.h != 0.0).then(|| PanelGrid::uniform(lo, hi, self.panel))
    }

    pub fn value(&self, s: f64) -> f64 {
        let t = self.t;
        let mut v = 0.5 * (self.g.eval(s - t) + self.g.eval(s + t));
        if let Some(p) = self.window(s) {
            v += p.integrate_fn(|u| self.kernel.values(t, u).w * self.g.eval(s - u));
        }
        v
    }

    pub fn values(&self, s: f64) -> KgValues {
        let t = self.t;
        let g = &self.g;
        let (gm, gp) = (g.eval(s - t), g.eval(s + t));
        let (dm, dp) = (g.derivative(s - t, 1), g.derivative(s + t, 1));
        let edge = self.kernel.values(t, t).w;
        let mut out = KgValues {
            v: 0.5 * (gm + gp),
            v_s: 0.5 * (dm + dp),
            v_t: 0.5 * (dp - dm) + edge * (gm + gp),
        };
        if let Some(p) = self.window(s) {
            for (&u, &w) in p.nodes().iter().zip(p.weights()) {
                let k = self.kernel.values(t, u);
                let gu = g.eval(s - u);
                out.v += w * k.w * gu;
                out.v_s += w * k.w * g.derivative(s - u, 1);
                out.v_t += w * k.w_t * gu;
            }
        }
        out
    }

    /// `E(t) = ∫ v_s² + v_t² + (H²/4) v² ds`.
    pub fn energy(&self) -> f64 {
        let h2 = 0.25 * self.kernel.h * self.kernel.h;
        let p = PanelGrid::uniform(0.0, self.support_radius(), self.panel);
        let parts: Vec<f64> = p
            .nodes()
            .par_iter()
            .zip(p.weights())
            .map(|(&s, w)| {
                let v = self.values(s);
                w * (v.v_s * v.v_s + v.v_t * v.v_t + h2 * v.v * v.v)
            })
            .collect();
        2.0 * parts.iter().sum::<f64>()
    }

    pub fn to_line(&self, intervals: usize) -> EvenLineFunction {
        let r = self.support_radius();
        let me = self.clone();
        EvenLineFunction::from_profile(SharedProfile::from_fn(move |s| me.value(s)), r, line_grid(r, intervals))
    }
}

pub fn kg_solve(h: f64, g: &EvenLineFunction, t: f64) -> Result<EvenLineFunction> {
    Ok(KgSolution::new(h, g, t)?.to_line(256))
}

/// `sup |v_tt - v_ss + (H²/4) v|` at the given `s`, by fourth-order central
/// differences with step `step` in both variables.
pub fn kg_residual(h: f64, g: &EvenLineFunction, t: f64, s_points: &[f64], step: f64) -> Result<f64> {
    let sol = |tt: f64| KgSolution::new(h, g, tt);
    let (m2, m1, p1, p2) = (sol(t - 2.0 * step)?, sol(t - step)?, sol(t + step)?, sol(t + 2.0 * step)?);
    let mid = sol(t)?;
    let d2 = |a: f64, b: f64, c: f64, d: f64, e: f64| (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) / (12.0 * step * step);
    Ok(s_points
        .par_iter()
        .map(|&s| {
            let c = mid.value(s);
            let vtt = d2(m2.value(s), m1.value(s), c, p1.value(s), p2.value(s));
            let vss = d2(
                mid.value(s - 2.0 * step),
                mid.value(s - step),
                c,
                mid.value(s + step),
                mid.value(s + 2.0 * step),
            );
            (vtt - vss + 0.25 * h * h * c).abs()
        })
        .reduce(|| 0.0, f64::max))
}

#[derive(Debug, Clone, Copy)]
pub struct WaveOptions {
    pub dr: f64,
    /// Defaults to `0.5 dr`; must not exceed it.
    pub dt: Option<f64>,
    pub r_max: Option<f64>,
    /// Keep every `save_every`-th step (and always the last).
    pub save_every: usize,
}

impl Default for WaveOptions {
    fn default() -> Self {
        Self {
            dr: 0.0025,
            dt: None,
            r_max: None,
            save_every: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveState {
    pub t: f64,
    #[serde(skip)]
    pub grid: RadialGrid,
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
}

impl WaveState {
    /// Outermost radius where `|u|` exceeds `rel · max |u|`, placed between
    /// grid points by log-linear interpolation.
    pub fn support_radius(&self, rel: f64) -> f64 {
        let peak = self.u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let thr = rel * peak;
        let r = self.grid.points();
        match self.u.iter().rposition(|v| v.abs() > thr) {
            None => 0.0,
            Some(i) if i + 1 >= r.len() => r[i],
            Some(i) => {
                let (a, b) = (self.u[i].abs(), self.u[i + 1].abs());
                if b == 0.0 {
                    return r[i];
                }
                r[i] + (r[i + 1] - r[i]) * (a / thr).ln() / (a / b).ln()
            }
        }
    }

    pub fn to_radial(&self, support_radius: f64) -> Result<RadialFunction> {
        RadialFunction::from_samples(self.grid.clone(), self.u.clone(), support_radius)
    }
}

#[derive(Debug, Clone)]
pub struct WaveTrajectory {
    pub states: Vec<WaveState>,
    pub dr: f64,
    pub dt: f64,
    pub initial_support: f64,
}

/// Leapfrog for `w_tt = w_rr + (θ'/θ) w_r`, `w(0) = q0`, `w_t(0) = 0`, with
/// `w_r(0) = 0` through a ghost point and `w = 0` at `r_max`.
pub fn radial_wave_solve(
    model: &DensityModel,
    q0: &RadialFunction,
    t_final: f64,
    opts: &WaveOptions,
) -> Result<WaveTrajectory> {
    let dr = opts.dr;
    let dt_max = opts.dt.unwrap_or(0.5 * dr);
    if dt_max > 0.5 * dr {
        return Err(Error::Cfl {
            dt: dt_max,
            limit: 0.5 * dr,
        });
    }
    let eps = q0.support_radius();
    if !eps.is_finite() {
        return Err(Error::UnboundedSupport);
    }
    let margin = (20.0 * dr).max(0.5);
    let required = eps + t_final + margin;
    let r_max = opts.r_max.unwrap_or(required);
    if r_max < required {
        return Err(Error::DomainTooSmall { r_max, required });
    }
    let n = (r_max / dr).round() as usize;
    let dr = r_max / n as f64;
    let steps = ((t_final / dt_max).ceil() as usize).max(1);
    let dt = t_final / steps as f64;
    let grid = RadialGrid::uniform(r_max, n)?;
    let r = grid.points().to_vec();
    let dim = model.dim() as f64;
    let inv2 = 1.0 / (dr * dr);
    let coef: Vec<(f64, f64)> = r
        .iter()
        .map(|&x| {
            if x == 0.0 {
                (0.0, 0.0)
            } else {
                let m = model.mean_curvature(x);
                (inv2 - 0.5 * m / dr, inv2 + 0.5 * m / dr)
            }
        })
        .collect();
    let lap = |w: &[f64], out: &mut [f64]| {
        out[0] = dim * 2.0 * (w[1] - w[0]) * inv2;
        for i in 1..n {
            out[i] = coef[i].0 * w[i - 1] - 2.0 * inv2 * w[i] + coef[i].1 * w[i + 1];
        }
        out[n] = 0.0;
    };
    let w0: Vec<f64> = r.iter().map(|&x| q0.eval(x)).collect();
    let mut acc = vec![0.0; n + 1];
    lap(&w0, &mut acc);
    let mut w1: Vec<f64> = w0.iter().zip(&acc).map(|(w, a)| w + 0.5 * dt * dt * a).collect();
    w1[n] = 0.0;
    let save = opts.save_every.max(1);
    let mut states = vec![WaveState {
        t: 0.0,
        grid: grid.clone(),
        u: w0.clone(),
        u_t: vec![0.0; n + 1],
    }];
    let (mut prev, mut cur) = (w0, w1);
    let mut next = vec![0.0; n + 1];
    for step in 1..=steps {
        lap(&cur, &mut acc);
        for i in 0..=n {
            next[i] = 2.0 * cur[i] - prev[i] + dt * dt * acc[i];
        }
        next[n] = 0.0;
        if step % save == 0 || step == steps {
            states.push(WaveState {
                t: step as f64 * dt,
                grid: grid.clone(),
                u: cur.clone(),
                u_t: next.iter().zip(&prev).map(|(a, b)| (a - b) / (2.0 * dt)).collect(),
            });
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(WaveTrajectory {
        states,
        dr,
        dt,
        initial_support: eps,
    })
}

/// Relative level used to measure the support of a wave.
pub const SUPPORT_LEVEL: f64 = 1e-3;

/// Least-squares slope of the support radius against `t ∈ [1, 1.05]`.
pub fn propagation_slope(model: &DensityModel, q0: &RadialFunction, opts: &WaveOptions) -> Result<f64> {
    let traj = radial_wave_solve(model, q0, 1.05, opts)?;
    let pts: Vec<(f64, f64)> = traj
        .states
        .iter()
        .filter(|s| s.t >= 1.0 - 1e-12)
        .map(|s| (s.t, s.support_radius(SUPPORT_LEVEL)))
        .collect();
    let n = pts.len() as f64;
    let (mt, mr) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mt) * (p.1 - mr), a.1 + (p.0 - mt).powi(2)));
    Ok(sxy / sxx)
}

/// `Δf = f'' + (θ'/θ) f'`, with `(n+1) f''(0)` at the origin.
pub fn radial_laplacian(model: &DensityModel, f: &RadialFunction) -> RadialFunction {
    let m = model.clone();
    let g = f.clone();
    let lap = move |r: f64| {
        let r = r.abs();
        if r < 1e-8 {
            m.dim() as f64 * g.derivative(0.0, 2)
        } else {
            g.derivative(r, 2) + m.r_mean_curvature(r) / r * g.derivative(r, 1)
        }
    };
    RadialFunction::from_profile(SharedProfile::from_fn(lap), f.support_radius(), f.grid().clone())
}

/// `sup_s |A(Δf)(s) - (Af)''(s) + (H²/4)(Af)(s)|`.
pub fn intertwine_check(model: &DensityModel, f: &RadialFunction) -> Result<f64> {
    let r = f.support_radius();
    let s = line_grid(r + 0.5, 400);
    let af = abel(model, f, &s)?;
    let alap = abel(model, &radial_laplacian(model, f), &s)?;
    let h2 = 0.25 * model.h() * model.h();
    Ok(s
        .iter()
        .map(|&x| (alap.eval(x) - af.derivative(x, 2) + h2 * af.eval(x)).abs())
        .fold(0.0, f64::max))
}

/// `(∫ e^{Hs/2} A q0(s) ds, ω_n ∫ q0 θ dr)`; equal because `φ_{iH/2} = 1`.
pub fn abel_mass_identity(model: &DensityModel, q0: &RadialFunction) -> Result<(f64, f64)> {
    let r = q0.support_radius();
    let aq = abel(model, q0, &line_grid(r, 128))?;
    let h = model.h();
    let lhs = PanelGrid::uniform(-r, r, (r / 64.0).min(0.02)).integrate_fn(|s| (0.5 * h * s).exp() * aq.eval(s));
    let rhs = model.sphere_const()
        * PanelGrid::uniform(0.0, r, (r / 64.0).min(0.02)).integrate_fn(|x| q0.eval(x) * model.theta(x));
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveKgReport {
    pub times: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub dr: f64,
}

/// `sup_t ‖A(w(t)) - v(t)‖_∞` with `w` the radial wave from `q0` and `v`
/// the Klein–Gordon solution from `A q0`, at `t = T/3, 2T/3, T`.
pub fn wave_to_kg_check(model: &DensityModel, q0: &RadialFunction, t_final: f64, dr: f64) -> Result<WaveKgReport> {
    let eps = q0.support_radius();
    let a0 = abel_with(model, q0, &line_grid(eps, 128), &AbelOptions::default())?;
    let per_third = ((t_final / 3.0) / (0.5 * dr)).ceil() as usize;
    let opts = WaveOptions {
        dr,
        dt: Some(t_final / (3 * per_third) as f64),
        r_max: None,
        save_every: per_third,
    };
    let traj = radial_wave_solve(model, q0, t_final, &opts)?;
    let frames: Vec<&WaveState> = traj.states.iter().filter(|s| s.t > 0.0).collect();
    let results = frames
        .par_iter()
        .map(|st| -> Result<(f64, f64)> {
            let support = (eps + st.t + 3.0 * traj.dr).min(st.grid.r_max());
            let w = st.to_radial(support)?;
            let aw = abel_with(
                model,
                &w,
                &line_grid(support, 128),
                &AbelOptions {
                    fixed_lambda_max: Some(a0.lambda_max),
                    ..AbelOptions::default()
                },
            )?;
            let v = KgSolution::new(model.h(), &a0.line, st.t)?;
            let s = line_grid(support + 0.2, 300);
            let res = s
                .iter()
                .map(|&x| (aw.line.eval(x) - v.value(x)).abs())
                .fold(0.0, f64::max);
            Ok((st.t, res))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_residual = results.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(WaveKgReport {
        times: results.iter().map(|p| p.0).collect(),
        residuals: results.iter().map(|p| p.1).collect(),
        max_residual,
        dr: traj.dr,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct HeatOptions {
    pub dr: f64,
    pub dt: f64,
    pub r_max: Option<f64>,
    /// Keep every `save_every`-th step; 0 keeps only the first and last.
    pub save_every: usize,
}

impl Default for HeatOptions {
    fn default() -> Self {
        Self {
            dr: 0.002,
            dt: 0.001,
            r_max: None,
            save_every: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatState {
    pub t: f64,
    #[serde(skip)]
    pub grid: RadialGrid,
    pub k: Vec<f64>,
    pub bump_width: f64,
    pub mass: f64,
    pub second_moment: f64,
}

#[derive(Debug, Clone)]
pub struct HeatTrajectory {
    pub states: Vec<HeatState>,
    /// `ω_n ∫_{cell} θ dr` for the control volume of each node.
    pub volumes: Vec<f64>,
    pub max_mass_drift: f64,
    pub min_value: f64,
    pub boundary_mass: f64,
}

impl HeatTrajectory {
    pub fn last(&self) -> &HeatState {
        self.states.last().unwrap()
    }
}

/// Default radius enclosing all but a negligible part of the heat mass.
pub fn heat_domain(model: &DensityModel, t: f64, bump_width: f64) -> f64 {
    model.h() * t + 2.0 * (100.0 * t).sqrt() + 6.5 * bump_width + 1.0
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64], scratch: &mut [f64]) {
    let n = d.len();
    scratch[0] = c[0] / b[0];
    d[0] /= b[0];
    for i in 1..n {
        let m = b[i] - a[i] * scratch[i - 1];
        scratch[i] = c[i] / m;
        d[i] = (d[i] - a[i] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= scratch[i] * d[i + 1];
    }
}

/// Finite volumes for `k_t = k_rr + (θ'/θ) k_r` with zero flux at both ends,
/// from a centred Gaussian of width `bump_width` normalized to unit mass.
/// Crank–Nicolson after four implicit Euler half steps.
pub fn radial_heat_solve(
    model: &DensityModel,
    t_final: f64,
    bump_width: f64,
    opts: &HeatOptions,
) -> Result<HeatTrajectory> {
    if !(t_final > 0.0 && t_final <= 5.0) {
        return Err(Error::InvalidParameter(format!("t = {t_final} must lie in (0, 5]")));
    }
    if bump_width < 3.0 * opts.dr {
        return Err(Error::InvalidParameter(format!(
            "bump width {bump_width} is below three cells ({})",
            3.0 * opts.dr
        )));
    }
    let r_max = opts.r_max.unwrap_or_else(|| heat_domain(model, t_final, bump_width));
    let n = (r_max / opts.dr).round() as usize;
    let dr = r_max / n as f64;
    let grid = RadialGrid::uniform(r_max, n)?;
    let r = grid.points().to_vec();
    let w = model.sphere_const();
    let volumes: Vec<f64> = (0..=n)
        .map(|i| {
            let lo = if i == 0 { 0.0 } else { r[i] - 0.5 * dr };
            let hi = if i == n { r[n] } else { r[i] + 0.5 * dr };
            w * PanelGrid::uniform(lo, hi, hi - lo).integrate_fn(|x| model.theta(x))
        })
        .collect();
    // conductance of the face between node i and i+1
    let faces: Vec<f64> = (0..n).map(|i| w * model.theta(r[i] + 0.5 * dr) / dr).collect();
    let apply_k = |k: &[f64], out: &mut [f64]| {
        for i in 0..=n {
            let mut v = 0.0;
            if i > 0 {
                v += faces[i - 1] * (k[i] - k[i - 1]);
            }
            if i < n {
                v += faces[i] * (k[i] - k[i + 1]);
            }
            out[i] = v;
        }
    };
    let mut k: Vec<f64> = r.iter().map(|&x| (-(x / bump_width).powi(2)).exp()).collect();
    let mass0: f64 = k.iter().zip(&volumes).map(|(a, b)| a * b).sum();
    k.iter_mut().for_each(|v| *v /= mass0);
    let moments = |k: &[f64]| -> (f64, f64) {
        k.iter()
            .zip(&volumes)
            .zip(&r)
            .fold((0.0, 0.0), |a, ((v, m), x)| (a.0 + v * m, a.1 + v * m * x * x))
    };
    let state = |t: f64, k: &[f64]| {
        let (mass, second_moment) = moments(k);
        HeatState {
            t,
            grid: grid.clone(),
            k: k.to_vec(),
            bump_width,
            mass,
            second_moment,
        }
    };
    let steps = ((t_final / opts.dt).ceil() as usize).max(2);
    let dt = t_final / steps as f64;
    // (V/τ + β K) k⁺ = (V/τ - (1-β) K) k
    let (mut a, mut b, mut c) = (vec![0.0; n + 1], vec![0.0; n + 1], vec![0.0; n + 1]);
    let mut rhs = vec![0.0; n + 1];
    let mut kk = vec![0.0; n + 1];
    let mut scratch = vec![0.0; n + 1];
    let mut advance = |k: &mut Vec<f64>, tau: f64, beta: f64| {
        apply_k(k, &mut kk);
        for i in 0..=n {
            rhs[i] = volumes[i] / tau * k[i] - (1.0 - beta) * kk[i];
            let left = if i > 0 { faces[i - 1] } else { 0.0 };
            let right = if i < n { faces[i] } else { 0.0 };
            a[i] = -beta * left;
            c[i] = -beta * right;
            b[i] = volumes[i] / tau + beta * (left + right);
        }
        thomas(&a, &b, &c, &mut rhs, &mut scratch);
        k.copy_from_slice(&rhs);
    };
    let mut states = vec![state(0.0, &k)];
    let mut drift = 0.0f64;
    let mut min_value = k.iter().cloned().fold(f64::INFINITY, f64::min);
    for step in 1..=steps {
        if step <= 2 {
            advance(&mut k, 0.5 * dt, 1.0);
            advance(&mut k, 0.5 * dt, 1.0);
        } else {
            advance(&mut k, dt, 0.5);
        }
        let (mass, _) = moments(&k);
        drift = drift.max((mass - 1.0).abs());
        min_value = min_value.min(k.iter().cloned().fold(f64::INFINITY, f64::min));
        if (opts.save_every > 0 && step % opts.save_every == 0) || step == steps {
            states.push(state(step as f64 * dt, &k));
        }
    }
    let boundary_mass: f64 = k
        .iter()
        .zip(&volumes)
        .zip(&r)
        .filter(|(_, &x)| x >= 0.9 * r_max)
        .map(|((v, m), _)| v * m)
        .sum();
    if boundary_mass > 1e-10 {
        return Err(Error::BoundaryLeak {
            leak: boundary_mass,
            required_r_max: 1.5 * r_max,
        });
    }
    Ok(HeatTrajectory {
        states,
        volumes,
        max_mass_drift: drift,
        min_value,
        boundary_mass,
    })
}

/// Exact heat flow on ℝ of `c·exp(-r²/b²)`.
pub fn line_heat_exact(c: f64, b: f64, t: f64, r: f64) -> f64 {
    let s = b * b + 4.0 * t;
    c * b / s.sqrt() * (-r * r / s).exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatCheck {
    pub t: f64,
    pub lambdas: Vec<f64>,
    pub ratios: Vec<f64>,
    pub expected: Vec<f64>,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub mass_drift: f64,
}

/// Below this `|F bump(λ)|` the quotient is refused.
pub const DIVISION_GUARD: f64 = 1e-3;

/// `F(k_t ∗ bump)(λ) / F(bump)(λ)` against `e^{-(λ² + H²/4) t}`.
pub fn heat_identity_check(
    model: &DensityModel,
    t: f64,
    lambdas: &[f64],
    bump_width: f64,
    opts: &HeatOptions,
) -> Result<HeatCheck> {
    let traj = radial_heat_solve(model, t, bump_width, opts)?;
    let first = &traj.states[0];
    let last = traj.last();
    let r = first.grid.points();
    let h = model.h();
    let pairs = lambdas
        .par_iter()
        .map(|&lam| -> Result<(f64, f64)> {
            let l = spectral_parameter(Complex64::new(lam, 0.0), h);
            let phi = phi_ode_at(model, l, r, &OdeOptions::default())?;
            let pair = |k: &[f64]| -> f64 {
                k.iter()
                    .zip(&traj.volumes)
                    .zip(&phi)
                    .map(|((a, v), p)| a * v * p.0.re)
                    .sum()
            };
            let fb = pair(&first.k);
            if fb.abs() <= DIVISION_GUARD {
                return Err(Error::DivisionGuard { lambda: lam, value: fb });
            }
            Ok((pair(&last.k) / fb, (-(lam * lam + 0.25 * h * h) * t).exp()))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_abs_err = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let max_rel_err = pairs.iter().map(|(a, b)| ((a - b) / b).abs()).fold(0.0, f64::max);
    Ok(HeatCheck {
        t,
        lambdas: lambdas.to_vec(),
        ratios: pairs.iter().map(|p| p.0).collect(),
        expected: pairs.iter().map(|p| p.1).collect(),
        max_abs_err,
        max_rel_err,
        mass_drift: traj.max_mass_drift,
    })
}
