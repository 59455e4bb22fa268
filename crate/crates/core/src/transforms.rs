//! Spherical Fourier transform, Abel transform and its inverse, the lift
//! `a`, and radial convolution through the Abel factorization.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::functions::{line_grid, EvenLineFunction, RadialFunction};
use crate::ode::OdeOptions;
use crate::profile::{CosineSum, Profile, SharedProfile};
use crate::quadrature::PanelGrid;
use crate::spherical::{phi_ode_at, spectral_parameter, PhiTable, RadialGrid};

/// `F f(λ_j)` for real `λ_j ≥ 0`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSamples {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub sphere_const: f64,
    pub model: String,
}

/// `φ_λ` at the nodes of a panel grid for a list of real `λ`.
#[derive(Debug, Clone)]
pub struct SpectralTable {
    lambdas: Vec<f64>,
    panels: PanelGrid,
    phi: Vec<Vec<f64>>,
}

impl SpectralTable {
    pub fn new(model: &DensityModel, lambdas: &[f64], r_max: f64, max_width: f64) -> Result<Self> {
        let panels = PanelGrid::uniform(0.0, r_max, max_width);
        let opts = OdeOptions::default();
        let phi = lambdas
            .par_iter()
            .map(|&lam| {
                let l = spectral_parameter(Complex64::new(lam, 0.0), model.h());
                phi_ode_at(model, l, panels.nodes(), &opts)
                    .map(|s| s.into_iter().map(|p| p.0.re).collect::<Vec<f64>>())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            lambdas: lambdas.to_vec(),
            panels,
            phi,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn panels(&self) -> &PanelGrid {
        &self.panels
    }

    pub fn phi(&self, j: usize) -> &[f64] {
        &self.phi[j]
    }

    /// `ω_n w_i θ(r_i)` at the nodes.
    pub fn measure(&self, model: &DensityModel) -> Vec<f64> {
        self.panels
            .nodes()
            .iter()
            .zip(self.panels.weights())
            .map(|(&r, w)| model.sphere_const() * w * model.theta(r))
            .collect()
    }

    /// `Σ_i m_i f_i φ_λ(r_i)` for every `λ` of the table.
    pub fn pair(&self, weighted: &[f64]) -> Vec<f64> {
        self.phi
            .iter()
            .map(|row| row.iter().zip(weighted).map(|(p, w)| p * w).sum())
            .collect()
    }
}

fn panel_width(radius: f64, lambda_max: f64) -> f64 {
    (radius / 64.0).min(2.0 / lambda_max.max(1.0)).min(0.05)
}

fn finite_support(f: &RadialFunction) -> Result<f64> {
    let r = f.support_radius();
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Err(Error::UnboundedSupport)
    }
}

/// `F f(λ) = ω_n ∫_0^R f φ_λ θ dr` at the given real `λ`.
pub fn spherical_fourier(model: &DensityModel, f: &RadialFunction, lambdas: &[f64]) -> Result<SpectralSamples> {
    let r = finite_support(f)?;
    let lmax = lambdas.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let table = SpectralTable::new(model, lambdas, r, panel_width(r, lmax))?;
    let values = transform_on(model, &table, f);
    Ok(SpectralSamples {
        lambdas: lambdas.to_vec(),
        values,
        sphere_const: model.sphere_const(),
        model: model.name().to_string(),
    })
}

fn transform_on(model: &DensityModel, table: &SpectralTable, f: &RadialFunction) -> Vec<f64> {
    let m = table.measure(model);
    let weighted: Vec<f64> = table
        .panels()
        .nodes()
        .iter()
        .zip(&m)
        .map(|(&r, w)| w * f.eval(r))
        .collect();
    table.pair(&weighted)
}

#[derive(Debug, Clone, Copy)]
pub struct AbelOptions {
    /// Stop raising `λ_max` once `|F f| < tail_tol · max |F f|` on the top
    /// quarter of the `λ`-range.
    pub tail_tol: f64,
    pub lambda_cap: f64,
    /// Largest support the `λ`-spacing must resolve without aliasing.
    pub total_radius: Option<f64>,
    /// Use this cutoff as is, without the tail test. For sampled data whose
    /// spectrum is known to live below it.
    pub fixed_lambda_max: Option<f64>,
}

impl Default for AbelOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-12,
            lambda_cap: 1280.0,
            total_radius: None,
            fixed_lambda_max: None,
        }
    }
}

/// Abel transform together with the spectral data it was built from.
#[derive(Debug, Clone)]
pub struct AbelTransform {
    pub line: EvenLineFunction,
    pub spectrum: SpectralSamples,
    pub dlambda: f64,
    pub lambda_max: f64,
}

/// `A f` as the inverse line Fourier transform of `F f`, sampled on `s_grid`.
pub fn abel(model: &DensityModel, f: &RadialFunction, s_grid: &[f64]) -> Result<EvenLineFunction> {
    Ok(abel_with(model, f, s_grid, &AbelOptions::default())?.line)
}

pub fn abel_with(
    model: &DensityModel,
    f: &RadialFunction,
    s_grid: &[f64],
    opts: &AbelOptions,
) -> Result<AbelTransform> {
    let r = finite_support(f)?;
    let s_max = s_grid.last().copied().unwrap_or(0.0);
    let total = opts.total_radius.unwrap_or(0.0).max(2.0 * r).max(s_max);
    let dlambda = PI / (2.0 * total);
    let mut lambda_max = opts.fixed_lambda_max.unwrap_or(40.0 / r);
    loop {
        let n = (lambda_max / dlambda).ceil() as usize;
        let lambdas: Vec<f64> = (0..=n).map(|j| j as f64 * dlambda).collect();
        let table = SpectralTable::new(model, &lambdas, r, panel_width(r, lambdas[n]))?;
        let values = transform_on(model, &table, f);
        let peak = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tail = lambdas
            .iter()
            .zip(&values)
            .filter(|(l, _)| **l >= 0.75 * lambda_max)
            .fold(0.0f64, |a, (_, v)| a.max(v.abs()));
        if opts.fixed_lambda_max.is_some() || tail <= opts.tail_tol * peak || peak == 0.0 {
            let coeffs: Vec<f64> = values
                .iter()
                .enumerate()
                .map(|(j, v)| if j == 0 { 0.5 } else { 1.0 } * v * dlambda / PI)
                .collect();
            let period = 2.0 * PI / dlambda;
            let profile = CosineSum::new(lambdas.clone(), coeffs, period - r);
            let line = EvenLineFunction::from_profile(SharedProfile::new(profile), r, s_grid.to_vec());
            return Ok(AbelTransform {
                line,
                spectrum: SpectralSamples {
                    lambdas,
                    values,
                    sphere_const: model.sphere_const(),
                    model: model.name().to_string(),
                },
                dlambda,
                lambda_max,
            });
        }
        if lambda_max >= opts.lambda_cap {
            return Err(Error::SpectralCutoff {
                lambda_max,
                tail: tail / peak,
                required: 2.0 * lambda_max,
            });
        }
        lambda_max *= 2.0;
    }
}

/// Direct horosphere-integral oracle on ℝ³: `A f(s) = 2π ∫_{|s|}^R f(r) r dr`.
pub fn flat_abel_r3(f: &RadialFunction, s: f64) -> f64 {
    let r = f.support_radius();
    let a = s.abs();
    if a >= r {
        return 0.0;
    }
    let panels = PanelGrid::uniform(a, r, 0.01);
    2.0 * PI * panels.integrate_fn(|x| f.eval(x) * x)
}

/// Direct oracle on ℝ: `A f(s) = f(|s|)`.
pub fn flat_abel_line(f: &RadialFunction, s: f64) -> f64 {
    f.eval(s.abs())
}

#[derive(Debug, Clone, Copy)]
pub struct InverseOptions {
    pub nodes: usize,
    pub ridge: f64,
    pub max_condition: f64,
    pub tail_tol: f64,
}

impl Default for InverseOptions {
    fn default() -> Self {
        Self {
            nodes: 257,
            ridge: 1e-12,
            max_condition: 1e12,
            tail_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct InverseDiagnostics {
    pub condition: f64,
    pub lambda_max: f64,
    pub basis_size: usize,
    pub fit_residual: f64,
}

/// Ridge-regularized least squares `min ‖A x - b‖² + α‖x‖²` with
/// `α = (ridge · σ_max)²`, after scaling the columns of `A` to unit norm.
/// Returns the solution and the condition number of the scaled matrix.
fn ridge_solve(a: &DMatrix<f64>, b: &DVector<f64>, ridge: f64) -> (DVector<f64>, f64) {
    let scales: Vec<f64> = (0..a.ncols())
        .map(|j| {
            let n = a.column(j).norm();
            if n > 0.0 {
                n
            } else {
                1.0
            }
        })
        .collect();
    let mut scaled = a.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = scaled.svd(true, true);
    let sigma = &svd.singular_values;
    let smax = sigma.max();
    let smin = sigma.min();
    let alpha = (ridge * smax).powi(2);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let utb = u.transpose() * b;
    let filtered = DVector::from_iterator(
        sigma.len(),
        sigma.iter().zip(utb.iter()).map(|(s, x)| s * x / (s * s + alpha)),
    );
    let mut x = vt.transpose() * filtered;
    for (j, s) in scales.iter().enumerate() {
        x[j] /= s;
    }
    (x, if smin > 0.0 { smax / smin } else { f64::INFINITY })
}

/// Line Fourier cosine transform `ĝ(λ) = 2 ∫_0^R g(s) cos(λ s) ds`.
struct LineSpectrum {
    nodes: Vec<f64>,
    wg: Vec<f64>,
}

impl LineSpectrum {
    fn new(g: &EvenLineFunction, r: f64, width: f64) -> Self {
        let panels = PanelGrid::uniform(0.0, r, width);
        let wg = panels
            .nodes()
            .par_iter()
            .zip(panels.weights())
            .map(|(&s, w)| 2.0 * w * g.eval(s))
            .collect();
        Self {
            nodes: panels.nodes().to_vec(),
            wg,
        }
    }

    fn at(&self, lambda: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.wg)
            .map(|(s, w)| w * (lambda * s).cos())
            .sum()
    }
}

/// Radial `f` with `A f ≈ g`, by collocation of `F f = ĝ` on a `λ`-grid
/// with the cosine basis `cos(jπr/R)` on the support `[0, R]` of `g`.
pub fn abel_inverse(model: &DensityModel, g: &EvenLineFunction) -> Result<RadialFunction> {
    Ok(abel_inverse_with(model, g, &InverseOptions::default())?.0)
}

const INVERSE_LINE_WIDTH: f64 = 0.025;
const MAX_BASIS: usize = 200;

pub fn abel_inverse_with(
    model: &DensityModel,
    g: &EvenLineFunction,
    opts: &InverseOptions,
) -> Result<(RadialFunction, InverseDiagnostics)> {
    let r = g.support_radius();
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::UnboundedSupport);
    }
    let width = (r / 64.0).min(INVERSE_LINE_WIDTH);
    let spec = LineSpectrum::new(g, r, width);
    let cap = ((MAX_BASIS as f64 - 1.0) * PI / (0.8 * r)).min(2.5 / width);
    let probe = |lmax: f64| -> (f64, f64) {
        let vals: Vec<f64> = (0..=256).map(|i| spec.at(lmax * i as f64 / 256.0).abs()).collect();
        let peak = vals.iter().cloned().fold(0.0, f64::max);
        let tail = vals[192..].iter().cloned().fold(0.0, f64::max);
        (peak, tail)
    };
    let mut lambda_max = 40.0 / r;
    loop {
        let (peak, tail) = probe(lambda_max);
        if tail <= opts.tail_tol * peak || peak == 0.0 {
            break;
        }
        if 2.0 * lambda_max > cap {
            return Err(Error::SpectralCutoff {
                lambda_max,
                tail: tail / peak,
                required: 2.0 * lambda_max,
            });
        }
        lambda_max *= 2.0;
    }
    let lambdas: Vec<f64> = (0..opts.nodes)
        .map(|i| lambda_max * i as f64 / (opts.nodes - 1) as f64)
        .collect();
    let basis = ((0.8 * lambda_max * r / PI).floor() as usize + 1).min(MAX_BASIS);
    let table = SpectralTable::new(model, &lambdas, r, panel_width(r, lambda_max))?;
    let m = table.measure(model);
    let nodes = table.panels().nodes();
    let freqs: Vec<f64> = (0..basis).map(|j| j as f64 * PI / r).collect();
    let mut a = DMatrix::zeros(lambdas.len(), basis);
    for (j, &w) in freqs.iter().enumerate() {
        let weighted: Vec<f64> = nodes.iter().zip(&m).map(|(&x, mi)| mi * (w * x).cos()).collect();
        for (i, v) in table.pair(&weighted).into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    let b = DVector::from_iterator(lambdas.len(), lambdas.iter().map(|&l| spec.at(l)));
    let (c, condition) = ridge_solve(&a, &b, opts.ridge);
    if condition > opts.max_condition {
        return Err(Error::IllConditioned(condition));
    }
    let fit_residual = (&a * &c - &b).amax() / b.amax().max(f64::MIN_POSITIVE);
    let profile = CosineSum::new(freqs, c.iter().copied().collect(), r);
    let grid = RadialGrid::uniform(r, 256)?;
    let f = RadialFunction::from_profile(SharedProfile::new(profile), r, grid);
    Ok((
        f,
        InverseDiagnostics {
            condition,
            lambda_max,
            basis_size: basis,
            fit_residual,
        },
    ))
}

struct Convolution {
    g1: EvenLineFunction,
    nodes: Vec<f64>,
    wg2: Vec<f64>,
}

impl Profile for Convolution {
    fn value(&self, s: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.wg2)
            .map(|(u, w)| w * (self.g1.eval(s - u) + self.g1.eval(s + u)))
            .sum()
    }
}

/// `(g1 ∗ g2)(s) = ∫ g1(s - u) g2(u) du` by quadrature over the support of
/// `g2`, folded onto `u ≥ 0` by evenness.
pub fn line_convolve(g1: &EvenLineFunction, g2: &EvenLineFunction) -> EvenLineFunction {
    let r1 = g1.support_radius();
    let r2 = g2.support_radius();
    let panels = PanelGrid::uniform(0.0, r2, (r2 / 48.0).min(0.04));
    let wg2 = panels
        .nodes()
        .iter()
        .zip(panels.weights())
        .map(|(&u, w)| w * g2.eval(u))
        .collect();
    let conv = Convolution {
        g1: g1.clone(),
        nodes: panels.nodes().to_vec(),
        wg2,
    };
    let support = r1 + r2;
    EvenLineFunction::from_profile(SharedProfile::new(conv), support, line_grid(support, 256))
}

/// `f ∗ g = A⁻¹(A f ∗ A g)`.
pub fn radial_convolve(model: &DensityModel, f: &RadialFunction, g: &RadialFunction) -> Result<RadialFunction> {
    let af = abel(model, f, &line_grid(f.support_radius(), 256))?;
    let ag = abel(model, g, &line_grid(g.support_radius(), 256))?;
    abel_inverse(model, &line_convolve(&af, &ag))
}

struct LiftSum {
    tables: Vec<PhiTable>,
    coeffs: Vec<f64>,
}

impl Profile for LiftSum {
    fn value(&self, r: f64) -> f64 {
        self.tables
            .iter()
            .zip(&self.coeffs)
            .map(|(t, c)| c * t.eval(r.abs()).0.re)
            .sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LiftOptions {
    pub dictionary: usize,
    pub ridge: f64,
    pub max_residual: f64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            dictionary: 80,
            ridge: 1e-12,
            max_residual: 1e-6,
        }
    }
}

/// `a u` on `[0, S]`, `S` the end of the grid of `u`: expand
/// `u ≈ Σ c_j cos(λ_j s)` on `[0, S]` and return `Σ c_j φ_{λ_j}`.
pub fn lift_a(model: &DensityModel, u: &EvenLineFunction) -> Result<RadialFunction> {
    lift_a_with(model, u, &LiftOptions::default())
}

pub fn lift_a_with(model: &DensityModel, u: &EvenLineFunction, opts: &LiftOptions) -> Result<RadialFunction> {
    let s_max = u.s_max();
    let n = opts.dictionary;
    let freqs: Vec<f64> = (0..n).map(|j| j as f64 * PI / (2.0 * s_max)).collect();
    let m = 4 * n;
    let pts: Vec<f64> = (0..m)
        .map(|i| 0.5 * s_max * (1.0 - (PI * i as f64 / (m - 1) as f64).cos()))
        .collect();
    let a = DMatrix::from_fn(m, n, |i, j| (freqs[j] * pts[i]).cos());
    let b = DVector::from_iterator(m, pts.iter().map(|&s| u.eval(s)));
    let (c, _) = ridge_solve(&a, &b, opts.ridge);
    let expansion = CosineSum::new(freqs.clone(), c.iter().copied().collect(), f64::INFINITY);
    let residual = (0..=2000)
        .map(|i| {
            let s = s_max * i as f64 / 2000.0;
            (u.eval(s) - expansion.value(s)).abs()
        })
        .fold(0.0, f64::max);
    if residual > opts.max_residual {
        return Err(Error::ExpansionResidual {
            residual,
            tolerance: opts.max_residual,
        });
    }
    let tables = freqs
        .par_iter()
        .map(|&w| {
            let l = spectral_parameter(Complex64::new(w, 0.0), model.h());
            PhiTable::new(model, l, s_max, 0.1)
        })
        .collect::<Result<Vec<_>>>()?;
    let lifted = LiftSum {
        tables,
        coeffs: c.iter().copied().collect(),
    };
    let support = u.support_radius().min(f64::INFINITY);
    let grid = RadialGrid::uniform(s_max, 256)?;
    Ok(RadialFunction::from_profile(SharedProfile(Arc::new(lifted)), support, grid))
}

/// `max_r |a((A f) ⋆ cos(λ·))(r) - F f(λ) φ_λ(r)|` over `r ∈ [0, S]`.
pub fn eigen_multiplier_check(model: &DensityModel, f: &RadialFunction, lambda: f64) -> Result<f64> {
    let r = finite_support(f)?;
    let s_max = r.max(2.0);
    let af = abel(model, f, &line_grid(r, 256))?;
    let panels = PanelGrid::uniform(-r, r, (r / 64.0).min(0.02));
    let wa: Vec<f64> = panels
        .nodes()
        .iter()
        .zip(panels.weights())
        .map(|(&x, w)| w * af.eval(x))
        .collect();
    let nodes = panels.nodes().to_vec();
    let conv = move |s: f64| -> f64 {
        nodes
            .iter()
            .zip(&wa)
            .map(|(x, w)| w * (lambda * (s - x)).cos())
            .sum()
    };
    let u = EvenLineFunction::from_profile(SharedProfile::from_fn(conv), f64::INFINITY, line_grid(s_max, 256));
    let lifted = lift_a(model, &u)?;
    let ff = spherical_fourier(model, f, &[lambda])?.values[0];
    let l = spectral_parameter(Complex64::new(lambda, 0.0), model.h());
    let table = PhiTable::new(model, l, s_max, 0.1)?;
    Ok((0..=200)
        .map(|i| {
            let x = s_max * i as f64 / 200.0;
            (lifted.eval(x) - ff * table.eval(x).0.re).abs()
        })
        .fold(0.0, f64::max))
}

/// `Σ_j c_j φ_{λ_j}` evaluated at `r` from precomputed tables.
pub fn phi_values_at(model: &DensityModel, lambda: f64, radii: &[f64]) -> Result<Vec<f64>> {
    let l = spectral_parameter(Complex64::new(lambda, 0.0), model.h());
    Ok(phi_ode_at(model, l, radii, &OdeOptions::default())?
        .into_iter()
        .map(|p| p.0.re)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{make_damek_ricci, make_euclidean};
    use crate::profile::GaussianBump;

    #[test]
    fn fourier_on_the_line_is_a_cosine_transform() {
        let m = make_euclidean(0);
        let b = GaussianBump::new(0.5, 0.2);
        let f = RadialFunction::from_bump(b);
        let lams = [0.0, 0.7, 2.5, 6.0];
        let ff = spherical_fourier(&m, &f, &lams).unwrap();
        let panels = PanelGrid::uniform(0.0, b.support(), 0.005);
        for (l, v) in lams.iter().zip(&ff.values) {
            let oracle = 2.0 * panels.integrate_fn(|r| b.value(r) * (l * r).cos());
            assert!((v - oracle).abs() < 1e-11);
        }
    }

    #[test]
    fn abel_on_the_line_is_even_extension() {
        let m = make_euclidean(0);
        let f = RadialFunction::from_bump(GaussianBump::new(0.3, 0.15));
        let g = abel(&m, &f, &line_grid(2.0, 200)).unwrap();
        for &s in g.s() {
            assert!((g.eval(s) - flat_abel_line(&f, s)).abs() < 1e-9, "s = {s}");
        }
    }

    #[test]
    fn inverse_on_damek_ricci_round_trips() {
        let m = make_damek_ricci(2, 1).unwrap();
        let f = RadialFunction::from_bump(GaussianBump::centered(0.25));
        let g = abel(&m, &f, &line_grid(f.support_radius(), 128)).unwrap();
        let (back, diag) = abel_inverse_with(&m, &g, &InverseOptions::default()).unwrap();
        let err = (0..=300)
            .map(|i| {
                let r = f.support_radius() * i as f64 / 300.0;
                (back.eval(r) - f.eval(r)).abs()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "round trip error {err:e}, {diag:?}");
    }

    #[test]
    fn lift_of_cosine_is_spherical_function() {
        let m = make_damek_ricci(2, 1).unwrap();
        let lam = 1.3;
        let u = EvenLineFunction::from_profile(
            SharedProfile::from_fn(move |s| (lam * s).cos()),
            f64::INFINITY,
            line_grid(3.0, 64),
        );
        let lifted = lift_a(&m, &u).unwrap();
        let radii: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
        let exact = phi_values_at(&m, lam, &radii).unwrap();
        for (r, e) in radii.iter().zip(&exact) {
            assert!((lifted.eval(*r) - e).abs() < 1e-7, "r = {r}");
        }
    }
}
