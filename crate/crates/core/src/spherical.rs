//! Radial eigenfunctions `φ_λ` of the Laplacian, `Δφ_λ = L φ_λ` with
//! `L = -(λ² + H²/4)`, `φ_λ(0) = 1`, evaluated either through the Volterra
//! power series `φ_λ = Σ a_k L^k` or by integrating the radial ODE
//! `φ'' + (θ'/θ) φ' = L φ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, State};
use crate::quadrature::{PanelGrid, PANEL_ORDER};

pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
pub const DEFAULT_K_MAX: usize = 400;
/// Default tolerance for declaring `φ_λ(r) = 0`.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
const MIN_INTERVALS: usize = 16;
const VOLTERRA_PANEL: f64 = 0.05;
const PANEL_GRADING: f64 = 0.05;
const GRADING_FLOOR: f64 = 1e-4;
const TAYLOR_RADIUS: f64 = 1e-3;
const TAYLOR_TERMS: usize = 4;
/// Relative rounding allowance in `0 ≤ a_k ≤ r^{2k}/(2k)!`; on ℝ the bound
/// is attained.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Uniform,
    Graded,
    Custom,
}

/// Sample radii `0 = r_0 < r_1 < … < r_N = r_max` with `N ≥ 16`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    points: Vec<f64>,
    spacing: Spacing,
}

impl RadialGrid {
    pub fn uniform(r_max: f64, intervals: usize) -> Result<Self> {
        let pts = (0..=intervals)
            .map(|i| if i == intervals { r_max } else { r_max * i as f64 / intervals as f64 })
            .collect();
        Self::build(pts, Spacing::Uniform)
    }

    /// Quadratically graded towards the origin.
    pub fn graded(r_max: f64, intervals: usize) -> Result<Self> {
        let pts = (0..=intervals)
            .map(|i| {
                let t = i as f64 / intervals as f64;
                if i == intervals {
                    r_max
                } else {
                    r_max * t * t
                }
            })
            .collect();
        Self::build(pts, Spacing::Graded)
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        Self::build(points, Spacing::Custom)
    }

    fn build(points: Vec<f64>, spacing: Spacing) -> Result<Self> {
        if points.len() < MIN_INTERVALS + 1 {
            return Err(Error::InvalidParameter(format!(
                "radial grid needs at least {} intervals, got {}",
                MIN_INTERVALS,
                points.len().saturating_sub(1)
            )));
        }
        if points[0] != 0.0 {
            return Err(Error::InvalidParameter("radial grid must start at 0".into()));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) || !points.iter().all(|r| r.is_finite()) {
            return Err(Error::InvalidParameter("radial grid must be strictly increasing".into()));
        }
        Ok(Self { points, spacing })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn r_max(&self) -> f64 {
        *self.points.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Quadrature panels whose edges contain every grid point.
    pub fn panels(&self, max_width: f64) -> PanelGrid {
        PanelGrid::new(&refine(&self.points, max_width))
    }
}

/// Panel edges containing every grid point. Widths are capped at
/// `max_width` and at `PANEL_GRADING` times the distance to the origin, so
/// `a_k ~ r^{2k}` keeps its relative accuracy at small `r`.
fn refine(points: &[f64], max_width: f64) -> Vec<f64> {
    let mut edges = vec![points[0]];
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut x = a;
        if a == 0.0 {
            x = b.min(max_width) * GRADING_FLOOR;
            edges.push(x);
        }
        loop {
            let step = max_width.min(PANEL_GRADING * x);
            if x + 1.5 * step >= b {
                if x + step < b {
                    // split the remainder evenly rather than leave a sliver
                    edges.push(0.5 * (x + b));
                }
                break;
            }
            x += step;
            edges.push(x);
        }
        edges.push(b);
    }
    edges
}

/// `L = -(λ² + H²/4)`; `λ` and `-λ` give bit-identical results.
pub fn spectral_parameter(lambda: Complex64, h: f64) -> Complex64 {
    -(lambda * lambda + Complex64::new(0.25 * h * h, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Ode,
}

#[derive(Debug, Clone)]
pub struct SphericalFunction {
    pub lambda: Complex64,
    pub l: Complex64,
    pub r: Vec<f64>,
    pub values: Vec<Complex64>,
    pub derivative_values: Vec<Complex64>,
    pub method: Method,
}

/// Samples of `a_k`, `a_k'` and `J_k = ∫_0^r θ a_k` for `k = 0..=K`.
#[derive(Debug, Clone)]
pub struct SeriesCoefficients {
    pub r: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub da: Vec<Vec<f64>>,
    pub ball: Vec<Vec<f64>>,
}

impl SeriesCoefficients {
    pub fn k_max(&self) -> usize {
        self.a.len() - 1
    }
}

struct VolterraEdges {
    a: Vec<Vec<f64>>,
    da: Vec<Vec<f64>>,
    ball: Vec<Vec<f64>>,
}

/// Replaces the cumulative integral on the panel touching `r = 0` by its
/// leading-order value `f` and shifts everything beyond by the change at the
/// panel's right edge. Near the origin the integrands behave like high powers
/// of `r`, which the panel rule cannot resolve in relative terms, and the
/// division by `θ ~ r^n` would magnify that error.
fn replace_first_panel(panels: &PanelGrid, nodes: &mut [f64], edges: &mut [f64], f: impl Fn(f64) -> f64) {
    if panels.edges()[0] != 0.0 {
        return;
    }
    let delta = f(panels.edges()[1]) - edges[1];
    for (v, &r) in nodes.iter_mut().zip(panels.nodes()).take(PANEL_ORDER) {
        *v = f(r);
    }
    nodes[PANEL_ORDER..].iter_mut().for_each(|v| *v += delta);
    edges[1..].iter_mut().for_each(|v| *v += delta);
}

fn volterra_on(model: &DensityModel, panels: &PanelGrid, k_max: usize) -> VolterraEdges {
    let theta_nodes: Vec<f64> = panels.nodes().iter().map(|&r| model.theta(r)).collect();
    let theta_edges: Vec<f64> = panels.edges().iter().map(|&r| model.theta(r)).collect();
    let n = model.n() as f64;
    let ne = panels.edges().len();
    let mut a_nodes = vec![1.0; panels.nodes().len()];
    let mut a = vec![vec![1.0; ne]];
    let mut da = vec![vec![0.0; ne]];
    let mut ball = Vec::with_capacity(k_max + 1);
    // a_k(r) = c r^{2k} (1 + O(r²)) at the origin
    let mut c = 1.0;
    for k in 0..=k_max {
        let p = 2 * k as i32;
        let prod: Vec<f64> = a_nodes.iter().zip(&theta_nodes).map(|(x, t)| x * t).collect();
        let (mut inner_nodes, mut inner_edges) = panels.cumulative(&prod);
        let c_inner = c / (n + p as f64 + 1.0);
        replace_first_panel(panels, &mut inner_nodes, &mut inner_edges, |r| {
            c_inner * r.powi(p + 1) * r.powf(n)
        });
        if k == k_max {
            ball.push(inner_edges);
            break;
        }
        let g: Vec<f64> = inner_nodes.iter().zip(&theta_nodes).map(|(x, t)| x / t).collect();
        let (mut next_nodes, mut next_edges) = panels.cumulative(&g);
        c = c_inner / (p as f64 + 2.0);
        replace_first_panel(panels, &mut next_nodes, &mut next_edges, |r| c * r.powi(p + 2));
        let next_da = inner_edges
            .iter()
            .zip(&theta_edges)
            .map(|(x, &t)| if t > 0.0 { x / t } else { 0.0 })
            .collect();
        ball.push(inner_edges);
        a.push(next_edges);
        da.push(next_da);
        a_nodes = next_nodes;
    }
    VolterraEdges { a, da, ball }
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|j| (j as f64).ln()).sum()
}

/// `r^{2k} / (2k)!`
pub fn coefficient_bound(k: usize, r: f64) -> f64 {
    if r == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (2.0 * k as f64 * r.ln() - ln_factorial(2 * k)).exp()
}

/// Solves the Volterra recursion `a_{k+1}(r) = ∫_0^r θ(ρ)^{-1} ∫_0^ρ θ a_k`
/// on the grid and checks `0 ≤ a_k ≤ r^{2k}/(2k)!`.
pub fn volterra_coefficients(
    model: &DensityModel,
    grid: &RadialGrid,
    k_max: usize,
) -> Result<SeriesCoefficients> {
    if k_max < 1 {
        return Err(Error::InvalidParameter("K_max must be at least 1".into()));
    }
    let edges = refine(grid.points(), VOLTERRA_PANEL);
    let panels = PanelGrid::new(&edges);
    let v = volterra_on(model, &panels, k_max);
    // Grid points are a subsequence of the panel edges.
    let mut idx = Vec::with_capacity(grid.len());
    let mut e = 0;
    for &r in grid.points() {
        while edges[e] != r {
            e += 1;
        }
        idx.push(e);
    }
    let pick = |rows: Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        rows.into_iter()
            .map(|row| idx.iter().map(|&i| row[i]).collect())
            .collect()
    };
    let coeffs = SeriesCoefficients {
        r: grid.points().to_vec(),
        a: pick(v.a),
        da: pick(v.da),
        ball: pick(v.ball),
    };
    for (k, row) in coeffs.a.iter().enumerate() {
        for (&r, &value) in coeffs.r.iter().zip(row) {
            let bound = coefficient_bound(k, r);
            let slack = BOUND_SLACK * bound;
            if !(value >= -slack && value <= bound + slack) {
                return Err(Error::CoefficientBound { k, r, value, bound });
            }
        }
    }
    Ok(coeffs)
}

/// Smallest `K` with `|L|^K r^{2K} / (2K)! < tol`.
pub fn series_terms_needed(l_abs: f64, r_max: f64, tol: f64, k_max: usize) -> Result<usize> {
    if l_abs == 0.0 || r_max == 0.0 {
        return Ok(1);
    }
    let x = l_abs.ln() + 2.0 * r_max.ln();
    let target = tol.ln();
    let mut ln_fact = 0.0;
    for k in 1..=k_max {
        ln_fact += ((2 * k - 1) as f64).ln() + ((2 * k) as f64).ln();
        if k as f64 * x - ln_fact < target {
            return Ok(k);
        }
    }
    let mut k = k_max;
    loop {
        k += 1;
        ln_fact += ((2 * k - 1) as f64).ln() + ((2 * k) as f64).ln();
        if k as f64 * x - ln_fact < target || k > 100 * k_max {
            return Err(Error::SeriesTruncation { required: k, k_max });
        }
    }
}

fn horner(coeffs: &[Vec<f64>], i: usize, l: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * l + c[i])
}

/// `φ_λ` on the grid from the truncated Volterra series.
pub fn phi_series(
    model: &DensityModel,
    lambda: Complex64,
    grid: &RadialGrid,
    tol: f64,
) -> Result<SphericalFunction> {
    phi_series_with_kmax(model, lambda, grid, tol, DEFAULT_K_MAX)
}

pub fn phi_series_with_kmax(
    model: &DensityModel,
    lambda: Complex64,
    grid: &RadialGrid,
    tol: f64,
    k_max: usize,
) -> Result<SphericalFunction> {
    let l = spectral_parameter(lambda, model.h());
    let k = series_terms_needed(l.norm(), grid.r_max(), tol, k_max)?;
    let c = volterra_coefficients(model, grid, k)?;
    let values = (0..grid.len()).map(|i| horner(&c.a, i, l)).collect();
    let derivative_values = (0..grid.len()).map(|i| horner(&c.da, i, l)).collect();
    Ok(SphericalFunction {
        lambda,
        l,
        r: grid.points().to_vec(),
        values,
        derivative_values,
        method: Method::Series,
    })
}

/// Low-order series data at a small radius, used to leave the singular
/// point of the ODE.
struct TaylorStart {
    a: [f64; TAYLOR_TERMS + 1],
    da: [f64; TAYLOR_TERMS + 1],
    ball: [f64; TAYLOR_TERMS + 1],
}

impl TaylorStart {
    fn new(model: &DensityModel, r: f64) -> Self {
        let panels = PanelGrid::new(&refine(&[0.0, r], 0.5 * r));
        let v = volterra_on(model, &panels, TAYLOR_TERMS);
        let last = panels.edges().len() - 1;
        let mut out = Self {
            a: [0.0; TAYLOR_TERMS + 1],
            da: [0.0; TAYLOR_TERMS + 1],
            ball: [0.0; TAYLOR_TERMS + 1],
        };
        for k in 0..=TAYLOR_TERMS {
            out.a[k] = v.a[k][last];
            out.da[k] = v.da[k][last];
            out.ball[k] = v.ball[k][last];
        }
        out
    }

    /// `[φ, φ', ∂_Lφ, ∂_Lφ', Φ, ∂_LΦ]`
    fn state(&self, l: Complex64) -> State<6> {
        let zero = Complex64::new(0.0, 0.0);
        let mut s = [zero; 6];
        let mut lk = Complex64::new(1.0, 0.0);
        let mut lk1 = zero;
        for k in 0..=TAYLOR_TERMS {
            s[0] += lk * self.a[k];
            s[1] += lk * self.da[k];
            s[2] += lk1 * (k as f64 * self.a[k]);
            s[3] += lk1 * (k as f64 * self.da[k]);
            s[4] += lk * self.ball[k];
            s[5] += lk1 * (k as f64 * self.ball[k]);
            lk1 = lk;
            lk *= l;
        }
        s
    }
}

fn start_radius(l: Complex64) -> f64 {
    let s = l.norm().sqrt();
    if s * TAYLOR_RADIUS > 0.05 {
        0.05 / s
    } else {
        TAYLOR_RADIUS
    }
}

fn ode_states<const N: usize>(
    model: &DensityModel,
    l: Complex64,
    radii: &[f64],
    rhs: impl Fn(f64, &State<N>) -> State<N>,
    opts: &OdeOptions,
) -> Result<Vec<State<N>>> {
    let r_t = start_radius(l);
    let project = |s: State<6>| -> State<N> {
        let mut out = [Complex64::new(0.0, 0.0); N];
        out.copy_from_slice(&s[..N]);
        out
    };
    let split = radii.partition_point(|&r| r <= r_t);
    let mut out = Vec::with_capacity(radii.len());
    for &r in &radii[..split] {
        if r == 0.0 {
            let mut s = [Complex64::new(0.0, 0.0); 6];
            s[0] = Complex64::new(1.0, 0.0);
            out.push(project(s));
        } else {
            out.push(project(TaylorStart::new(model, r).state(l)));
        }
    }
    if split < radii.len() {
        let y0 = project(TaylorStart::new(model, r_t).state(l));
        let states = integrate(rhs, r_t, y0, &radii[split..], opts).map_err(|f| {
            Error::StepUnderflow {
                r: f.r,
                lambda: lambda_of(l, model.h()),
            }
        })?;
        out.extend(states);
    }
    Ok(out)
}

/// One of the two `λ` with `spectral_parameter(λ, H) = L` (principal root).
pub fn lambda_of(l: Complex64, h: f64) -> Complex64 {
    (-l - Complex64::new(0.25 * h * h, 0.0)).sqrt()
}

/// `(φ, φ')` at ascending radii by ODE integration.
pub fn phi_ode_at(
    model: &DensityModel,
    l: Complex64,
    radii: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<(Complex64, Complex64)>> {
    let rhs = |r: f64, y: &State<2>| [y[1], l * y[0] - y[1] * model.mean_curvature(r)];
    Ok(ode_states(model, l, radii, rhs, opts)?
        .into_iter()
        .map(|s| (s[0], s[1]))
        .collect())
}

/// Full state `[φ, φ', ∂_Lφ, ∂_Lφ', Φ, ∂_LΦ]` at ascending radii.
pub fn full_state_at(
    model: &DensityModel,
    l: Complex64,
    radii: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<State<6>>> {
    let rhs = |r: f64, y: &State<6>| {
        let m = model.mean_curvature(r);
        let t = model.theta(r);
        [
            y[1],
            l * y[0] - y[1] * m,
            y[3],
            l * y[2] + y[0] - y[3] * m,
            y[0] * t,
            y[2] * t,
        ]
    };
    ode_states(model, l, radii, rhs, opts)
}

pub fn phi_ode(model: &DensityModel, lambda: Complex64, grid: &RadialGrid) -> Result<SphericalFunction> {
    let l = spectral_parameter(lambda, model.h());
    let s = phi_ode_at(model, l, grid.points(), &OdeOptions::default())?;
    Ok(SphericalFunction {
        lambda,
        l,
        r: grid.points().to_vec(),
        values: s.iter().map(|p| p.0).collect(),
        derivative_values: s.iter().map(|p| p.1).collect(),
        method: Method::Ode,
    })
}

/// Cancellation in the series is about `cosh(√|L| r)` ulps; beyond this
/// bound the ODE path is used.
const SERIES_LOSS_LIMIT: f64 = 9.0;

/// `φ_λ` by whichever path is accurate for the given `λ` and grid.
pub fn phi(model: &DensityModel, lambda: Complex64, grid: &RadialGrid) -> Result<SphericalFunction> {
    let l = spectral_parameter(lambda, model.h());
    if l.norm().sqrt() * grid.r_max() <= SERIES_LOSS_LIMIT {
        phi_series(model, lambda, grid, DEFAULT_SERIES_TOL)
    } else {
        phi_ode(model, lambda, grid)
    }
}

/// `∂^k φ_λ / ∂λ^k` on the grid, `1 ≤ k ≤ 4`, from the term-wise
/// differentiated series.
pub fn phi_lambda_derivative(
    model: &DensityModel,
    lambda: Complex64,
    k: usize,
    grid: &RadialGrid,
) -> Result<Vec<Complex64>> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidParameter(format!("derivative order {k} not in 1..=4")));
    }
    let l = spectral_parameter(lambda, model.h());
    let terms = series_terms_needed(l.norm(), grid.r_max(), DEFAULT_SERIES_TOL, DEFAULT_K_MAX)? + k;
    let c = volterra_coefficients(model, grid, terms)?;
    // d^j/dL^j of the series, j = 0..=k.
    let l_derivs = |i: usize| -> Vec<Complex64> {
        (0..=k)
            .map(|j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in (j..=terms).rev() {
                    let falling: f64 = ((m - j + 1)..=m).map(|x| x as f64).product();
                    acc = acc * l + c.a[m][i] * falling;
                }
                acc
            })
            .collect()
    };
    let dl = -2.0 * lambda;
    let fact = |n: usize| -> f64 { (1..=n).map(|x| x as f64).product() };
    Ok((0..grid.len())
        .map(|i| {
            let f = l_derivs(i);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in k.div_ceil(2)..=k {
                let coef = fact(k) / (fact(2 * j - k) * fact(k - j));
                let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                sum += f[j] * dl.powu((2 * j - k) as u32) * (coef * sign);
            }
            sum
        })
        .collect())
}

/// `Φ_λ(r) = ∫_0^r θ φ_λ` by cumulative quadrature of ODE values.
pub fn capital_phi(model: &DensityModel, lambda: Complex64, grid: &RadialGrid) -> Result<Vec<Complex64>> {
    let l = spectral_parameter(lambda, model.h());
    let edges = refine(grid.points(), VOLTERRA_PANEL);
    let panels = PanelGrid::new(&edges);
    let states = phi_ode_at(model, l, panels.nodes(), &OdeOptions::default())?;
    let theta: Vec<f64> = panels.nodes().iter().map(|&r| model.theta(r)).collect();
    let re: Vec<f64> = states.iter().zip(&theta).map(|(s, t)| s.0.re * t).collect();
    let im: Vec<f64> = states.iter().zip(&theta).map(|(s, t)| s.0.im * t).collect();
    let (_, re_e) = panels.cumulative(&re);
    let (_, im_e) = panels.cumulative(&im);
    let mut out = Vec::with_capacity(grid.len());
    let mut e = 0;
    for &r in grid.points() {
        while edges[e] != r {
            e += 1;
        }
        out.push(Complex64::new(re_e[e], im_e[e]));
    }
    Ok(out)
}

/// `φ_λ` and `φ_λ'` tabulated on quadrature panels, with spectrally
/// accurate interpolation in between.
#[derive(Debug, Clone)]
pub struct PhiTable {
    l: Complex64,
    panels: PanelGrid,
    phi: Vec<Complex64>,
    dphi: Vec<Complex64>,
}

impl PhiTable {
    pub fn new(model: &DensityModel, l: Complex64, r_max: f64, max_width: f64) -> Result<Self> {
        let width = max_width.min(1.0 / l.norm().sqrt().max(1e-300));
        let panels = PanelGrid::uniform(0.0, r_max, width);
        let s = phi_ode_at(model, l, panels.nodes(), &OdeOptions::default())?;
        Ok(Self {
            l,
            phi: s.iter().map(|p| p.0).collect(),
            dphi: s.iter().map(|p| p.1).collect(),
            panels,
        })
    }

    pub fn l(&self) -> Complex64 {
        self.l
    }

    pub fn r_max(&self) -> f64 {
        *self.panels.edges().last().unwrap()
    }

    /// `(φ(r), φ'(r))`
    pub fn eval(&self, r: f64) -> (Complex64, Complex64) {
        let (p, w) = self.panels.interpolation_weights(r);
        let base = p * w.len();
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for (j, wj) in w.iter().enumerate() {
            v += self.phi[base + j] * *wj;
            d += self.dphi[base + j] * *wj;
        }
        (v, d)
    }
}

/// Values of `φ`, `Φ` and their `L`-derivatives at one radius.
#[derive(Debug, Clone, Copy)]
pub struct PointValues {
    pub phi: Complex64,
    pub dphi_dl: Complex64,
    pub dphi_dr: Complex64,
    pub ball: Complex64,
    pub dball_dl: Complex64,
}

/// Evaluates `L ↦ φ_L(r)` and `L ↦ Φ_L(r)` at a fixed radius, through the
/// series where it is well conditioned and the ODE elsewhere.
#[derive(Debug, Clone)]
pub struct PointEvaluator {
    model: DensityModel,
    r: f64,
    a: Vec<f64>,
    da: Vec<f64>,
    ball: Vec<f64>,
}

const POINT_TERMS: usize = 120;

impl PointEvaluator {
    pub fn new(model: &DensityModel, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("radius {r} must be positive")));
        }
        let panels = PanelGrid::new(&refine(&[0.0, r], VOLTERRA_PANEL));
        let v = volterra_on(model, &panels, POINT_TERMS);
        let last = panels.edges().len() - 1;
        Ok(Self {
            model: model.clone(),
            r,
            a: v.a.iter().map(|row| row[last]).collect(),
            da: v.da.iter().map(|row| row[last]).collect(),
            ball: v.ball.iter().map(|row| row[last]).collect(),
        })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn model(&self) -> &DensityModel {
        &self.model
    }

    /// `a_k(r)` for `k = 0..=120`.
    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }

    fn series_usable(&self, l: Complex64) -> bool {
        let x = l.norm();
        let mut sum = 0.0;
        let mut xk = 1.0;
        for &a in &self.a {
            sum += a * xk;
            xk *= x;
        }
        let last = self.a[POINT_TERMS] * x.powi(POINT_TERMS as i32);
        sum <= 100.0 && last < 1e-18 * sum
    }

    pub fn eval(&self, l: Complex64) -> Result<PointValues> {
        self.eval_with(l, &OdeOptions::default())
    }

    /// As [`Self::eval`], with the given tolerances on the ODE branch.
    pub fn eval_with(&self, l: Complex64, opts: &OdeOptions) -> Result<PointValues> {
        if self.series_usable(l) {
            let zero = Complex64::new(0.0, 0.0);
            let (mut phi, mut dphi, mut dr, mut ball, mut dball) = (zero, zero, zero, zero, zero);
            for k in (0..=POINT_TERMS).rev() {
                phi = phi * l + self.a[k];
                dr = dr * l + self.da[k];
                ball = ball * l + self.ball[k];
                if k >= 1 {
                    dphi = dphi * l + self.a[k] * k as f64;
                    dball = dball * l + self.ball[k] * k as f64;
                }
            }
            return Ok(PointValues {
                phi,
                dphi_dl: dphi,
                dphi_dr: dr,
                ball,
                dball_dl: dball,
            });
        }
        let s = full_state_at(&self.model, l, &[self.r], opts)?[0];
        Ok(PointValues {
            phi: s[0],
            dphi_dl: s[2],
            dphi_dr: s[1],
            ball: s[4],
            dball_dl: s[5],
        })
    }

    /// `(φ_L(r) - 1)/L` and its `L`-derivative, regular at `L = 0`.
    pub fn deflated(&self, l: Complex64) -> Result<(Complex64, Complex64)> {
        self.deflated_with(l, &OdeOptions::default())
    }

    pub fn deflated_with(&self, l: Complex64, opts: &OdeOptions) -> Result<(Complex64, Complex64)> {
        if l.norm() < 1e-3 {
            let zero = Complex64::new(0.0, 0.0);
            let (mut g, mut dg) = (zero, zero);
            for k in (1..=POINT_TERMS).rev() {
                g = g * l + self.a[k];
                if k >= 2 {
                    dg = dg * l + self.a[k] * (k - 1) as f64;
                }
            }
            return Ok((g, dg));
        }
        let v = self.eval_with(l, opts)?;
        let g = (v.phi - 1.0) / l;
        Ok((g, (v.dphi_dl - g) / l))
    }
}
