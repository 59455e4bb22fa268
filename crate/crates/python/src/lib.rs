//! Python bindings. Reports come back as plain dicts and lists.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use harmonic_core::config::ModelConfig;
use harmonic_core::functions::{line_grid, RadialFunction};
use harmonic_core::geometry::{
    displacement_identity_check, idempotence_check, projector_selfadjoint_check, ExplicitSpace, Point,
};
use harmonic_core::pde::{heat_identity_check, propagation_slope, HeatOptions, WaveOptions};
use harmonic_core::profile::GaussianBump;
use harmonic_core::spherical::{phi, phi_ode, phi_series, RadialGrid, DEFAULT_SERIES_TOL};
use harmonic_core::transforms::{abel, abel_inverse, spherical_fourier};
use harmonic_core::two_radius::{self, LBox, Target};
use harmonic_core::{asymptotics, suite};

create_exception!(harmonic, HarmonicError, PyException);

fn err(e: harmonic_core::Error) -> PyErr {
    HarmonicError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| HarmonicError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn target(name: &str) -> PyResult<Target> {
    name.parse().map_err(err)
}

fn lbox(b: Option<(f64, f64, f64, f64)>) -> LBox {
    b.map(|(a, b, c, d)| LBox::new(a, b, c, d)).unwrap_or_default()
}

fn space(name: &str) -> PyResult<ExplicitSpace> {
    name.parse().map_err(err)
}

/// A harmonic model space given by its sphere density θ(r).
#[pyclass(frozen, skip_from_py_object, name = "DensityModel", module = "harmonic")]
#[derive(Clone)]
struct PyModel(harmonic_core::DensityModel);

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn euclidean(n: u32) -> Self {
        Self(harmonic_core::make_euclidean(n))
    }

    #[staticmethod]
    fn hyperbolic(n: u32) -> PyResult<Self> {
        harmonic_core::make_real_hyperbolic(n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn damek_ricci(m: u32, k: u32) -> PyResult<Self> {
        harmonic_core::make_damek_ricci(m, k).map(Self).map_err(err)
    }

    #[staticmethod]
    fn custom(n: u32, theta: &str) -> PyResult<Self> {
        harmonic_core::make_custom(n, theta).map(Self).map_err(err)
    }

    /// Model from `key = value` config text.
    #[staticmethod]
    fn from_config(text: &str) -> PyResult<Self> {
        ModelConfig::parse(text).and_then(|c| c.build()).map(Self).map_err(err)
    }

    #[getter]
    fn name(&self) -> &str {
        self.0.name()
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.0.dim()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.0.h()
    }

    fn theta(&self, r: f64) -> f64 {
        self.0.theta(r)
    }

    fn log_theta(&self, r: f64) -> f64 {
        self.0.log_theta(r)
    }

    fn theta_prime(&self, r: f64) -> f64 {
        self.0.theta_prime(r)
    }

    fn mean_curvature(&self, r: f64) -> f64 {
        self.0.mean_curvature(r)
    }

    fn __repr__(&self) -> String {
        format!("DensityModel('{}', dim={}, h={})", self.0.name(), self.0.dim(), self.0.h())
    }
}

/// `(r, φ_λ(r), φ_λ'(r))` on a uniform grid of `[0, r_max]`.
#[pyfunction]
#[pyo3(signature = (model, lam, r_max, intervals=200, method="auto"))]
#[allow(clippy::type_complexity)]
fn spherical_function(
    model: &PyModel,
    lam: Complex64,
    r_max: f64,
    intervals: usize,
    method: &str,
) -> PyResult<(Vec<f64>, Vec<Complex64>, Vec<Complex64>)> {
    let grid = RadialGrid::uniform(r_max, intervals).map_err(err)?;
    let f = match method {
        "auto" => phi(&model.0, lam, &grid),
        "series" => phi_series(&model.0, lam, &grid, DEFAULT_SERIES_TOL),
        "ode" => phi_ode(&model.0, lam, &grid),
        other => return Err(HarmonicError::new_err(format!("unknown method `{other}`"))),
    }
    .map_err(err)?;
    Ok((f.r, f.values, f.derivative_values))
}

/// Zeros in `L` of the target function at radius `r`.
#[pyfunction]
#[pyo3(signature = (model, r, target="sphere", r#box=None, max_zeros=200))]
fn zeros<'py>(
    py: Python<'py>,
    model: &PyModel,
    r: f64,
    target: &str,
    r#box: Option<(f64, f64, f64, f64)>,
    max_zeros: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let z = two_radius::find_l_zeros(&model.0, r, self::target(target)?, lbox(r#box), max_zeros).map_err(err)?;
    report(py, &z)
}

/// Radii `r₂ ≤ r_max` sharing a zero with `r₁`.
#[pyfunction]
#[pyo3(signature = (model, r1, r_max, target="sphere", r#box=None))]
fn bad_radii(
    model: &PyModel,
    r1: f64,
    r_max: f64,
    target: &str,
    r#box: Option<(f64, f64, f64, f64)>,
) -> PyResult<Vec<f64>> {
    two_radius::bad_radii(&model.0, r1, self::target(target)?, lbox(r#box), r_max).map_err(err)
}

/// Accept or reject the radius pair `(r1, r2)`.
#[pyfunction]
#[pyo3(signature = (model, r1, r2, target="sphere", r#box=None))]
fn certify<'py>(
    py: Python<'py>,
    model: &PyModel,
    r1: f64,
    r2: f64,
    target: &str,
    r#box: Option<(f64, f64, f64, f64)>,
) -> PyResult<Bound<'py, PyAny>> {
    let c = two_radius::certify_pair(&model.0, r1, r2, self::target(target)?, lbox(r#box)).map_err(err)?;
    report(py, &c)
}

fn bump(center: f64, width: f64) -> PyResult<RadialFunction> {
    if !(center >= 0.0 && width > 0.0) {
        return Err(HarmonicError::new_err("bump needs center >= 0 and width > 0"));
    }
    Ok(RadialFunction::from_bump(GaussianBump::new(center, width)))
}

/// Abel transform of the Gaussian bump `exp(-((r - center)/width)²)`,
/// sampled at `s = 0 .. s_max`.
#[pyfunction]
#[pyo3(signature = (model, center, width, s_max=None, samples=257))]
fn abel_bump(
    model: &PyModel,
    center: f64,
    width: f64,
    s_max: Option<f64>,
    samples: usize,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let f = bump(center, width)?;
    let s = line_grid(s_max.unwrap_or(f.support_radius()), samples.max(5) - 1);
    let g = abel(&model.0, &f, &s).map_err(err)?;
    let values = s.iter().map(|&x| g.eval(x)).collect();
    Ok((s, values))
}

/// Largest error of `abel_inverse(abel(f))` against `f` for the bump.
#[pyfunction]
fn abel_round_trip(model: &PyModel, center: f64, width: f64) -> PyResult<f64> {
    let f = bump(center, width)?;
    let r = f.support_radius();
    let back = abel_inverse(&model.0, &abel(&model.0, &f, &line_grid(r, 128)).map_err(err)?).map_err(err)?;
    Ok((0..=400)
        .map(|i| {
            let x = r * i as f64 / 400.0;
            (back.eval(x) - f.eval(x)).abs()
        })
        .fold(0.0, f64::max))
}

/// Spherical Fourier transform of the bump at the given real `λ`.
#[pyfunction]
fn fourier_bump(model: &PyModel, center: f64, width: f64, lambdas: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(spherical_fourier(&model.0, &bump(center, width)?, &lambdas).map_err(err)?.values)
}

/// Observed front speed of the radial wave equation (close to 1).
#[pyfunction]
fn wave_speed(model: &PyModel) -> PyResult<f64> {
    propagation_slope(&model.0, &bump(0.0, 0.05)?, &WaveOptions::default()).map_err(err)
}

/// Heat multipliers against `exp(-(λ² + H²/4) t)`.
#[pyfunction]
#[pyo3(signature = (model, t, lambdas, width=0.1))]
fn heat_check<'py>(
    py: Python<'py>,
    model: &PyModel,
    t: f64,
    lambdas: Vec<f64>,
    width: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let c = heat_identity_check(&model.0, t, &lambdas, width, &HeatOptions::default()).map_err(err)?;
    report(py, &c)
}

/// Volume growth, Dirichlet ground values and the Cheeger chain up to `r_max`.
#[pyfunction]
#[pyo3(signature = (model, r_max=40.0))]
fn cheeger<'py>(py: Python<'py>, model: &PyModel, r_max: f64) -> PyResult<Bound<'py, PyAny>> {
    let r = asymptotics::cheeger_chain_report(&model.0, r_max).map_err(err)?;
    report(py, &r)
}

/// Residual of one geometric identity on `plane` or `hyperbolic_plane`:
/// `displacement`, `selfadjoint` or `idempotence`.
#[pyfunction]
#[pyo3(signature = (space, test, order=64))]
fn geo_check(space: &str, test: &str, order: usize) -> PyResult<f64> {
    let sp = self::space(space)?;
    let c1 = sp.polar(0.5, 0.2);
    let c2 = sp.polar(0.8, 2.0);
    let f = move |p: &Point| (-(sp.distance(&c1, p) / 0.4).powi(2)).exp();
    let g = move |p: &Point| (-(sp.distance(&c2, p) / 0.5).powi(2)).exp();
    let x = sp.polar(0.7, -1.0);
    let radii: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
    match test {
        "displacement" => displacement_identity_check(sp, 1.0, &x, &radii, order),
        "selfadjoint" => projector_selfadjoint_check(sp, &f, &g, &x, 6.0, order),
        "idempotence" => idempotence_check(sp, &f, &x, &radii, order),
        other => return Err(HarmonicError::new_err(format!("unknown test `{other}`"))),
    }
    .map_err(err)
}

/// The built-in check battery.
#[pyfunction]
#[pyo3(signature = (quick=true, seed=two_radius::DEFAULT_SEED))]
fn run_suite<'py>(py: Python<'py>, quick: bool, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| suite::run_suite(quick, seed));
    report(py, &r)
}

#[pymodule]
fn harmonic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HarmonicError", m.py().get_type::<HarmonicError>())?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(spherical_function, m)?)?;
    m.add_function(wrap_pyfunction!(zeros, m)?)?;
    m.add_function(wrap_pyfunction!(bad_radii, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(abel_bump, m)?)?;
    m.add_function(wrap_pyfunction!(abel_round_trip, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_bump, m)?)?;
    m.add_function(wrap_pyfunction!(wave_speed, m)?)?;
    m.add_function(wrap_pyfunction!(heat_check, m)?)?;
    m.add_function(wrap_pyfunction!(cheeger, m)?)?;
    m.add_function(wrap_pyfunction!(geo_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
