//! Harmonic model spaces described by the volume density `θ(r)` of their
//! geodesic spheres, normalized so that `vol S_r = ω_n θ(r)` and
//! `θ(r) / r^n → 1` as `r → 0`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Radius beyond which θ is evaluated through its logarithm.
const LOG_SPACE_RADIUS: f64 = 30.0;
/// Radius at which the sphere mean curvature is taken as its limit `H`.
const LIMIT_RADIUS: f64 = 200.0;
/// Custom densities are validated (and their `H` read off) up to this radius.
const CUSTOM_LIMIT_RADIUS: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub enum DensityKind {
    Euclidean { n: u32 },
    Hyperbolic { n: u32 },
    DamekRicci { m: u32, k: u32 },
    Custom { n: u32, expr: String },
}

thread_local! {
    static BUILTINS: meval::Context<'static> = meval::Context::new();
}

/// A harmonic model space. Immutable once built; cheap to clone.
#[derive(Clone)]
pub struct DensityModel {
    name: String,
    kind: DensityKind,
    n: u32,
    h: f64,
    sphere_const: f64,
    custom: Option<Arc<meval::Expr>>,
}

impl fmt::Debug for DensityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityModel")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("dim", &self.dim())
            .field("h", &self.h)
            .finish()
    }
}

/// Volume of the unit n-sphere; `ω_0 = 2` counts the two points of S⁰.
pub fn unit_sphere_volume(n: u32) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 1.0) * unit_sphere_volume(n - 2),
    }
}

/// `ln sinh(x)` for `x > 0`, accurate for large `x`.
fn ln_sinh(x: f64) -> f64 {
    if x < LOG_SPACE_RADIUS {
        x.sinh().ln()
    } else {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

fn ln_cosh(x: f64) -> f64 {
    if x < LOG_SPACE_RADIUS {
        x.cosh().ln()
    } else {
        x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// `x coth x`, finite at 0.
fn x_coth(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 3.0
    } else {
        x / x.tanh()
    }
}

pub fn make_euclidean(n: u32) -> DensityModel {
    DensityModel {
        name: format!("euclidean({n})"),
        kind: DensityKind::Euclidean { n },
        n,
        h: 0.0,
        sphere_const: unit_sphere_volume(n),
        custom: None,
    }
}

/// Real hyperbolic space of curvature −1 and dimension `n + 1`.
pub fn make_real_hyperbolic(n: u32) -> Result<DensityModel> {
    if n < 1 {
        return Err(Error::InvalidParameter("hyperbolic space needs n >= 1".into()));
    }
    Ok(DensityModel {
        name: format!("hyperbolic({n})"),
        kind: DensityKind::Hyperbolic { n },
        n,
        h: n as f64,
        sphere_const: unit_sphere_volume(n),
        custom: None,
    })
}

/// Damek–Ricci space with `m`-dimensional first and `k`-dimensional centre
/// layer; `H` is read off as the large-radius limit of `θ'/θ`.
pub fn make_damek_ricci(m: u32, k: u32) -> Result<DensityModel> {
    if m < 1 || k < 1 {
        return Err(Error::InvalidParameter("Damek-Ricci needs m >= 1 and k >= 1".into()));
    }
    let mut model = DensityModel {
        name: format!("damek-ricci({m},{k})"),
        kind: DensityKind::DamekRicci { m, k },
        n: m + k,
        h: 0.0,
        sphere_const: unit_sphere_volume(m + k),
        custom: None,
    };
    model.h = model.mean_curvature(LIMIT_RADIUS);
    Ok(model)
}

/// A user density `θ(r)` given as an expression in `r`. The expression is
/// checked against the small-radius normalization, monotonicity of θ and
/// monotone decrease of `θ'/θ`; any violation is an error.
pub fn make_custom(n: u32, expr: &str) -> Result<DensityModel> {
    let parsed: meval::Expr = expr
        .parse()
        .map_err(|e| Error::Config(format!("cannot parse theta `{expr}`: {e}")))?;
    BUILTINS
        .with(|ctx| parsed.eval_with_context((("r", 1.0), ctx)))
        .map_err(|e| Error::Config(format!("theta `{expr}` must depend only on r: {e}")))?;
    let mut model = DensityModel {
        name: format!("custom({expr})"),
        kind: DensityKind::Custom {
            n,
            expr: expr.to_string(),
        },
        n,
        h: 0.0,
        sphere_const: unit_sphere_volume(n),
        custom: Some(Arc::new(parsed)),
    };
    model.validate()?;
    model.h = model.mean_curvature(CUSTOM_LIMIT_RADIUS).max(0.0);
    Ok(model)
}

impl DensityModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    /// `n` in `dim = n + 1`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.n + 1
    }

    /// Mean curvature of horospheres.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// `ω_n`, the volume of the unit n-sphere.
    pub fn sphere_const(&self) -> f64 {
        self.sphere_const
    }

    pub fn log_theta(&self, r: f64) -> f64 {
        let n = self.n as f64;
        match &self.kind {
            DensityKind::Euclidean { .. } => {
                if self.n == 0 {
                    0.0
                } else {
                    n * r.ln()
                }
            }
            DensityKind::Hyperbolic { .. } => n * ln_sinh(r),
            DensityKind::DamekRicci { k, .. } => {
                n * std::f64::consts::LN_2 + n * ln_sinh(0.5 * r) + *k as f64 * ln_cosh(0.5 * r)
            }
            DensityKind::Custom { .. } => self.custom_theta(r).ln(),
        }
    }

    pub fn theta(&self, r: f64) -> f64 {
        match &self.kind {
            DensityKind::Euclidean { n } => r.powi(*n as i32),
            DensityKind::Hyperbolic { n } if r < LOG_SPACE_RADIUS => r.sinh().powi(*n as i32),
            DensityKind::DamekRicci { m, k } if r < LOG_SPACE_RADIUS => {
                let h = 0.5 * r;
                (2.0 * h.sinh()).powi((m + k) as i32) * h.cosh().powi(*k as i32)
            }
            DensityKind::Custom { .. } => self.custom_theta(r),
            _ => self.log_theta(r).exp(),
        }
    }

    pub fn theta_prime(&self, r: f64) -> f64 {
        match &self.kind {
            DensityKind::Euclidean { n } => {
                if *n == 0 {
                    0.0
                } else {
                    *n as f64 * r.powi(*n as i32 - 1)
                }
            }
            _ => self.theta(r) * self.mean_curvature(r),
        }
    }

    /// `θ'(r)/θ(r)`, the mean curvature of the geodesic sphere of radius `r`.
    pub fn mean_curvature(&self, r: f64) -> f64 {
        let n = self.n as f64;
        match &self.kind {
            DensityKind::Euclidean { .. } => n / r,
            DensityKind::Hyperbolic { .. } => n / r.tanh(),
            DensityKind::DamekRicci { m, k } => {
                let h = 0.5 * r;
                0.5 * (*m + *k) as f64 / h.tanh() + 0.5 * *k as f64 * h.tanh()
            }
            DensityKind::Custom { .. } => self.custom_log_derivative(r),
        }
    }

    /// `r θ'(r)/θ(r)`, which tends to `n` at the origin.
    pub fn r_mean_curvature(&self, r: f64) -> f64 {
        let n = self.n as f64;
        match &self.kind {
            DensityKind::Euclidean { .. } => n,
            DensityKind::Hyperbolic { .. } => n * x_coth(r),
            DensityKind::DamekRicci { m, k } => {
                let h = 0.5 * r;
                (*m + *k) as f64 * x_coth(h) + 0.5 * *k as f64 * r * h.tanh()
            }
            DensityKind::Custom { .. } => {
                if r < 1e-6 {
                    n
                } else {
                    r * self.custom_log_derivative(r)
                }
            }
        }
    }

    fn custom_theta(&self, r: f64) -> f64 {
        match &self.custom {
            Some(e) => BUILTINS
                .with(|ctx| e.eval_with_context((("r", r), ctx)))
                .unwrap_or(f64::NAN),
            None => unreachable!("custom density without expression"),
        }
    }

    fn custom_log_derivative(&self, r: f64) -> f64 {
        let d = 1e-3 * r.min(1.0);
        let g = |x: f64| self.custom_theta(x).ln();
        (-g(r + 2.0 * d) + 8.0 * g(r + d) - 8.0 * g(r - d) + g(r - 2.0 * d)) / (12.0 * d)
    }

    fn validate(&self) -> Result<()> {
        let reject = |reason: String| Error::InvalidDensity {
            model: self.name.clone(),
            reason,
        };
        let n = self.n as i32;
        for r in [1e-3, 5e-4, 1e-4] {
            let ratio = self.theta(r) / r.powi(n);
            if !(ratio.is_finite() && (ratio - 1.0).abs() <= 1e-5) {
                return Err(reject(format!(
                    "theta(r)/r^{n} = {ratio} at r = {r}, expected 1 within 1e-5"
                )));
            }
        }
        let samples: Vec<f64> = (1..=1000).map(|j| CUSTOM_LIMIT_RADIUS * j as f64 / 1000.0).collect();
        let mut prev_theta = 0.0;
        let mut prev_curv = f64::INFINITY;
        for &r in &samples {
            let t = self.theta(r);
            if !(t.is_finite() && t > 0.0) {
                return Err(reject(format!("theta({r}) = {t} is not positive and finite")));
            }
            if t < prev_theta * (1.0 - 1e-12) {
                return Err(reject(format!("theta decreases near r = {r}")));
            }
            prev_theta = t;
            let c = self.mean_curvature(r);
            if c > prev_curv + 1e-7 * prev_curv.abs().max(1.0) {
                return Err(reject(format!("theta'/theta increases near r = {r}")));
            }
            if c < -1e-8 {
                return Err(reject(format!("theta'/theta negative at r = {r}")));
            }
            prev_curv = c;
        }
        Ok(())
    }
}

/// `θ'(r_max)/θ(r_max)`, an upper bound for `H` converging to it as
/// `r_max → ∞`.
pub fn mean_curvature_limit(model: &DensityModel, r_max: f64) -> Result<f64> {
    if !(r_max > 1.0) {
        return Err(Error::InvalidParameter(format!("r_max = {r_max} must exceed 1")));
    }
    if !model.log_theta(r_max).is_finite() {
        return Err(Error::Overflow { r: r_max });
    }
    let c = model.mean_curvature(r_max);
    if !c.is_finite() {
        return Err(Error::Overflow { r: r_max });
    }
    Ok(c)
}
