//! The Euclidean and hyperbolic planes with explicit distances, for checks of
//! sphere averaging on honest two-dimensional spaces.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{make_euclidean, make_real_hyperbolic, DensityModel};
use crate::error::{Error, Result};
use crate::quadrature::PanelGrid;
use crate::spherical::{spectral_parameter, PhiTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplicitSpace {
    Plane,
    HyperbolicPlane,
}

impl FromStr for ExplicitSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane" => Ok(Self::Plane),
            "h2" | "hyperbolic_plane" => Ok(Self::HyperbolicPlane),
            _ => Err(Error::InvalidParameter(format!("unknown space '{s}' (plane, h2)"))),
        }
    }
}

/// A point: `(x, y, 0)` in the plane, hyperboloid coordinates `(x₀, x₁, x₂)`
/// with `x₀² - x₁² - x₂² = 1` in the hyperbolic plane.
pub type Point = [f64; 3];

fn minkowski(a: &Point, b: &Point) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Smallest quadrature order accepted by [`sphere_average`].
pub const MIN_ORDER: usize = 64;

impl ExplicitSpace {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Plane => "plane",
            Self::HyperbolicPlane => "hyperbolic_plane",
        }
    }

    pub fn origin(&self) -> Point {
        match self {
            Self::Plane => [0.0, 0.0, 0.0],
            Self::HyperbolicPlane => [1.0, 0.0, 0.0],
        }
    }

    /// The density model with the same circle lengths.
    pub fn density_model(&self) -> DensityModel {
        match self {
            Self::Plane => make_euclidean(1),
            Self::HyperbolicPlane => make_real_hyperbolic(1).expect("n = 1 is valid"),
        }
    }

    /// The point at distance `r` from the origin in direction `angle`.
    pub fn polar(&self, r: f64, angle: f64) -> Point {
        self.sphere_point(&self.origin(), r, angle)
    }

    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        match self {
            Self::Plane => (a[0] - b[0]).hypot(a[1] - b[1]),
            Self::HyperbolicPlane => {
                // ⟨a-b, a-b⟩ = 4 sinh²(d/2), well conditioned for small d
                let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
                let q = minkowski(&d, &d).max(0.0);
                2.0 * (0.5 * q.sqrt()).asinh()
            }
        }
    }

    /// Orthonormal tangent frame at `p`.
    fn frame(&self, p: &Point) -> (Point, Point) {
        match self {
            Self::Plane => ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            Self::HyperbolicPlane => {
                let project = |v: Point| {
                    let c = minkowski(&v, p);
                    [v[0] + c * p[0], v[1] + c * p[1], v[2] + c * p[2]]
                };
                let normalize = |v: Point| {
                    let n = minkowski(&v, &v).sqrt();
                    [v[0] / n, v[1] / n, v[2] / n]
                };
                let e1 = normalize(project([0.0, 1.0, 0.0]));
                let v = project([0.0, 0.0, 1.0]);
                let c = minkowski(&v, &e1);
                let e2 = normalize([v[0] - c * e1[0], v[1] - c * e1[1], v[2] - c * e1[2]]);
                (e1, e2)
            }
        }
    }

    /// The point of `S_r(center)` in direction `angle`.
    pub fn sphere_point(&self, center: &Point, r: f64, angle: f64) -> Point {
        let (e1, e2) = self.frame(center);
        let (s, c) = angle.sin_cos();
        let dir = [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]];
        match self {
            Self::Plane => [center[0] + r * dir[0], center[1] + r * dir[1], 0.0],
            Self::HyperbolicPlane => {
                let (ch, sh) = (r.cosh(), r.sinh());
                [
                    ch * center[0] + sh * dir[0],
                    ch * center[1] + sh * dir[1],
                    ch * center[2] + sh * dir[2],
                ]
            }
        }
    }

    pub fn circumference(&self, r: f64) -> f64 {
        match self {
            Self::Plane => 2.0 * PI * r,
            Self::HyperbolicPlane => 2.0 * PI * r.sinh(),
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order < MIN_ORDER {
        return Err(Error::InvalidParameter(format!("quadrature order {order} is below {MIN_ORDER}")));
    }
    Ok(())
}

/// Mean of `f` over `S_r(x)` by the trapezoidal rule with `order` points.
pub fn sphere_average(space: ExplicitSpace, f: &(dyn Fn(&Point) -> f64 + Sync), x: &Point, r: f64, order: usize) -> Result<f64> {
    check_order(order)?;
    Ok(trapezoid_average(space, f, x, r, order))
}

fn trapezoid_average(space: ExplicitSpace, f: &(dyn Fn(&Point) -> f64 + Sync), x: &Point, r: f64, order: usize) -> f64 {
    let (e1, e2) = space.frame(x);
    let (ch, sh) = match space {
        ExplicitSpace::Plane => (1.0, r),
        ExplicitSpace::HyperbolicPlane => (r.cosh(), r.sinh()),
    };
    let sum: f64 = (0..order)
        .map(|j| {
            let (s, c) = (2.0 * PI * j as f64 / order as f64).sin_cos();
            let mut p = [0.0; 3];
            for k in 0..3 {
                p[k] = ch * x[k] + sh * (c * e1[k] + s * e2[k]);
            }
            f(&p)
        })
        .sum();
    sum / order as f64
}

/// `φ_λ` on `[0, r_max]` from the density model of `space`.
pub fn radial_eigenfunction(space: ExplicitSpace, lambda: f64, r_max: f64) -> Result<impl Fn(f64) -> f64 + Sync> {
    let model = space.density_model();
    let l = spectral_parameter(Complex64::new(lambda, 0.0), model.h());
    let table = PhiTable::new(&model, l, r_max, 0.1)?;
    Ok(move |r: f64| table.eval(r).0.re)
}

/// `sup_r |π_{x₀}((φ_λ)_x)(r) - φ_λ(d(x₀, x)) φ_λ(r)|` with `x₀` the origin.
pub fn displacement_identity_check(space: ExplicitSpace, lambda: f64, x: &Point, radii: &[f64], order: usize) -> Result<f64> {
    check_order(order)?;
    let o = space.origin();
    let dx = space.distance(&o, x);
    let r_top = radii.iter().cloned().fold(0.0, f64::max);
    let phi = radial_eigenfunction(space, lambda, dx + r_top + 0.5)?;
    Ok(displacement_residual(space, &phi, x, radii, order))
}

/// As [`displacement_identity_check`] with a caller-supplied `φ_λ`.
pub fn displacement_residual(
    space: ExplicitSpace,
    phi: &(dyn Fn(f64) -> f64 + Sync),
    x: &Point,
    radii: &[f64],
    order: usize,
) -> f64 {
    let o = space.origin();
    let at_x = phi(space.distance(&o, x));
    let shifted = |z: &Point| phi(space.distance(x, z));
    radii
        .par_iter()
        .map(|&r| (trapezoid_average(space, &shifted, &o, r, order) - at_x * phi(r)).abs())
        .reduce(|| 0.0, f64::max)
}

/// `sup_ρ |π(T_r f)(ρ) - T_r(π f)(ρ)|` with `π` the average about the origin
/// and `T_r f(y)` the mean of `f` over `S_r(y)`.
pub fn projector_convolution_check(
    space: ExplicitSpace,
    r: f64,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    radii: &[f64],
    order: usize,
) -> Result<f64> {
    check_order(order)?;
    let o = space.origin();
    let tf = |y: &Point| trapezoid_average(space, f, y, r, order);
    let pf = |z: &Point| trapezoid_average(space, f, &o, space.distance(&o, z), order);
    Ok(radii
        .par_iter()
        .map(|&rho| {
            let lhs = trapezoid_average(space, &tf, &o, rho, order);
            let rhs = trapezoid_average(space, &pf, &space.polar(rho, 0.0), r, order);
            (lhs - rhs).abs()
        })
        .reduce(|| 0.0, f64::max))
}

/// `∫ h dvol` over the disk of radius `radius` about the origin, in polar
/// coordinates with Gauss–Legendre panels in `ρ` and `order` angles.
pub fn disk_integral(space: ExplicitSpace, h: &(dyn Fn(&Point) -> f64 + Sync), radius: f64, order: usize) -> f64 {
    let p = PanelGrid::uniform(0.0, radius, 0.1);
    let o = space.origin();
    p.nodes()
        .par_iter()
        .zip(p.weights())
        .map(|(&rho, w)| w * space.circumference(rho) * trapezoid_average(space, h, &o, rho, order))
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

/// `|⟨π_x f, g⟩ - ⟨f, π_x g⟩|` with both pairings integrated about the origin.
pub fn projector_selfadjoint_check(
    space: ExplicitSpace,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    g: &(dyn Fn(&Point) -> f64 + Sync),
    x: &Point,
    domain_radius: f64,
    order: usize,
) -> Result<f64> {
    check_order(order)?;
    let pi = |h: &(dyn Fn(&Point) -> f64 + Sync), z: &Point| trapezoid_average(space, h, x, space.distance(x, z), order);
    let lhs = disk_integral(space, &|z| pi(f, z) * g(z), domain_radius, order);
    let rhs = disk_integral(space, &|z| f(z) * pi(g, z), domain_radius, order);
    Ok((lhs - rhs).abs())
}

/// `sup_ρ |π(π f)(ρ) - π f(ρ)|`, averaging about `x`.
pub fn idempotence_check(
    space: ExplicitSpace,
    f: &(dyn Fn(&Point) -> f64 + Sync),
    x: &Point,
    radii: &[f64],
    order: usize,
) -> Result<f64> {
    check_order(order)?;
    let pf = |z: &Point| trapezoid_average(space, f, x, space.distance(x, z), order);
    Ok(radii
        .par_iter()
        .map(|&rho| (trapezoid_average(space, &pf, x, rho, order) - trapezoid_average(space, f, x, rho, order)).abs())
        .reduce(|| 0.0, f64::max))
}
