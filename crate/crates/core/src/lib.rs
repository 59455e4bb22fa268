//! Numerical harmonic analysis on noncompact harmonic manifolds described by
//! the volume density `θ(r)` of their geodesic spheres.

pub mod density;
pub mod error;
pub mod ode;
pub mod profile;
pub mod quadrature;
pub mod functions;
pub mod spherical;
pub mod transforms;
pub mod two_radius;
pub mod pde;
pub mod asymptotics;
pub mod geometry;
pub mod config;
pub mod suite;

pub use density::{
    make_custom, make_damek_ricci, make_euclidean, make_real_hyperbolic, mean_curvature_limit,
    unit_sphere_volume, DensityKind, DensityModel,
};
pub use error::{Error, Result};
