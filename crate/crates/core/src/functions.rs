//! Sampled radial functions and even functions on the line.
//!
//! Both carry samples on a grid starting at 0 and, optionally, the exact
//! profile they were sampled from. Evaluation uses the profile when present
//! and otherwise cubic interpolation of the samples, mirrored evenly across 0.

use crate::error::{Error, Result};
use crate::profile::{GaussianBump, SharedProfile};
use crate::spherical::RadialGrid;

/// Four-point Lagrange interpolation of an even function sampled at
/// `0 = xs[0] < xs[1] < …`.
fn cubic_even(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let x = x.abs();
    let n = xs.len();
    if n == 1 {
        return ys[0];
    }
    let i = match xs.partition_point(|&v| v <= x) {
        0 => 0,
        k => (k - 1).min(n - 2),
    };
    let start = i as isize - 1;
    let start = start.min(n as isize - 4);
    let mut px = [0.0; 4];
    let mut py = [0.0; 4];
    for k in 0..4 {
        let j = start + k as isize;
        if j < 0 {
            px[k] = -xs[(-j) as usize];
            py[k] = ys[(-j) as usize];
        } else {
            px[k] = xs[j as usize];
            py[k] = ys[j as usize];
        }
    }
    let mut sum = 0.0;
    for k in 0..4 {
        let mut w = 1.0;
        for m in 0..4 {
            if m != k {
                w *= (x - px[m]) / (px[k] - px[m]);
            }
        }
        sum += w * py[k];
    }
    sum
}

/// A radial function `f(x) = f̃(r(x))`, zero for `r ≥ support_radius`.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
    support_radius: f64,
    profile: Option<SharedProfile>,
}

impl RadialFunction {
    pub fn from_samples(grid: RadialGrid, values: Vec<f64>, support_radius: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let mut values = values;
        for (v, &r) in values.iter_mut().zip(grid.points()) {
            if r >= support_radius {
                *v = 0.0;
            }
        }
        Ok(Self {
            grid,
            values,
            support_radius,
            profile: None,
        })
    }

    pub fn from_profile(profile: SharedProfile, support_radius: f64, grid: RadialGrid) -> Self {
        let values = grid
            .points()
            .iter()
            .map(|&r| if r >= support_radius { 0.0 } else { profile.value(r) })
            .collect();
        Self {
            grid,
            values,
            support_radius,
            profile: Some(profile),
        }
    }

    /// The bump sampled on a uniform grid over its support.
    pub fn from_bump(bump: GaussianBump) -> Self {
        let r = bump.support();
        let grid = RadialGrid::uniform(r, 256).expect("valid grid");
        Self::from_profile(SharedProfile::new(bump), r, grid)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn profile(&self) -> Option<&SharedProfile> {
        self.profile.as_ref()
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r >= self.support_radius {
            return 0.0;
        }
        match &self.profile {
            Some(p) => p.value(r),
            None => cubic_even(self.grid.points(), &self.values, r),
        }
    }

    /// `order`-th derivative in `r`.
    pub fn derivative(&self, r: f64, order: u32) -> f64 {
        if r >= self.support_radius {
            return 0.0;
        }
        match &self.profile {
            Some(p) => p.derivative(r, order),
            None => {
                let h = 1e-3 * self.grid.r_max();
                let f = |x: f64| cubic_even(self.grid.points(), &self.values, x);
                match order {
                    0 => f(r),
                    1 => (f(r + h) - f(r - h)) / (2.0 * h),
                    _ => (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h),
                }
            }
        }
    }

    /// A sample-free copy, for tests of the interpolation path.
    pub fn without_profile(&self) -> Self {
        Self {
            profile: None,
            ..self.clone()
        }
    }
}

/// Uniform grid `0, h, …, s_max` on the half line.
pub fn line_grid(s_max: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|i| if i == intervals { s_max } else { s_max * i as f64 / intervals as f64 })
        .collect()
}

/// An even function on the line, stored for `s ≥ 0`.
#[derive(Debug, Clone)]
pub struct EvenLineFunction {
    s: Vec<f64>,
    values: Vec<f64>,
    support_radius: f64,
    profile: Option<SharedProfile>,
}

impl EvenLineFunction {
    pub fn from_samples(s: Vec<f64>, values: Vec<f64>, support_radius: f64) -> Result<Self> {
        if s.len() != values.len() || s.len() < 4 {
            return Err(Error::InvalidParameter("need at least 4 matching samples".into()));
        }
        if s[0] != 0.0 || s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("s-grid must start at 0 and increase".into()));
        }
        Ok(Self {
            s,
            values,
            support_radius,
            profile: None,
        })
    }

    pub fn from_profile(profile: SharedProfile, support_radius: f64, s: Vec<f64>) -> Self {
        let values = s.iter().map(|&x| profile.value(x)).collect();
        Self {
            s,
            values,
            support_radius,
            profile: Some(profile),
        }
    }

    pub fn from_bump(bump: GaussianBump) -> Self {
        let r = bump.support();
        Self::from_profile(SharedProfile::new(bump), r, line_grid(r, 256))
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn s_max(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn profile(&self) -> Option<&SharedProfile> {
        self.profile.as_ref()
    }

    pub fn eval(&self, s: f64) -> f64 {
        match &self.profile {
            Some(p) => p.value(s.abs()),
            None => {
                if s.abs() >= self.support_radius {
                    0.0
                } else {
                    cubic_even(&self.s, &self.values, s)
                }
            }
        }
    }

    pub fn derivative(&self, s: f64, order: u32) -> f64 {
        let sign = if s < 0.0 && order % 2 == 1 { -1.0 } else { 1.0 };
        let a = s.abs();
        sign * match &self.profile {
            Some(p) => p.derivative(a, order),
            None => {
                let h = 1e-3 * self.s_max();
                let f = |x: f64| cubic_even(&self.s, &self.values, x);
                match order {
                    0 => f(a),
                    1 => (f(a + h) - f(a - h)) / (2.0 * h),
                    _ => (f(a + h) - 2.0 * f(a) + f(a - h)) / (h * h),
                }
            }
        }
    }

    /// Values on the mirrored grid `-s_max … s_max`.
    pub fn mirrored(&self) -> (Vec<f64>, Vec<f64>) {
        let mut s: Vec<f64> = self.s.iter().skip(1).rev().map(|x| -x).collect();
        let mut v: Vec<f64> = self.values.iter().skip(1).rev().copied().collect();
        s.extend_from_slice(&self.s);
        v.extend_from_slice(&self.values);
        (s, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_interpolation_is_fourth_order() {
        let err = |n: usize| {
            let xs = line_grid(2.0, n);
            let ys: Vec<f64> = xs.iter().map(|x| x.cos()).collect();
            (0..500)
                .map(|j| {
                    let x = 1.99 * j as f64 / 500.0;
                    (cubic_even(&xs, &ys, x) - x.cos()).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(40), err(80));
        assert!(e1 / e2 > 12.0, "{e1} {e2}");
    }

    #[test]
    fn evenness_is_structural() {
        let g = EvenLineFunction::from_bump(GaussianBump::new(0.3, 0.2));
        for s in [0.05, 0.4, 1.1] {
            assert_eq!(g.eval(s).to_bits(), g.eval(-s).to_bits());
        }
        let (s, v) = g.mirrored();
        assert_eq!(s.len(), 2 * g.s().len() - 1);
        assert_eq!(v[0], v[v.len() - 1]);
    }
}
