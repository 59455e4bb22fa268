//! Analytic one-variable profiles used as exact data behind radial and line
//! functions.

use std::fmt;
use std::sync::Arc;

/// An even, real profile `x ↦ f(x)` with derivatives.
pub trait Profile: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// `order`-th derivative; by default a fourth-order central difference.
    fn derivative(&self, x: f64, order: u32) -> f64 {
        let h = 2e-3;
        match order {
            0 => self.value(x),
            1 => {
                (self.value(x - 2.0 * h) - 8.0 * self.value(x - h) + 8.0 * self.value(x + h)
                    - self.value(x + 2.0 * h))
                    / (12.0 * h)
            }
            2 => {
                (-self.value(x - 2.0 * h) + 16.0 * self.value(x - h) - 30.0 * self.value(x)
                    + 16.0 * self.value(x + h)
                    - self.value(x + 2.0 * h))
                    / (12.0 * h * h)
            }
            _ => {
                let d = |y: f64| self.derivative(y, order - 2);
                (d(x - h) - 2.0 * d(x) + d(x + h)) / (h * h)
            }
        }
    }
}

/// Sum of two Gaussians centred at `±center`, truncated to zero beyond
/// `center + cutoff·width`, where it is below `amplitude·e^{-cutoff²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBump {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    pub cutoff: f64,
}

impl GaussianBump {
    pub const DEFAULT_CUTOFF: f64 = 6.5;

    pub fn centered(width: f64) -> Self {
        Self::new(0.0, width)
    }

    pub fn new(center: f64, width: f64) -> Self {
        Self {
            center,
            width,
            amplitude: 1.0,
            cutoff: Self::DEFAULT_CUTOFF,
        }
    }

    pub fn scaled(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn support(&self) -> f64 {
        self.center + self.cutoff * self.width
    }

    fn gaussian(&self, x: f64, c: f64, order: u32) -> f64 {
        let w = self.width;
        let u = (x - c) / w;
        let g = (-u * u).exp();
        let poly = match order {
            0 => 1.0,
            1 => -2.0 * u,
            2 => 4.0 * u * u - 2.0,
            3 => -8.0 * u * u * u + 12.0 * u,
            4 => 16.0 * u.powi(4) - 48.0 * u * u + 12.0,
            _ => return f64::NAN,
        };
        g * poly / w.powi(order as i32)
    }
}

impl Profile for GaussianBump {
    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    fn derivative(&self, x: f64, order: u32) -> f64 {
        if x.abs() > self.support() {
            return 0.0;
        }
        let mut v = self.gaussian(x, self.center, order);
        if self.center != 0.0 {
            v += self.gaussian(x, -self.center, order);
        }
        self.amplitude * v
    }
}

/// `x ↦ Σ c_j cos(ω_j x)` for `|x| ≤ reach`, zero beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineSum {
    freqs: Vec<f64>,
    coeffs: Vec<f64>,
    reach: f64,
    // set when ω_j = j·step, enabling the recurrence e^{i(j+1)x} = e^{ijx} e^{ix}
    step: Option<f64>,
}

impl CosineSum {
    pub fn new(freqs: Vec<f64>, coeffs: Vec<f64>, reach: f64) -> Self {
        assert_eq!(freqs.len(), coeffs.len());
        let step = freqs.get(1).copied().filter(|&d| {
            freqs
                .iter()
                .enumerate()
                .all(|(j, &w)| (w - j as f64 * d).abs() <= 1e-14 * w.abs().max(d))
        });
        Self {
            freqs,
            coeffs,
            reach,
            step,
        }
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }
}

impl Profile for CosineSum {
    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    fn derivative(&self, x: f64, order: u32) -> f64 {
        if x.abs() > self.reach {
            return 0.0;
        }
        // d^k/dx^k cos(ωx) = ω^k Re(i^k e^{iωx})
        let pick = |re: f64, im: f64| match order % 4 {
            0 => re,
            1 => -im,
            2 => -re,
            _ => im,
        };
        let mut sum = 0.0;
        match self.step {
            Some(d) => {
                let (s1, c1) = (d * x).sin_cos();
                let (mut re, mut im) = (1.0, 0.0);
                for (&w, &c) in self.freqs.iter().zip(&self.coeffs) {
                    sum += c * w.powi(order as i32) * pick(re, im);
                    (re, im) = (re * c1 - im * s1, re * s1 + im * c1);
                }
            }
            None => {
                for (&w, &c) in self.freqs.iter().zip(&self.coeffs) {
                    let (im, re) = (w * x).sin_cos();
                    sum += c * w.powi(order as i32) * pick(re, im);
                }
            }
        }
        sum
    }
}

/// A profile given by a closure, differentiated numerically.
pub struct FnProfile<F>(pub F);

impl<F: Fn(f64) -> f64 + Send + Sync> Profile for FnProfile<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// Shared handle to a profile.
#[derive(Clone)]
pub struct SharedProfile(pub Arc<dyn Profile>);

impl SharedProfile {
    pub fn new(p: impl Profile + 'static) -> Self {
        Self(Arc::new(p))
    }

    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(FnProfile(f)))
    }

    pub fn value(&self, x: f64) -> f64 {
        self.0.value(x)
    }

    pub fn derivative(&self, x: f64, order: u32) -> f64 {
        self.0.derivative(x, order)
    }
}

impl fmt::Debug for SharedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SharedProfile(..)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_derivatives_match_differences() {
        let b = GaussianBump::new(0.4, 0.3);
        let fd = FnProfile(|x| b.value(x));
        for x in [0.0, 0.13, 0.5, 0.9] {
            for k in 1..=2 {
                let exact = b.derivative(x, k);
                assert!((exact - fd.derivative(x, k)).abs() < 1e-6 * (1.0 + exact.abs()));
            }
        }
        assert!(b.derivative(0.0, 1).abs() < 1e-15);
        assert_eq!(b.value(b.support() + 1e-9), 0.0);
    }

    #[test]
    fn cosine_recurrence_matches_direct_sum() {
        let freqs: Vec<f64> = (0..300).map(|j| 0.37 * j as f64).collect();
        let coeffs: Vec<f64> = (0..300).map(|j| 1.0 / (1.0 + j as f64)).collect();
        let fast = CosineSum::new(freqs.clone(), coeffs.clone(), 50.0);
        let mut shifted = freqs.clone();
        shifted[5] += 1e-9;
        let direct = CosineSum::new(shifted, coeffs, 50.0);
        let exact = CosineSum { step: None, ..fast.clone() };
        assert!(fast.step.is_some() && direct.step.is_none());
        for x in [0.0, 0.3, 7.7, 41.0] {
            for k in 0..3 {
                let (a, b) = (fast.derivative(x, k), exact.derivative(x, k));
                assert!((a - b).abs() < 1e-11 * (1.0 + b.abs()), "{x} {k}: {a} {b}");
            }
        }
    }
}
