//! Adaptive Dormand–Prince 5(4) integrator for small complex systems.

use num_complex::Complex64;

pub type State<const N: usize> = [Complex64; N];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            h_init: 1e-4,
            h_min: 1e-13,
            max_steps: 5_000_000,
        }
    }
}

impl OdeOptions {
    pub fn loose() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            ..Self::default()
        }
    }
}

/// Position where the step size underflowed or the step budget ran out.
#[derive(Debug, Clone, Copy)]
pub struct StepFailure {
    pub r: f64,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = rhs(r, y)` from `r0` and returns the state at each of the
/// ascending `targets` (all `>= r0`).
pub fn integrate<const N: usize, F>(
    rhs: F,
    r0: f64,
    y0: State<N>,
    targets: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<State<N>>, StepFailure>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(targets.len());
    let mut r = r0;
    let mut y = y0;
    let mut h = opts.h_init;
    let mut k = [[zero; N]; 7];
    k[0] = rhs(r, &y);
    let mut steps = 0usize;

    for &target in targets {
        debug_assert!(target >= r);
        while target - r > 1e-15 * target.abs().max(1.0) {
            steps += 1;
            if steps > opts.max_steps || h < opts.h_min {
                return Err(StepFailure { r });
            }
            let last = h >= target - r;
            let step = if last { target - r } else { h };

            for s in 1..7 {
                let mut ys = y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    let mut acc = zero;
                    for j in 0..s {
                        acc += k[j][i] * A[s][j];
                    }
                    *yi += acc * step;
                }
                k[s] = rhs(r + C[s] * step, &ys);
            }
            // k[6] was evaluated at the 5th-order solution (FSAL).
            let mut y_new = y;
            for (i, yi) in y_new.iter_mut().enumerate() {
                let mut acc = zero;
                for j in 0..6 {
                    acc += k[j][i] * A[6][j];
                }
                *yi += acc * step;
            }
            let mut err: f64 = 0.0;
            for i in 0..N {
                let mut e = zero;
                for j in 0..7 {
                    e += k[j][i] * E[j];
                }
                let scale = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                err = err.max((e * step).norm() / scale);
            }
            if err <= 1.0 {
                r = if last { target } else { r + step };
                y = y_new;
                k[0] = k[6];
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || fac < 1.0 {
                    h = step * fac;
                }
            } else {
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let targets: Vec<f64> = (1..=20).map(|j| j as f64 * 0.5).collect();
        let sol = integrate(
            |_, y: &State<2>| [y[1], -y[0]],
            0.0,
            [one, i * 0.0],
            &targets,
            &OdeOptions::default(),
        )
        .unwrap();
        for (t, y) in targets.iter().zip(&sol) {
            assert!((y[0].re - t.cos()).abs() < 1e-11);
            assert!((y[1].re + t.sin()).abs() < 1e-11);
        }
    }

    #[test]
    fn complex_growth() {
        let mu = Complex64::new(0.3, 2.0);
        let sol = integrate(
            |_, y: &State<1>| [y[0] * mu],
            0.0,
            [Complex64::new(1.0, 0.0)],
            &[3.0],
            &OdeOptions::default(),
        )
        .unwrap();
        let exact = (mu * 3.0).exp();
        assert!((sol[0][0] - exact).norm() < 1e-11 * exact.norm());
    }
}
