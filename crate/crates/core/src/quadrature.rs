//! Composite Gauss–Legendre quadrature on panels, including cumulative
//! (indefinite) integration at the interior nodes of every panel.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes per panel used throughout the crate.
pub const PANEL_ORDER: usize = 8;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Reference {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Barycentric interpolation weights of the nodes.
    bary: Vec<f64>,
    /// Row-major `cum[j * order + l]`: integral from -1 to node j of the
    /// l-th Lagrange basis polynomial.
    cum: Vec<f64>,
}

fn reference() -> &'static Reference {
    static REF: OnceLock<Reference> = OnceLock::new();
    REF.get_or_init(|| {
        let order = PANEL_ORDER;
        let (nodes, weights) = gauss_legendre(order);
        let mut cum = vec![0.0; order * order];
        for j in 0..order {
            let half = 0.5 * (nodes[j] + 1.0);
            for l in 0..order {
                let mut s = 0.0;
                for m in 0..order {
                    let t = -1.0 + half * (nodes[m] + 1.0);
                    s += weights[m] * lagrange(&nodes, l, t);
                }
                cum[j * order + l] = half * s;
            }
        }
        let bary = (0..order)
            .map(|j| {
                1.0 / (0..order)
                    .filter(|&k| k != j)
                    .map(|k| nodes[j] - nodes[k])
                    .product::<f64>()
            })
            .collect();
        Reference {
            nodes,
            weights,
            bary,
            cum,
        }
    })
}

fn lagrange(nodes: &[f64], l: usize, t: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != l)
        .map(|(_, &xm)| (t - xm) / (nodes[l] - xm))
        .product()
}

/// Panels between consecutive `edges`, each carrying `PANEL_ORDER` nodes.
#[derive(Debug, Clone)]
pub struct PanelGrid {
    edges: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelGrid {
    pub fn new(edges: &[f64]) -> Self {
        assert!(edges.len() >= 2, "need at least one panel");
        let r = reference();
        let mut nodes = Vec::with_capacity((edges.len() - 1) * PANEL_ORDER);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            debug_assert!(b > a);
            let half = 0.5 * (b - a);
            for (x, wt) in r.nodes.iter().zip(&r.weights) {
                nodes.push(a + half * (x + 1.0));
                weights.push(half * wt);
            }
        }
        Self {
            edges: edges.to_vec(),
            nodes,
            weights,
        }
    }

    /// Uniform panels of width at most `max_width` covering `[a, b]`.
    pub fn uniform(a: f64, b: f64, max_width: f64) -> Self {
        let n = (((b - a) / max_width).ceil() as usize).max(1);
        let edges: Vec<f64> = (0..=n)
            .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
            .collect();
        Self::new(&edges)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn panels(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, w)| f(x) * w)
            .sum()
    }

    /// Panel containing `x` (clamped to the grid) and the weights of its
    /// nodes in the polynomial interpolant at `x`.
    pub fn interpolation_weights(&self, x: f64) -> (usize, [f64; PANEL_ORDER]) {
        let p = match self.edges.partition_point(|&e| e <= x) {
            0 => 0,
            i => (i - 1).min(self.panels() - 1),
        };
        let (a, b) = (self.edges[p], self.edges[p + 1]);
        let t = (2.0 * x - a - b) / (b - a);
        let r = reference();
        let mut w = [0.0; PANEL_ORDER];
        for j in 0..PANEL_ORDER {
            let d = t - r.nodes[j];
            if d == 0.0 {
                w = [0.0; PANEL_ORDER];
                w[j] = 1.0;
                return (p, w);
            }
            w[j] = r.bary[j] / d;
        }
        let total: f64 = w.iter().sum();
        for v in &mut w {
            *v /= total;
        }
        (p, w)
    }

    /// Polynomial interpolation of node values within the panel holding `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let (p, w) = self.interpolation_weights(x);
        let v = &values[p * PANEL_ORDER..(p + 1) * PANEL_ORDER];
        w.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Indefinite integral from the first edge, evaluated at every node and
    /// at every edge.
    pub fn cumulative(&self, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let r = reference();
        let order = PANEL_ORDER;
        let mut at_nodes = vec![0.0; values.len()];
        let mut at_edges = vec![0.0; self.edges.len()];
        let mut acc = 0.0;
        for p in 0..self.panels() {
            let half = 0.5 * (self.edges[p + 1] - self.edges[p]);
            let v = &values[p * order..(p + 1) * order];
            for j in 0..order {
                let row = &r.cum[j * order..(j + 1) * order];
                let s: f64 = row.iter().zip(v).map(|(c, x)| c * x).sum();
                at_nodes[p * order + j] = acc + half * s;
            }
            let total: f64 = r.weights.iter().zip(v).map(|(w, x)| w * x).sum();
            acc += half * total;
            at_edges[p + 1] = acc;
        }
        (at_nodes, at_edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights_integrate_polynomials_exactly() {
        for n in [1, 2, 5, 8, 16, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let g = PanelGrid::uniform(0.0, 3.0, 0.25);
        let vals: Vec<f64> = g.nodes().iter().map(|x| x.cos()).collect();
        let (at_nodes, at_edges) = g.cumulative(&vals);
        for (x, v) in g.nodes().iter().zip(&at_nodes) {
            assert!((v - x.sin()).abs() < 1e-14);
        }
        for (x, v) in g.edges().iter().zip(&at_edges) {
            assert!((v - x.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn panel_interpolation_is_spectral() {
        let g = PanelGrid::uniform(0.0, 2.0, 0.2);
        let vals: Vec<f64> = g.nodes().iter().map(|x| (3.0 * x).cos()).collect();
        for j in 0..=200 {
            let x = 2.0 * j as f64 / 200.0;
            assert!((g.interpolate(&vals, x) - (3.0 * x).cos()).abs() < 1e-10);
        }
        assert_eq!(g.interpolate(&vals, g.nodes()[5]), vals[5]);
    }
}
