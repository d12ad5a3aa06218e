//! Quadrature rules for the Archimedean checks: Gauss-Legendre panels
//! for truncated oscillatory axes and Gauss-Hermite for Gaussian axes,
//! with node-doubling error estimates.

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Initial guess (Chebyshev-like), then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Hermite nodes and weights for the weight e^(-x^2).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let mut x = 0.0f64;
    for i in 0..(n + 1) / 2 {
        // Stroud-Secrest style initial guesses.
        x = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => x - 1.14 * (n as f64).powf(0.426) / x,
            2 => 1.86 * x - 0.86 * nodes[0],
            3 => 1.91 * x - 0.91 * nodes[1],
            _ => 2.0 * x - nodes[i - 2],
        };
        for _ in 0..200 {
            let (h, dh) = hermite_and_deriv(n, x);
            let dx = h / dh;
            x -= dx;
            if dx.abs() < 1e-14 * (1.0 + x.abs()) {
                break;
            }
        }
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        // w_i = 2^(n-1) n! sqrt(pi) / (n^2 H_{n-1}(x_i)^2)
        let hnm1 = hermite_value(n - 1, x);
        let wi = 2.0f64.powi(n as i32 - 1) * factorial(n) * sqrt_pi / ((n * n) as f64 * hnm1 * hnm1);
        weights[i] = wi;
        weights[n - 1 - i] = wi;
    }
    (nodes, weights)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn hermite_value(n: usize, x: f64) -> f64 {
    let mut h0 = 1.0;
    let mut h1 = 2.0 * x;
    if n == 0 {
        return h0;
    }
    for k in 2..=n {
        let hk = 2.0 * x * h1 - 2.0 * (k as f64 - 1.0) * h0;
        h0 = h1;
        h1 = hk;
    }
    h1
}

fn hermite_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let h = hermite_value(n, x);
    let dh = if n == 0 {
        0.0
    } else {
        2.0 * n as f64 * hermite_value(n - 1, x)
    };
    (h, dh)
}

/// One axis of a tensor-product rule: explicit nodes and weights.
#[derive(Clone, Debug)]
pub struct Axis {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Axis {
    /// Gauss-Legendre panels over consecutive breakpoints.
    pub fn panels(breaks: &[f64], nodes_per_panel: usize) -> Axis {
        let (xs, ws) = gauss_legendre(nodes_per_panel);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, wt) in xs.iter().zip(&ws) {
                nodes.push(mid + half * x);
                weights.push(half * wt);
            }
        }
        Axis { nodes, weights }
    }

    /// Uniform panels on [a, b] with a target panel width.
    pub fn uniform(a: f64, b: f64, panel_width: f64, nodes_per_panel: usize) -> Axis {
        let n = ((b - a) / panel_width).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        Axis::panels(&breaks, nodes_per_panel)
    }

    /// Symmetric graded panels out to radius r: widths grow geometrically.
    pub fn graded_symmetric(r: f64, first: f64, nodes_per_panel: usize) -> Axis {
        let mut edges = vec![0.0f64];
        let mut w = first;
        while *edges.last().unwrap() < r {
            let next = (edges.last().unwrap() + w).min(r);
            edges.push(next);
            w *= 2.0;
        }
        let mut breaks: Vec<f64> = edges.iter().rev().map(|x| -x).collect();
        breaks.extend(edges.iter().skip(1));
        Axis::panels(&breaks, nodes_per_panel)
    }

    /// Gauss-Hermite axis for weight e^(-c x^2): integrates
    /// f(x) e^(-c x^2) dx with the weight absorbed.
    pub fn hermite(n: usize, c: f64) -> Axis {
        let (xs, ws) = gauss_hermite(n);
        let s = c.sqrt();
        Axis {
            nodes: xs.iter().map(|x| x / s).collect(),
            weights: ws.iter().map(|w| w / s).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Requested shape of a tensor rule, with the doubling-based error probe.
#[derive(Clone, Debug)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    pub target_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_panel: 12,
            target_tol: 1e-8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_exactness() {
        let (x, w) = gauss_legendre(8);
        // integral of x^10 over [-1,1] needs n >= 6; x^14 = 2/15 with n=8.
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((got - 2.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_gaussian_moments() {
        let (x, w) = gauss_hermite(20);
        let m0: f64 = w.iter().sum();
        assert!((m0 - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((m2 - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        // e^{-x^2} cos x integrates to sqrt(pi) e^{-1/4}.
        let mc: f64 = x.iter().zip(&w).map(|(x, w)| w * x.cos()).sum();
        assert!((mc - std::f64::consts::PI.sqrt() * (-0.25f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn scaled_hermite_axis() {
        // integral over R of e^{-2 pi x^2} dx = 1/sqrt(2).
        let c = 2.0 * std::f64::consts::PI;
        let axis = Axis::hermite(16, c);
        let got: f64 = axis.weights.iter().sum();
        assert!((got - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn graded_axis_covers_power_decay() {
        // integral over R of (1+x^2)^{-3} dx = 3 pi / 8.
        let axis = Axis::graded_symmetric(100.0, 0.5, 16);
        let got: f64 = axis
            .nodes
            .iter()
            .zip(&axis.weights)
            .map(|(x, w)| w / (1.0 + x * x).powi(3))
            .sum();
        assert!((got - 3.0 * std::f64::consts::PI / 8.0).abs() < 1e-9);
    }
}
