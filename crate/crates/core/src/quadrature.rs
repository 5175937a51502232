//! Gauss-Legendre and Chebyshev-Lobatto rules on `[0, 1]`.

use crate::scalar::Real;

/// Nodes and positive weights of an interpolatory rule on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Quadrature<T> {
    /// `m`-point Gauss-Legendre rule, exact for polynomials of degree
    /// `2m - 1`.
    pub fn gauss_legendre(m: usize) -> Self {
        let (nodes, weights) = gauss_legendre_f64(m);
        Quadrature {
            nodes: nodes.into_iter().map(T::from_f64_lossy).collect(),
            weights: weights.into_iter().map(T::from_f64_lossy).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same rule mapped onto `[a, b]`.
    pub fn on_interval(&self, a: T, b: T) -> Self {
        let len = b - a;
        Quadrature {
            nodes: self.nodes.iter().map(|&x| a + len * x).collect(),
            weights: self.weights.iter().map(|&w| w * len).collect(),
        }
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[0, 1]`.
pub fn gauss_legendre_f64(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m > 0, "quadrature needs at least one node");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Newton on P_m starting from the Chebyshev-like guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(m, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is in (0, 1]; map the pair +-x onto [0, 1].
        nodes[i] = (1.0 - x) / 2.0;
        nodes[m - 1 - i] = (1.0 + x) / 2.0;
        weights[i] = w / 2.0;
        weights[m - 1 - i] = w / 2.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Chebyshev-Lobatto points on `[0, 1]`, ascending, endpoints included.
pub fn chebyshev_lobatto<T: Real>(m: usize) -> Vec<T> {
    assert!(m >= 2, "Lobatto grid needs both endpoints");
    (0..m)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / (m - 1) as f64;
            T::from_f64_lossy((1.0 - theta.cos()) / 2.0)
        })
        .collect()
}

/// Barycentric weights for arbitrary distinct nodes.
pub fn barycentric_weights<T: Real>(nodes: &[T]) -> Vec<T> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let prod = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .fold(T::one(), |acc, (_, &xk)| acc * (xj - xk));
            T::one() / prod
        })
        .collect()
}

/// Values of all Lagrange basis polynomials for `nodes` at `x`.
pub fn lagrange_basis<T: Real>(nodes: &[T], bary: &[T], x: T) -> Vec<T> {
    if let Some(hit) = nodes.iter().position(|&n| n == x) {
        return (0..nodes.len())
            .map(|k| if k == hit { T::one() } else { T::zero() })
            .collect();
    }
    let terms: Vec<T> = nodes.iter().zip(bary).map(|(&n, &w)| w / (x - n)).collect();
    let denom = terms.iter().fold(T::zero(), |a, &b| a + b);
    terms.into_iter().map(|t| t / denom).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_are_exact_to_degree_2m_minus_1() {
        for m in 1..=20 {
            let q = Quadrature::<f64>::gauss_legendre(m);
            assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for deg in 0..2 * m {
                let approx: f64 = q
                    .nodes
                    .iter()
                    .zip(&q.weights)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let exact = 1.0 / (deg as f64 + 1.0);
                assert!((approx - exact).abs() < 1e-14, "m={m} deg={deg}");
            }
            assert!(q.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn two_point_nodes() {
        let q = Quadrature::<f64>::gauss_legendre(2);
        let w = 3f64.sqrt() / 6.0;
        assert!((q.nodes[0] - (0.5 - w)).abs() < 1e-16);
        assert!((q.nodes[1] - (0.5 + w)).abs() < 1e-16);
        assert!(q.weights.iter().all(|w| (w - 0.5).abs() < 1e-15));
    }

    #[test]
    fn lagrange_reproduces_polynomials() {
        let nodes: Vec<f64> = chebyshev_lobatto(6);
        let bary = barycentric_weights(&nodes);
        let f = |x: f64| 1.0 - 2.0 * x + x.powi(5);
        for &x in &[0.0, 0.13, 0.5, 0.77, 1.0] {
            let l = lagrange_basis(&nodes, &bary, x);
            let v: f64 = l.iter().zip(&nodes).map(|(l, &n)| l * f(n)).sum();
            assert!((v - f(x)).abs() < 1e-13);
        }
    }
}
