//! Slow, independent reference implementations used to cross-check the
//! production routines. None of these are on a hot path.

use num_complex::Complex64;

use crate::summation::CompensatedComplexSum;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `w − ln(1 + w)` without cancellation for small |w|.
fn w_minus_log1p(w: Complex64) -> Complex64 {
    if w.norm() < 1e-2 {
        let mut power = w * w;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 2..12 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            acc += power * (sign / m as f64);
            power *= w;
        }
        acc
    } else {
        w - (w + 1.0).ln()
    }
}

/// ln Γ(z) from the Weierstrass product, truncated at `N = 10^5` factors
/// plus an asymptotic tail. Intended for |z| of order one; the result is on
/// the principal branch built up factor by factor, which matches the
/// continuous branch for Re z > 0.
pub fn log_gamma_product(z: Complex64) -> Complex64 {
    const N: usize = 100_000;
    let mut acc = CompensatedComplexSum::new();
    acc.add(-z * EULER_GAMMA);
    acc.add(-z.ln());
    for k in 1..=N {
        acc.add(w_minus_log1p(z / k as f64));
    }
    // Σ_{k>N} Σ_{m≥2} (−1)^m z^m / (m k^m), with ζ(m, N+1) from Euler–Maclaurin.
    let n = N as f64;
    let mut power = z * z;
    for m in 2..8 {
        let mf = m as f64;
        let zeta_tail = n.powf(1.0 - mf) / (mf - 1.0) - 0.5 * n.powf(-mf) + mf / 12.0 * n.powf(-mf - 1.0);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(power * (sign * zeta_tail / mf));
        power *= z;
    }
    acc.value()
}

/// Gauss–Legendre rule on [−1, 1], nodes by Newton iteration on the
/// three-term recurrence.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(n, x);
                let step = p / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(n, x);
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}
