//! Coulomb phase shifts `σ_l(η) = arg Γ(l + 1 + iη)` and their η-derivative.

use num_complex::Complex64;

use super::{digamma, log_gamma_complex};

fn sigma_zero(eta: f64) -> f64 {
    if eta == 0.0 {
        return 0.0;
    }
    // Im ln Γ(1 + iη) is odd in η; evaluate at |η| so the symmetry is exact.
    let magnitude = log_gamma_complex(Complex64::new(1.0, eta.abs()))
        .expect("1 + i|eta| is never a pole")
        .im;
    if eta < 0.0 {
        -magnitude
    } else {
        magnitude
    }
}

/// `σ_0 … σ_{l_max}` built from `σ_0 = Im ln Γ(1 + iη)` by the exact
/// recurrence `σ_{l+1} = σ_l + atan2(η, l + 1)`, so neighbouring entries
/// never differ by a branch jump.
pub fn coulomb_sigma_row(l_max: usize, eta: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(l_max + 1);
    let mut sigma = sigma_zero(eta);
    row.push(sigma);
    for l in 0..l_max {
        sigma += eta.atan2((l + 1) as f64);
        row.push(sigma);
    }
    row
}

/// Single Coulomb phase shift; O(l) since it follows the recurrence.
pub fn coulomb_sigma_exact(l: usize, eta: f64) -> f64 {
    let mut sigma = sigma_zero(eta);
    for k in 0..l {
        sigma += eta.atan2((k + 1) as f64);
    }
    sigma
}

/// Leading Stirling form
/// `σ_l ≈ η(ln|l + 1 + iη| − 1) + (l + ½) atan(η/(l + 1))`,
/// accurate to `O(1/|l + 1 + iη|)`.
pub fn coulomb_sigma_asymptotic(l: usize, eta: f64) -> f64 {
    let lp1 = (l + 1) as f64;
    eta * (lp1.hypot(eta).ln() - 1.0) + (l as f64 + 0.5) * (eta / lp1).atan()
}

/// `∂σ_l/∂η = Re ψ(l + 1 + iη)`.
pub fn dsigma_deta(l: usize, eta: f64) -> f64 {
    digamma(Complex64::new((l + 1) as f64, eta))
        .expect("l + 1 + i eta is never a pole")
        .re
}
