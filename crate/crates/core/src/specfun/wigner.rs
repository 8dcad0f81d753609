//! Small-angle form of `d^l_00(θ)` and the Gaussian-weighted angular
//! integral it enters.

use super::bessel_j0;
use crate::quadrature::integrate;

/// `d^l_00(θ) ≈ J0(√(l(l+1) + 1/3) θ)`, uniform in l for small θ.
pub fn wigner_d00_small_angle(l: usize, theta: f64) -> f64 {
    let lf = l as f64;
    bessel_j0((lf * (lf + 1.0) + 1.0 / 3.0).sqrt() * theta)
}

/// `I(l, ε) = 2ε² exp(−ε²(l + ½)²)` in units where p = 1.
pub fn i_integral_closed_form(l: usize, eps: f64) -> f64 {
    let x = l as f64 + 0.5;
    2.0 * eps * eps * (-eps * eps * x * x).exp()
}

/// `∫_0^π θ exp(−θ²/(4ε²)) d^l_00(θ) dθ` by adaptive Gauss–Kronrod, with
/// breakpoints placed on the Gaussian scale 2ε so the narrow peak is resolved.
pub fn i_integral_quadrature(l: usize, eps: f64) -> f64 {
    let width = 2.0 * eps;
    let integrand = |theta: f64| {
        let u = theta / width;
        theta * (-u * u).exp() * wigner_d00_small_angle(l, theta)
    };
    let mut breaks: Vec<f64> = (0..=40)
        .map(|k| k as f64 * 0.25 * width)
        .take_while(|&b| b < std::f64::consts::PI)
        .collect();
    breaks.push(std::f64::consts::PI);
    integrate(integrand, &breaks, 0.0, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::legendre_row;

    #[test]
    fn forward_is_one() {
        for l in [0, 1, 50, 5000] {
            assert_eq!(wigner_d00_small_angle(l, 0.0), 1.0);
        }
    }

    #[test]
    fn tracks_legendre() {
        let p100 = legendre_row(0.01, 100).values[100];
        assert!((wigner_d00_small_angle(100, 0.01) - p100).abs() <= 1e-3);
        let p1000 = legendre_row(0.005, 1000).values[1000];
        assert!((wigner_d00_small_angle(1000, 0.005) - p1000).abs() <= 1e-3);
    }

    #[test]
    fn closed_form_vs_quadrature_low_l() {
        let eps = 0.001;
        let closed = i_integral_closed_form(0, eps);
        let quad = i_integral_quadrature(0, eps);
        assert!((quad / closed - 1.0).abs() <= 1e-5, "{quad} vs {closed}");
    }

    #[test]
    fn closed_form_vs_quadrature_suppressed() {
        let eps = 0.001;
        let l = 3000;
        let closed = i_integral_closed_form(l, eps);
        let suppression = closed / i_integral_closed_form(0, eps);
        assert!((suppression.ln() + 9.0).abs() < 0.01);
        let quad = i_integral_quadrature(l, eps);
        assert!((quad / closed - 1.0).abs() <= 1e-3, "{quad} vs {closed}");
    }

    #[test]
    fn mid_l_agreement() {
        let eps = 0.001;
        let closed = i_integral_closed_form(1000, eps);
        let quad = i_integral_quadrature(1000, eps);
        assert!((quad / closed - 1.0).abs() <= 1e-5);
    }

    #[test]
    fn eps_scaling() {
        for l in [0usize, 10, 400] {
            let eps = 0.002;
            let x = l as f64 + 0.5;
            let ratio = i_integral_closed_form(l, 2.0 * eps) / i_integral_closed_form(l, eps);
            let expected = 4.0 * (-3.0 * eps * eps * x * x).exp();
            assert!((ratio / expected - 1.0).abs() < 1e-13);
        }
    }
}
