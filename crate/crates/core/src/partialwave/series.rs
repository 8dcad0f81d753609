//! The finite-amplitude series and its forward/scatter split.
//!
//! With `g_l(δ) = exp(−(δ − ξ_l)²/8)`:
//!
//! ```text
//! A(θ, δ)   = 2ε² Σ w_l g_l e^{2iσ_l} P_l(cos θ)
//! A_F(θ, δ) = 2ε² Σ w_l g_l P_l(cos θ)
//! A_S(θ, δ) = 4ε² Σ w_l g_l e^{iσ_l} sin σ_l P_l(cos θ)
//! ```
//!
//! so that `A = A_F + i A_S`. All sums run over ascending l with compensated
//! accumulation; the `*_with_row` variants accept a precomputed Legendre row
//! and give bit-identical results to the plain ones.

use num_complex::Complex64;

use super::PartialWaveTable;
use crate::specfun::legendre_row;
use crate::summation::{CompensatedComplexSum, CompensatedSum};

#[inline]
fn shift_factor(delta: f64, xi: f64) -> f64 {
    let d = delta - xi;
    (-d * d / 8.0).exp()
}

impl PartialWaveTable {
    fn row(&self, theta: f64) -> Vec<f64> {
        legendre_row(theta, self.l_max()).values
    }

    fn scale(&self) -> f64 {
        2.0 * self.eps() * self.eps()
    }

    pub fn amplitude(&self, theta: f64, delta: f64) -> Complex64 {
        self.amplitude_with_row(&self.row(theta), delta)
    }

    /// `legendre` must hold `P_0 … P_{l_max}` at the wanted angle.
    pub fn amplitude_with_row(&self, legendre: &[f64], delta: f64) -> Complex64 {
        let mut acc = CompensatedComplexSum::new();
        let xi = self.xi();
        let (c, s) = (self.phase_cos(), self.phase_sin());
        for (l, (&w, &p)) in self.weight().iter().zip(legendre).enumerate() {
            let a = w * shift_factor(delta, xi[l]) * p;
            acc.add(Complex64::new(a * c[l], a * s[l]));
        }
        acc.value() * self.scale()
    }

    pub fn probability(&self, theta: f64, delta: f64) -> f64 {
        self.amplitude(theta, delta).norm_sqr()
    }

    pub fn probability_with_row(&self, legendre: &[f64], delta: f64) -> f64 {
        self.amplitude_with_row(legendre, delta).norm_sqr()
    }

    /// Real forward part `A_F`.
    pub fn amplitude_forward(&self, theta: f64, delta: f64) -> f64 {
        self.amplitude_forward_with_row(&self.row(theta), delta)
    }

    pub fn amplitude_forward_with_row(&self, legendre: &[f64], delta: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        let xi = self.xi();
        for (l, (&w, &p)) in self.weight().iter().zip(legendre).enumerate() {
            acc.add(w * shift_factor(delta, xi[l]) * p);
        }
        acc.value() * self.scale()
    }

    /// Scattered part `A_S`.
    pub fn amplitude_scatter(&self, theta: f64, delta: f64) -> Complex64 {
        self.amplitude_scatter_with_row(&self.row(theta), delta)
    }

    pub fn amplitude_scatter_with_row(&self, legendre: &[f64], delta: f64) -> Complex64 {
        let mut acc = CompensatedComplexSum::new();
        let xi = self.xi();
        let (sc, ss) = (self.sin_cos(), self.sin_sq());
        for (l, (&w, &p)) in self.weight().iter().zip(legendre).enumerate() {
            let a = w * shift_factor(delta, xi[l]) * p;
            acc.add(Complex64::new(a * sc[l], a * ss[l]));
        }
        acc.value() * (2.0 * self.scale())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_table, build_table_with_lmax, PhaseShiftModel};
    use crate::kinematics::PhysicalScenario;
    use crate::units::UnitsContext;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table(eta: f64, eps: f64) -> super::PartialWaveTable {
        let z2 = if eta < 0.0 { -2 } else { 2 };
        let s = PhysicalScenario::from_eta(79, z2, 3727.379, eta, eps, &UnitsContext::default()).unwrap();
        build_table(&s, &PhaseShiftModel::CoulombExact, 1e-10).unwrap()
    }

    #[test]
    fn free_forward_amplitude_is_one() {
        let eps = 0.001;
        let t = table(0.0, eps);
        let a = t.amplitude(0.0, 0.0);
        assert!(a.im == 0.0);
        assert!((a.re - 1.0).abs() < 2.0 * eps * eps, "{a}");
    }

    #[test]
    fn free_field_matches_gaussian() {
        let eps = 0.001;
        let t = table(0.0, eps);
        for i in 0..=10 {
            let theta = i as f64 * eps;
            let row = crate::specfun::legendre_row(theta, t.l_max()).values;
            for j in 0..=8 {
                let delta = -4.0 + j as f64;
                let expected = (-theta * theta / (4.0 * eps * eps)).exp() * (-delta * delta / 4.0).exp();
                let got = t.probability_with_row(&row, delta);
                assert!((got - expected).abs() <= 5.0 * eps * eps, "theta {theta} delta {delta}");
            }
        }
    }

    #[test]
    fn free_case_has_no_scatter_part() {
        let t = table(0.0, 0.01);
        assert_eq!(t.amplitude_scatter(0.3, 0.2), num_complex::Complex64::new(0.0, 0.0));
        assert_eq!(t.amplitude_forward(0.01, 0.2), t.amplitude(0.01, 0.2).re);
    }

    #[test]
    fn decomposition_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for eta in [0.1, 10.0, 800.0] {
            let t = table(eta, 0.001);
            for _ in 0..20 {
                let theta = rng.gen_range(0.0..std::f64::consts::PI);
                let delta = rng.gen_range(-8.0..8.0);
                let a = t.amplitude(theta, delta);
                let split = t.amplitude_forward(theta, delta) + num_complex::Complex64::i() * t.amplitude_scatter(theta, delta);
                assert!((a - split).norm() <= 1e-10, "eta {eta} theta {theta} delta {delta}");
            }
        }
    }

    #[test]
    fn charge_conjugation() {
        let plus = table(10.0, 0.001);
        let minus = table(-10.0, 0.001);
        for (theta, delta) in [(0.0, 0.3), (0.03, 0.4), (0.5, -1.0), (2.0, 2.5)] {
            let a = plus.probability(theta, delta);
            let b = minus.probability(theta, -delta);
            assert!((a - b).abs() <= 1e-10, "theta {theta}: {a} vs {b}");
        }
    }

    #[test]
    fn truncation_robustness() {
        let eps = 0.01;
        let z = PhysicalScenario::from_eta(79, 2, 3727.379, 10.0, eps, &UnitsContext::default()).unwrap();
        let base = build_table(&z, &PhaseShiftModel::CoulombExact, 1e-10).unwrap();
        let doubled = build_table_with_lmax(&z, &PhaseShiftModel::CoulombExact, 2 * base.l_max()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let theta = rng.gen_range(0.0..std::f64::consts::PI);
            let delta = rng.gen_range(-6.0..6.0);
            assert!((base.probability(theta, delta) - doubled.probability(theta, delta)).abs() < 1e-8);
        }
    }

    #[test]
    fn row_variant_is_bit_identical() {
        let t = table(10.0, 0.005);
        let row = crate::specfun::legendre_row(0.2, t.l_max()).values;
        assert_eq!(t.amplitude(0.2, 0.7), t.amplitude_with_row(&row, 0.7));
        assert_eq!(t.amplitude_scatter(0.2, 0.7), t.amplitude_scatter_with_row(&row, 0.7));
    }

    #[test]
    fn bounded_by_one() {
        let t = table(800.0, 0.001);
        for i in 0..=20 {
            let theta = i as f64 * std::f64::consts::PI / 20.0;
            for j in -4..=16 {
                let p = t.probability(theta, j as f64 * 0.5);
                assert!((0.0..=1.0 + 1e-6).contains(&p));
            }
        }
    }

    #[test]
    fn narrow_forward_peaks() {
        let t = table(10.0, 0.001);
        let at_zero = t.amplitude_forward(0.0, 0.4).abs();
        let outside = t.amplitude_forward(0.02, 0.4).abs();
        assert!(outside < 1e-3 * at_zero);
        let s = t.amplitude_scatter(0.0, 0.4);
        assert!(s.im.abs() > 10.0 * s.re.abs());
    }
}
