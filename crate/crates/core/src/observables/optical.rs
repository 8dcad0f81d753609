//! Scattering amplitude, total cross section and optical-theorem checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::PhysicalScenario;
use crate::partialwave::{partial_weight, PartialWaveTable, ShortRangeTable};
use crate::specfun::legendre_row;
use crate::summation::{CompensatedComplexSum, CompensatedSum};

/// Largest tolerated phase at the end of a short-range table.
pub const CONVERGED_TAIL_PHASE: f64 = 1e-8;

/// `f(θ) = (1/p) Σ w_l e^{iσ_l} sin σ_l P_l(cos θ)`, with the δ-integral
/// done analytically.
pub fn scattering_amplitude_f(table: &PartialWaveTable, theta: f64) -> Complex64 {
    let row = legendre_row(theta, table.l_max()).values;
    let mut acc = CompensatedComplexSum::new();
    for (l, &pl) in row.iter().enumerate().take(table.l_max() + 1) {
        let a = table.weight()[l] * pl;
        acc.add(Complex64::new(a * table.sin_cos()[l], a * table.sin_sq()[l]));
    }
    acc.value() / table.scenario().momentum()
}

/// Sums `Σ (2l + 1) e^{−4ε²(l+½)²} sin²σ_l` and `Σ (2l + 1) e^{−2ε²(l+½)²} sin²σ_l`.
fn damped_sums(eps: f64, sin_sq: &[f64]) -> (f64, f64) {
    let mut four = CompensatedSum::new();
    let mut two = CompensatedSum::new();
    for (l, &s2) in sin_sq.iter().enumerate() {
        let w = partial_weight(l, eps);
        let x = l as f64 + 0.5;
        four.add(w * (-2.0 * eps * eps * x * x).exp() * s2);
        two.add(w * s2);
    }
    (four.value(), two.value())
}

/// `σ = (4π/p²) Σ (2l + 1) e^{−4ε²(l+½)²} sin²σ_l`.
pub fn total_cross_section(table: &PartialWaveTable) -> f64 {
    let p = table.scenario().momentum();
    4.0 * PI / (p * p) * damped_sums(table.eps(), table.sin_sq()).0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OpticalRatio {
    /// No phase shifts at all; the ratio is 0/0.
    Free,
    Ratio(f64),
}

impl OpticalRatio {
    pub fn value(self) -> Option<f64> {
        match self {
            OpticalRatio::Free => None,
            OpticalRatio::Ratio(v) => Some(v),
        }
    }
}

/// `γ = σ / ((4π/p) Im f(0))`.
pub fn optical_ratio(table: &PartialWaveTable) -> OpticalRatio {
    let (num, den) = damped_sums(table.eps(), table.sin_sq());
    if den == 0.0 {
        OpticalRatio::Free
    } else {
        OpticalRatio::Ratio(num / den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalCheck {
    pub sigma: f64,
    pub forward: f64,
    pub relative_difference: f64,
}

/// Both sides of `σ = (4π/p) Im f(0)` for a short-range table used in full.
pub fn optical_theorem_check_short_range(model: &ShortRangeTable, scenario: &PhysicalScenario) -> Result<OpticalCheck> {
    let last = model.len() - 1;
    let tail = model.delta()[last];
    if tail.abs() > CONVERGED_TAIL_PHASE {
        return Err(Error::NonConvergence { l: last, value: tail.abs() });
    }
    let sin_sq: Vec<f64> = model.delta().iter().map(|d| d.sin().powi(2)).collect();
    let (num, den) = damped_sums(scenario.eps(), &sin_sq);
    let p = scenario.momentum();
    let sigma = 4.0 * PI / (p * p) * num;
    let forward = 4.0 * PI / (p * p) * den;
    let relative_difference = if forward == 0.0 { 0.0 } else { (forward - sigma).abs() / forward };
    Ok(OpticalCheck {
        sigma,
        forward,
        relative_difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partialwave::{build_table, build_table_with_lmax, square_well_phase_shifts, PhaseShiftModel};
    use crate::units::UnitsContext;

    fn coulomb(eta: f64) -> PartialWaveTable {
        let s = PhysicalScenario::from_eta(79, 2, 3727.379, eta, 0.001, &UnitsContext::default()).unwrap();
        build_table(&s, &PhaseShiftModel::CoulombExact, 1e-10).unwrap()
    }

    fn well(eps: f64) -> (ShortRangeTable, PhysicalScenario) {
        let units = UnitsContext::default();
        let s = PhysicalScenario::new(0, 79, 3727.379, 5.2233, eps).unwrap();
        let l_max = crate::partialwave::default_l_max(eps, 1e-10);
        match square_well_phase_shifts(2.0, units.fm_to_natural(5.0), &s, l_max).unwrap() {
            PhaseShiftModel::ShortRange(t) => (t, s),
            _ => unreachable!(),
        }
    }

    #[test]
    fn free_case() {
        let t = coulomb(0.0);
        assert_eq!(scattering_amplitude_f(&t, 0.5), Complex64::new(0.0, 0.0));
        assert_eq!(total_cross_section(&t), 0.0);
        assert_eq!(optical_ratio(&t), OpticalRatio::Free);
    }

    #[test]
    fn forward_imaginary_part_is_plain_sum() {
        let t = coulomb(10.0);
        let f0 = scattering_amplitude_f(&t, 0.0);
        let direct: f64 = (0..=t.l_max()).map(|l| t.weight()[l] * t.sin_sq()[l]).sum();
        assert!((f0.im * t.scenario().momentum() / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_below_one() {
        for eta in [0.1, 1.0, 10.0, 100.0, 800.0] {
            let g = optical_ratio(&coulomb(eta)).value().unwrap();
            assert!(g < 1.0 && g > 0.0, "eta {eta}: {g}");
        }
    }

    #[test]
    fn short_range_optical_theorem() {
        let (fine, s_fine) = well(0.001);
        let (coarse, s_coarse) = well(0.01);
        let a = optical_theorem_check_short_range(&fine, &s_fine).unwrap();
        let b = optical_theorem_check_short_range(&coarse, &s_coarse).unwrap();
        assert!(a.relative_difference <= 1e-4);
        let ratio = b.relative_difference / a.relative_difference;
        assert!((90.0..=110.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn zero_well_gives_zero() {
        let s = PhysicalScenario::new(0, 79, 3727.379, 5.0, 0.01).unwrap();
        let PhaseShiftModel::ShortRange(t) = square_well_phase_shifts(0.0, 0.02, &s, 100).unwrap() else {
            unreachable!()
        };
        let check = optical_theorem_check_short_range(&t, &s).unwrap();
        assert_eq!((check.sigma, check.forward), (0.0, 0.0));
    }

    #[test]
    fn unconverged_table_rejected() {
        let s = PhysicalScenario::new(0, 79, 3727.379, 5.0, 0.01).unwrap();
        let t = ShortRangeTable::new(vec![0.3, 0.1], vec![0.0, 0.0]).unwrap();
        assert!(matches!(optical_theorem_check_short_range(&t, &s), Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn gaussians_matter_little_for_converged_well() {
        let (t, s) = well(0.001);
        let table = build_table_with_lmax(&s, &PhaseShiftModel::ShortRange(t.clone()), t.len() - 1).unwrap();
        let with = scattering_amplitude_f(&table, 0.3);
        let row = legendre_row(0.3, t.len() - 1).values;
        let mut without = Complex64::new(0.0, 0.0);
        for (l, d) in t.delta().iter().enumerate() {
            without += Complex64::from_polar(1.0, *d) * d.sin() * (2 * l + 1) as f64 * row[l];
        }
        without /= s.momentum();
        assert!(((with - without).norm() / without.norm()) < 1e-4);
    }
}
