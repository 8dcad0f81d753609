use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::PhysicalScenario;
use crate::partialwave::PartialWaveTable;
use crate::specfun::coulomb_sigma_exact;
use crate::summation::CompensatedSum;

/// Shadow-zone estimates are only meaningful while ε|η| stays small.
pub const SHADOW_WARN_LEVEL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossSectionPoint {
    pub theta: f64,
    pub value: f64,
    pub delta_used: f64,
}

/// Conversion factor `p²/(16σ_p⁴) = 1/(16ε⁴p²)` from probability to dσ/dΩ.
pub fn probability_to_dcs(scenario: &PhysicalScenario) -> f64 {
    let eps = scenario.eps();
    let p = scenario.momentum();
    1.0 / (16.0 * eps.powi(4) * p * p)
}

/// Differential cross section `P(θ, δ)/(16ε⁴p²)`.
pub fn dcs(table: &PartialWaveTable, theta: f64, delta: f64) -> f64 {
    table.probability(theta, delta) * probability_to_dcs(table.scenario())
}

pub fn cross_section_point(table: &PartialWaveTable, theta: f64, delta: f64) -> CrossSectionPoint {
    CrossSectionPoint {
        theta,
        value: dcs(table, theta, delta),
        delta_used: delta,
    }
}

fn half_angle_sin_sq(theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::Divergence);
    }
    let s = (0.5 * theta).sin();
    Ok(s * s)
}

/// `η²/(4p² sin⁴(θ/2))`.
pub fn rutherford_dcs(scenario: &PhysicalScenario, theta: f64) -> Result<f64> {
    let s2 = half_angle_sin_sq(theta)?;
    let eta = scenario.eta();
    let p = scenario.momentum();
    Ok(eta * eta / (4.0 * p * p * s2 * s2))
}

/// `4ε⁴η²/sin⁴(θ/2)`; a reference curve, not bounded by one.
pub fn rutherford_probability(scenario: &PhysicalScenario, theta: f64) -> Result<f64> {
    let s2 = half_angle_sin_sq(theta)?;
    let eps = scenario.eps();
    let eta = scenario.eta();
    Ok(4.0 * eps.powi(4) * eta * eta / (s2 * s2))
}

/// `−(η/(2p sin²(θ/2))) exp(−iη ln sin²(θ/2) + 2iσ_0)`.
pub fn rutherford_amplitude(scenario: &PhysicalScenario, theta: f64) -> Result<Complex64> {
    let s2 = half_angle_sin_sq(theta)?;
    let eta = scenario.eta();
    let p = scenario.momentum();
    let phase = -eta * s2.ln() + 2.0 * coulomb_sigma_exact(0, eta);
    Ok(Complex64::from_polar(-eta / (2.0 * p * s2), phase))
}

/// `8ε² Σ (l + ½) exp(−4ε²(l + ½)²)` over the table's partial waves.
pub fn conservation_weight_sum(table: &PartialWaveTable) -> f64 {
    let eps = table.eps();
    let mut acc = CompensatedSum::new();
    for l in 0..=table.l_max() {
        let x = l as f64 + 0.5;
        acc.add(x * (-4.0 * eps * eps * x * x).exp());
    }
    8.0 * eps * eps * acc.value()
}

/// Angular half-width `4ε|η|` of the forward shadow zone.
pub fn shadow_angle(eps: f64, eta: f64) -> f64 {
    if eps * eta.abs() > SHADOW_WARN_LEVEL {
        log::warn!("shadow angle estimate outside its range: eps*|eta| = {}", eps * eta.abs());
    }
    4.0 * eps * eta.abs()
}
