//! Experimental inputs (charges, mass, kinetic energy, momentum resolution)
//! converted to the natural-unit quantities the series consumes.
//!
//! A scenario fixes the wavepacket geometry: the position spread
//! `σ_x = 1/(2σ_p)` and the start distance `R = σ_x/√ε`, which keeps
//! spreading negligible over the transit `2R` and makes `2pR = ε^{-3/2}`
//! independent of energy.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::units::UnitsContext;

/// Fractional momentum spreads at or above this are rejected: the series is
/// the leading term of an expansion in `√ε`.
pub const MAX_EPS: f64 = 0.1;

/// Kinetic energy used for η = 0 scenarios built from η alone. The free
/// probability does not depend on it; only absolute cross sections and
/// times do.
pub const FREE_REFERENCE_ENERGY_MEV: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScenario {
    z1: i32,
    z2: i32,
    mass: f64,
    energy: f64,
    eps: f64,
    momentum: f64,
    beta: f64,
    eta: f64,
    sigma_p: f64,
    sigma_x: f64,
    start_distance: f64,
}

/// Validated constructor using the default constants.
pub fn build_scenario(z1: i32, z2: i32, mass: f64, energy: f64, eps: f64) -> Result<PhysicalScenario> {
    PhysicalScenario::new(z1, z2, mass, energy, eps)
}

fn validate_eps(eps: f64) -> Result<f64> {
    check_finite("eps", eps)?;
    if eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "must be positive",
        });
    }
    if eps >= MAX_EPS {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "must be below 0.1 for the small-spread expansion to hold",
        });
    }
    Ok(eps)
}

fn validate_positive(name: &'static str, value: f64) -> Result<f64> {
    check_finite(name, value)?;
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        });
    }
    Ok(value)
}

impl PhysicalScenario {
    pub fn new(z1: i32, z2: i32, mass: f64, energy: f64, eps: f64) -> Result<Self> {
        Self::with_units(z1, z2, mass, energy, eps, &UnitsContext::default())
    }

    pub fn with_units(
        z1: i32,
        z2: i32,
        mass: f64,
        energy: f64,
        eps: f64,
        units: &UnitsContext,
    ) -> Result<Self> {
        validate_positive("mass", mass)?;
        validate_positive("energy", energy)?;
        validate_eps(eps)?;
        let momentum = (2.0 * mass * energy).sqrt();
        let beta = momentum / mass;
        let eta = f64::from(z1) * f64::from(z2) * units.fine_structure_alpha / beta;
        Ok(Self::assemble(z1, z2, mass, energy, eps, momentum, beta, eta))
    }

    /// Scenario with a prescribed Sommerfeld parameter. The energy is solved
    /// from `η = Z₁Z₂α/β`; η = 0 yields a field-free scenario (Z₁ = 0) at
    /// [`FREE_REFERENCE_ENERGY_MEV`].
    pub fn from_eta(z1: i32, z2: i32, mass: f64, eta: f64, eps: f64, units: &UnitsContext) -> Result<Self> {
        check_finite("eta", eta)?;
        if eta == 0.0 {
            return Self::with_units(0, z2, mass, FREE_REFERENCE_ENERGY_MEV, eps, units);
        }
        validate_positive("mass", mass)?;
        validate_eps(eps)?;
        let coupling = f64::from(z1) * f64::from(z2) * units.fine_structure_alpha;
        if coupling == 0.0 || coupling.signum() != eta.signum() {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                reason: "sign must match sign(Z1*Z2) and the charges must be nonzero",
            });
        }
        let beta = coupling / eta;
        let momentum = mass * beta;
        let energy = momentum * momentum / (2.0 * mass);
        Ok(Self::assemble(z1, z2, mass, energy, eps, momentum, beta, eta))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        z1: i32,
        z2: i32,
        mass: f64,
        energy: f64,
        eps: f64,
        momentum: f64,
        beta: f64,
        eta: f64,
    ) -> Self {
        let sigma_p = eps * momentum;
        let sigma_x = 0.5 / sigma_p;
        Self {
            z1,
            z2,
            mass,
            energy,
            eps,
            momentum,
            beta,
            eta,
            sigma_p,
            sigma_x,
            start_distance: sigma_x / eps.sqrt(),
        }
    }

    pub fn z1(&self) -> i32 {
        self.z1
    }

    pub fn z2(&self) -> i32 {
        self.z2
    }

    /// Projectile rest mass (MeV).
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Kinetic energy (MeV).
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Mean momentum `p` (MeV).
    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Sommerfeld parameter; positive for repulsion.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    /// Initial distance `R` of the packet from the scattering centre.
    pub fn start_distance(&self) -> f64 {
        self.start_distance
    }

    /// `ln(2pR)`, which equals `(3/2) ln(1/ε)` for every scenario.
    pub fn ln_2pr(&self) -> f64 {
        1.5 * (1.0 / self.eps).ln()
    }
}

/// Upper bound on |η| for which the logarithmic spatial shift stays below
/// `R/2`.
pub fn eta_bound(eps: f64) -> Result<f64> {
    check_finite("eps", eps)?;
    if eps <= 0.0 || eps >= (-1.0f64).exp() {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "must lie in (0, 1/e)",
        });
    }
    let denom = 4.0 * eps.powf(1.5) * (1.5 * (1.0 / eps).ln() - 1.0).abs();
    if denom == 0.0 {
        return Err(Error::Domain("eta bound denominator vanishes"));
    }
    Ok(1.0 / denom)
}

/// Spatial shift `Δ(R) = (η/p)(ln 2pR − 1)` of the packet centre caused by
/// the logarithmic Coulomb phase.
pub fn log_shift(scenario: &PhysicalScenario) -> f64 {
    scenario.eta / scenario.momentum * (scenario.ln_2pr() - 1.0)
}

/// Time for a free packet starting at `R − Δ(R)` to reach the origin and
/// return to `R − Δ(R)`: `βT_free = 2R − 2Δ(R)`.
pub fn free_transit_time(scenario: &PhysicalScenario) -> f64 {
    (2.0 * scenario.start_distance - 2.0 * log_shift(scenario)) / scenario.beta
}

/// Scaled time shift `δ(T) = (βT − βT_free)/σ_x`.
pub fn scaled_shift(scenario: &PhysicalScenario, time: f64) -> f64 {
    (scenario.beta * time - scenario.beta * free_transit_time(scenario)) / scenario.sigma_x
}

/// Inverse of [`scaled_shift`].
pub fn time_at_shift(scenario: &PhysicalScenario, delta: f64) -> f64 {
    free_transit_time(scenario) + delta * scenario.sigma_x / scenario.beta
}

/// The time delay `δ·σ_x/β` expressed in seconds.
pub fn time_shift_seconds(scenario: &PhysicalScenario, delta: f64, units: &UnitsContext) -> f64 {
    units.natural_to_seconds(delta * scenario.sigma_x / scenario.beta)
}

/// Free Gaussian spreading law `σ_x(t) = √(σ_x² + ε²(βt)²)`.
pub fn spreading_width(scenario: &PhysicalScenario, time: f64) -> f64 {
    let bt = scenario.beta * time;
    (scenario.sigma_x * scenario.sigma_x + scenario.eps * scenario.eps * bt * bt).sqrt()
}

/// Fractional momentum spread implied by an energy width: `σ_p/p = ΔE/(2E)`.
pub fn eps_from_energy_width(delta_energy: f64, energy: f64) -> f64 {
    delta_energy / (2.0 * energy)
}

/// Fixed charges, mass and resolution; the energy (or η) varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFamily {
    pub z1: i32,
    pub z2: i32,
    pub mass: f64,
    pub eps: f64,
    pub units: UnitsContext,
}

impl ScenarioFamily {
    /// Helium nuclei on gold.
    pub fn alpha_on_gold(eps: f64) -> Self {
        let units = UnitsContext::default();
        Self {
            z1: 79,
            z2: 2,
            mass: units.projectile_mass_mev,
            eps,
            units,
        }
    }

    pub fn at_energy(&self, energy: f64) -> Result<PhysicalScenario> {
        PhysicalScenario::with_units(self.z1, self.z2, self.mass, energy, self.eps, &self.units)
    }

    /// The projectile charge sign follows the sign of η, so negative values
    /// describe the attractive counterpart of the same system.
    pub fn at_eta(&self, eta: f64) -> Result<PhysicalScenario> {
        let mut z2 = self.z2;
        if eta != 0.0 && (f64::from(self.z1) * f64::from(z2)).signum() != eta.signum() {
            z2 = -z2;
        }
        PhysicalScenario::from_eta(self.z1, z2, self.mass, eta, self.eps, &self.units)
    }
}
