//! Conversion constants between natural units (MeV-based, ħ = c = 1) and
//! laboratory units.

use serde::{Deserialize, Serialize};

/// ħc in MeV·fm (CODATA 2018).
pub const HBAR_C_MEV_FM: f64 = 197.326_980_4;
/// ħ in MeV·s (CODATA 2018); one natural time unit MeV⁻¹ in seconds.
pub const HBAR_MEV_S: f64 = 6.582_119_569e-22;
/// Fine-structure constant (CODATA 2018).
pub const FINE_STRUCTURE_ALPHA: f64 = 1.0 / 137.035_999_084;
/// Rest mass of the helium-4 nucleus in MeV.
pub const HELIUM_NUCLEUS_MASS_MEV: f64 = 3727.379;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitsContext {
    pub hbar_c: f64,
    pub seconds_per_inverse_mev: f64,
    pub fine_structure_alpha: f64,
    /// Default projectile mass; scenarios may override it.
    pub projectile_mass_mev: f64,
}

impl Default for UnitsContext {
    fn default() -> Self {
        Self {
            hbar_c: HBAR_C_MEV_FM,
            seconds_per_inverse_mev: HBAR_MEV_S,
            fine_structure_alpha: FINE_STRUCTURE_ALPHA,
            projectile_mass_mev: HELIUM_NUCLEUS_MASS_MEV,
        }
    }
}

impl UnitsContext {
    pub fn fm_to_natural(&self, fm: f64) -> f64 {
        fm / self.hbar_c
    }

    pub fn natural_to_fm(&self, length: f64) -> f64 {
        length * self.hbar_c
    }

    pub fn natural_to_seconds(&self, time: f64) -> f64 {
        time * self.seconds_per_inverse_mev
    }

    pub fn seconds_to_natural(&self, seconds: f64) -> f64 {
        seconds / self.seconds_per_inverse_mev
    }
}

pub fn kev_to_mev(kev: f64) -> f64 {
    kev * 1e-3
}

pub fn mev_to_kev(mev: f64) -> f64 {
    mev * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn conversions_round_trip(x in 1e-6f64..1e9) {
            let u = UnitsContext::default();
            let len = u.natural_to_fm(u.fm_to_natural(x));
            let t = u.natural_to_seconds(u.seconds_to_natural(x * 1e-20));
            prop_assert!((len / x - 1.0).abs() <= 1e-12);
            prop_assert!((t / (x * 1e-20) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn alpha_is_close_to_one_over_137() {
        assert!((1.0 / FINE_STRUCTURE_ALPHA - 137.036).abs() < 1e-3);
    }
}
