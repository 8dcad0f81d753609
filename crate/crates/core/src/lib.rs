//! Wavepacket-to-wavepacket Coulomb scattering by partial-wave summation.
//!
//! The engine evaluates the finite transition probability `P(θ, δ)` between
//! Gaussian wavepackets scattered by a Coulomb (or short-range) potential,
//! where `θ` is the scattering angle and `δ` the scaled time shift of the
//! incoming packet. From it follow differential cross sections, their
//! deviation from the Rutherford formula, time delays, conservation sums and
//! optical-theorem diagnostics.
//!
//! Layout:
//!
//! - [`kinematics`]: experimental inputs to natural-unit quantities.
//! - [`specfun`]: log-gamma, Coulomb phase shifts, digamma, Legendre rows, J₀.
//! - [`partialwave`]: per-l tables and the amplitude series.
//! - [`observables`]: cross sections, profiles in δ, optical theorem.
//! - [`scan`]: parallel grid sweeps with deterministic assembly.
//! - [`acceptance`]: the numerical acceptance criteria, shared by the test
//!   suite and the `selftest` command.
//!
//! All quantities use natural units (ħ = c = 1) with energies in MeV.

pub mod acceptance;
pub mod error;
pub mod kinematics;
pub mod observables;
pub mod output;
pub mod partialwave;
pub mod quadrature;
pub mod reference;
pub mod scan;
pub mod specfun;
pub mod summation;
pub mod units;

pub use error::{Error, Result};
pub use kinematics::{PhysicalScenario, ScenarioFamily};
pub use partialwave::{ModelKind, PartialWaveTable, PhaseShiftModel, ShortRangeTable};
pub use units::UnitsContext;
