//! Physical outputs of the series: cross sections and their Rutherford
//! references, δ-profiles, conservation integrals and optical-theorem
//! diagnostics.

mod cross_section;
mod optical;
mod profile;

pub use cross_section::{
    conservation_weight_sum, cross_section_point, dcs, probability_to_dcs, rutherford_amplitude, rutherford_dcs,
    rutherford_probability, shadow_angle, CrossSectionPoint, SHADOW_WARN_LEVEL,
};
pub use optical::{
    optical_ratio, optical_theorem_check_short_range, scattering_amplitude_f, total_cross_section, OpticalCheck,
    OpticalRatio, CONVERGED_TAIL_PHASE,
};
pub use profile::{
    coarse_points, default_delta_profile, delta_profile, energy_ratio_rho, forward_resolving_midpoints,
    probability_sphere_integral, uniform_midpoints, DeltaProfile, RhoPoint, COARSE_STEP, DEFAULT_DELTA_RANGE, RHO_ANGLE,
};
