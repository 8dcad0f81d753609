//! Special functions behind the partial-wave series.

mod bessel;
mod coulomb;
mod digamma;
mod gamma;
mod legendre;
mod wigner;

pub use bessel::bessel_j0;
pub use coulomb::{coulomb_sigma_asymptotic, coulomb_sigma_exact, coulomb_sigma_row, dsigma_deta};
pub use digamma::digamma;
pub use gamma::log_gamma_complex;
pub use legendre::{fill_legendre, legendre_row, LegendreRow};
pub use wigner::{i_integral_closed_form, i_integral_quadrature, wigner_d00_small_angle};

pub use num_complex::Complex64;

/// Logarithm of `sin(πz)`, stable for large |Im z|. Any branch of the
/// logarithm is returned; callers only rely on its exponential.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}), with |e^{2iw}| <= 1 for Im w >= 0.
    let w = z * PI;
    let i = Complex64::i();
    let e2 = (i * 2.0 * w).exp();
    -i * w + (Complex64::new(1.0, 0.0) - e2).ln() + Complex64::new(0.0, 0.5).ln()
}

/// `cot(πz)`, stable for large |Im z|.
pub(crate) fn cot_pi(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    if z.im < 0.0 {
        return cot_pi(z.conj()).conj();
    }
    let i = Complex64::i();
    let e2 = (i * 2.0 * PI * z).exp();
    i * (e2 + 1.0) / (e2 - 1.0)
}

pub(crate) fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}
