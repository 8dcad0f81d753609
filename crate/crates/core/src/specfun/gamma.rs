use std::f64::consts::PI;

use num_complex::Complex64;

use super::{is_nonpositive_integer, ln_sin_pi};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` by the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula for `Re z < 1/2`.
///
/// For `Re z >= 1/2` the imaginary part is the continuous branch (the one
/// obtained by analytic continuation from the positive real axis), so
/// `Im ln Γ(1 + iη)` grows like `η ln η` instead of wrapping into `(-π, π]`.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("log-gamma argument must be finite"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        let reflected = lanczos(Complex64::new(1.0, 0.0) - z);
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected);
    }
    Ok(lanczos(z))
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}
