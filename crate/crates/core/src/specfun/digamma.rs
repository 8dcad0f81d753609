use std::f64::consts::PI;

use num_complex::Complex64;

use super::{cot_pi, is_nonpositive_integer};
use crate::error::{Error, Result};

/// `B_{2k}/(2k)` for k = 1..7.
const ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// Digamma function `ψ(z) = d ln Γ(z)/dz`.
///
/// Asymptotic series for `|z| >= 10`, reached from smaller arguments through
/// `ψ(z) = ψ(z+1) − 1/z`; reflection below `Re z = 1/2`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("digamma argument must be finite"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(digamma_right(one_minus) - PI * cot_pi(z));
    }
    Ok(digamma_right(z))
}

fn digamma_right(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < 10.0 {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    // Horner in z^-2 over the Bernoulli terms.
    let mut tail = Complex64::new(0.0, 0.0);
    for &c in ASYMPTOTIC.iter().rev() {
        tail = (tail + c) * inv2;
    }
    z.ln() - 0.5 * inv - tail - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frozen_values() {
        // mpmath.digamma to 30 digits.
        let cases = [
            (c(1.0, 0.0), c(-0.577_215_664_901_532_9, 0.0)),
            (c(1.0, 1.0), c(0.094_650_320_622_476_98, 1.076_674_047_468_581_2)),
            (c(1.0, 10.0), c(2.303_419_263_671_412_5, 1.520_796_326_794_896_6)),
            (c(101.0, 800.0), c(6.692_440_868_273_205, 1.445_825_979_190_945_4)),
            (c(0.3, 0.2), c(-2.453_365_467_675_574, 1.762_178_090_380_654_6)),
            (c(-1.5, 0.5), c(0.731_892_637_354_522_7, 2.640_659_519_977_514_6)),
            (c(6000.0, 800.0), c(8.708_243_668_960_917, 0.132_562_449_923_149_5)),
        ];
        for (z, expected) in cases {
            let got = digamma(z).unwrap();
            assert!((got - expected).norm() < 1e-12 * expected.norm().max(1.0), "z = {z}: {got}");
        }
    }

    #[test]
    fn recurrence_holds() {
        for z in [c(0.7, 2.0), c(3.0, -40.0), c(12.5, 0.1)] {
            let lhs = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
            assert!((lhs - z.inv()).norm() < 1e-12);
        }
    }

    #[test]
    fn poles() {
        assert!(digamma(c(0.0, 0.0)).is_err());
        assert!(digamma(c(-3.0, 0.0)).is_err());
    }
}
