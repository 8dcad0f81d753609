//! Phase shifts of a spherical square well `V(r) = −V₀` for `r < a`, by
//! matching the interior solution to `j_l cos δ − y_l sin δ` at `r = a`.

use std::f64::consts::PI;

use super::model::{PhaseShiftModel, ShortRangeTable};
use crate::error::{check_finite, Error, Result};
use crate::kinematics::PhysicalScenario;

/// Relative momentum step of the central difference for `dδ/dk`.
pub const DERIVATIVE_STEP: f64 = 1e-4;

/// Once past the well edge in l, phases below this are treated as zero.
const NEGLIGIBLE_PHASE: f64 = 1e-18;

/// Ratios `q_l = f_l/f_{l−1}` for l = 1..=n of the recessive solution of
/// `f_{l+1} + s f_{l−1} = (2l+1)/x f_l` by backward continued fraction
/// (`s = 1` for j_l, `s = −1` for i_l).
fn recessive_ratios(x: f64, n: usize, modified: bool) -> Vec<f64> {
    let start = n + 40 + (2.0 * x) as usize;
    let mut q = vec![0.0; n + 1];
    let mut next = 0.0;
    for l in (1..=start).rev() {
        let c = (2 * l + 1) as f64 / x;
        let value = if modified { 1.0 / (c + next) } else { 1.0 / (c - next) };
        if l <= n {
            q[l] = value;
        }
        next = value;
    }
    q
}

/// `(R, dR/dr)` of the regular interior solution at r = a, up to a common
/// l-dependent factor, for l = 0..=n.
fn interior(k_sq: f64, radius: f64, n: usize) -> Vec<(f64, f64)> {
    if k_sq == 0.0 {
        return (0..=n).map(|l| (radius, l as f64)).collect();
    }
    let modified = k_sq < 0.0;
    let kappa = k_sq.abs().sqrt();
    let x = kappa * radius;
    let q = recessive_ratios(x, n + 1, modified);
    (0..=n)
        .map(|l| {
            if l == 0 {
                if modified {
                    // i_0'/i_0 = coth x − 1/x
                    (1.0, kappa * (1.0 / x.tanh() - 1.0 / x))
                } else {
                    let (s, c) = x.sin_cos();
                    (s / x, kappa * (x * c - s) / (x * x))
                }
            } else {
                // f_l' = f_{l−1} − (l+1)/x f_l, scaled by 1/f_{l−1}.
                let ql = q[l];
                (ql, kappa * (1.0 - (l + 1) as f64 / x * ql))
            }
        })
        .map(|(r, dr)| {
            let m = r.abs().max(dr.abs());
            if m > 0.0 && m.is_finite() {
                (r / m, dr / m)
            } else {
                (r, dr)
            }
        })
        .collect()
}

/// Spherical `j_l, j_l', y_l, y_l'` at x for l = 0..=n. `y` runs upward
/// (stable); `j` comes from its backward ratios and the Wronskian
/// `j_l y_{l−1} − j_{l−1} y_l = 1/x²`.
fn exterior(x: f64, n: usize) -> Vec<[f64; 4]> {
    let (s, c) = x.sin_cos();
    let mut y = Vec::with_capacity(n + 3);
    y.push(-c / x);
    y.push(-c / (x * x) - s / x);
    for l in 1..=n + 1 {
        let next = (2 * l + 1) as f64 / x * y[l] - y[l - 1];
        y.push(next);
    }
    let q = recessive_ratios(x, n + 2, false);
    let j: Vec<f64> = (0..=n + 1).map(|l| 1.0 / (x * x * (q[l + 1] * y[l] - y[l + 1]))).collect();
    (0..=n)
        .map(|l| {
            let (dj, dy) = if l == 0 {
                (-j[1], -y[1])
            } else {
                let f = (l + 1) as f64 / x;
                (j[l - 1] - f * j[l], y[l - 1] - f * y[l])
            };
            [j[l], dj, y[l], dy]
        })
        .collect()
}

/// Phase shifts for l = 0..=l_max at momentum k. Entries beyond the point
/// where they become negligible are exactly zero.
fn phases_at(k: f64, mass: f64, depth: f64, radius: f64, l_max: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; l_max + 1];
    if depth == 0.0 {
        return Ok(out);
    }
    let k_sq_inner = k * k + 2.0 * mass * depth;
    let x = k * radius;
    let edge = x.max(k_sq_inner.abs().sqrt() * radius);
    // Phases fall off like (x/2)^{2l}/((2l+1)!!)², so this many terms always
    // reach the negligible level without overflowing y_l.
    let n = l_max.min(edge.ceil() as usize + 60);
    let inner = interior(k_sq_inner, radius, n);
    let outer = exterior(x, n);
    for l in 0..=n {
        let (r, dr) = inner[l];
        let [j, dj, y, dy] = outer[l];
        let num = k * dj * r - dr * j;
        let den = k * dy * r - dr * y;
        let delta = (num / den).atan();
        if !delta.is_finite() {
            return Err(Error::MatchingFailure { l });
        }
        out[l] = delta;
        if l as f64 > edge && delta.abs() < NEGLIGIBLE_PHASE {
            out[l] = 0.0;
            break;
        }
    }
    Ok(out)
}

fn wrap_half_pi(d: f64) -> f64 {
    d - PI * (d / PI).round()
}

/// Short-range table for a well of `depth` (energy; negative for a barrier)
/// and `radius` (natural length units) at the scenario momentum, with
/// `dδ/dk` from a central difference of step `1e-4·p`.
pub fn square_well_phase_shifts(depth: f64, radius: f64, scenario: &PhysicalScenario, l_max: usize) -> Result<PhaseShiftModel> {
    check_finite("well depth", depth)?;
    check_finite("well radius", radius)?;
    if radius <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "well radius",
            value: radius,
            reason: "must be positive",
        });
    }
    let k = scenario.momentum();
    let mass = scenario.mass();
    let h = DERIVATIVE_STEP * k;
    let centre = phases_at(k, mass, depth, radius, l_max)?;
    let above = phases_at(k + h, mass, depth, radius, l_max)?;
    let below = phases_at(k - h, mass, depth, radius, l_max)?;
    let derivative = above
        .iter()
        .zip(&below)
        .map(|(a, b)| wrap_half_pi(a - b) / (2.0 * h))
        .collect();
    Ok(PhaseShiftModel::ShortRange(ShortRangeTable::new(centre, derivative)?))
}
