//! Location of the peak in δ of `P(θ, δ)` at fixed angles.

use std::f64::consts::PI;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::cross_section::{probability_to_dcs, rutherford_dcs};
use crate::error::{Error, Result};
use crate::kinematics::ScenarioFamily;
use crate::output::csv_row;
use crate::partialwave::{build_table, PartialWaveTable, PhaseShiftModel, DEFAULT_TAIL_TOL};
use crate::specfun::legendre_row;

/// Coarse scan step in δ.
pub const COARSE_STEP: f64 = 0.2;

/// Default scan window `[−8, 8]`.
pub const DEFAULT_DELTA_RANGE: (f64, f64) = (-8.0, 8.0);

/// The window is widened by its own width whenever the maximum sits on an
/// edge, at most this many times.
const MAX_EXTENSIONS: usize = 8;

/// Profiles whose max − min over the scan stays below this are flagged flat.
const FLAT_PROMINENCE: f64 = 1e-12;

/// Per-angle peak position and height in δ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaProfile {
    pub thetas: Vec<f64>,
    pub delta_max: Vec<f64>,
    pub p_max: Vec<f64>,
    /// `(1/√(4π)) ∫ P dδ`, which equals the peak height for an exactly
    /// Gaussian profile of unit δ-variance scale.
    pub p_max_integral: Vec<f64>,
    /// `max_δ |P(θ, δ) − exp(−(δ − δ_max)²/4) P_max|` over the scan.
    pub factorization_residual: Vec<f64>,
    pub flat: Vec<bool>,
}

#[derive(Debug, Clone, Copy)]
struct PeakFit {
    delta_max: f64,
    p_max: f64,
    integral: f64,
    residual: f64,
    flat: bool,
}

fn scan_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

fn fit_peak(table: &PartialWaveTable, theta: f64, range: (f64, f64), coarse_n: usize) -> PeakFit {
    let row = legendre_row(theta, table.l_max()).values;
    let eval = |d: f64| table.probability_with_row(&row, d);
    let width = range.1 - range.0;
    let mut deltas = scan_points(range.0, range.1, coarse_n);
    let mut probs: Vec<f64> = deltas.iter().map(|&d| eval(d)).collect();
    let step = if coarse_n > 1 { width / (coarse_n - 1) as f64 } else { width };

    for _ in 0..MAX_EXTENSIONS {
        let best = argmax(&probs);
        let extend_low = best == 0;
        let extend_high = best + 1 == probs.len();
        if !(extend_low || extend_high) || coarse_n < 3 || probs[best] == 0.0 {
            break;
        }
        let n_new = (width / step).round() as usize;
        if extend_high {
            let start = *deltas.last().unwrap();
            for i in 1..=n_new {
                let d = start + step * i as f64;
                deltas.push(d);
                probs.push(eval(d));
            }
        } else {
            let start = deltas[0];
            let mut new_d: Vec<f64> = (1..=n_new).rev().map(|i| start - step * i as f64).collect();
            let mut new_p: Vec<f64> = new_d.iter().map(|&d| eval(d)).collect();
            new_d.extend_from_slice(&deltas);
            new_p.extend_from_slice(&probs);
            deltas = new_d;
            probs = new_p;
        }
    }

    let best = argmax(&probs);
    let (lo, hi) = probs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
    let flat = hi - lo < FLAT_PROMINENCE;
    if flat {
        log::debug!("flat delta profile at theta = {theta}: prominence {:e}", hi - lo);
    }

    let mut delta_max = deltas[best];
    let mut p_max = probs[best];
    if best > 0 && best + 1 < probs.len() && !flat {
        let (a, b, c) = (probs[best - 1], probs[best], probs[best + 1]);
        if a > 0.0 && c > 0.0 {
            let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
            let curvature = la - 2.0 * lb + lc;
            if curvature < 0.0 {
                let offset = 0.5 * (la - lc) / curvature;
                let candidate = deltas[best] + offset * step;
                let refined = eval(candidate);
                if refined >= p_max {
                    delta_max = candidate;
                    p_max = refined;
                }
            }
        }
    }

    let mut integral = 0.0;
    for pair in probs.windows(2) {
        integral += 0.5 * (pair[0] + pair[1]) * step;
    }
    integral /= (4.0 * PI).sqrt();

    let residual = deltas
        .iter()
        .zip(&probs)
        .map(|(&d, &p)| {
            let x = d - delta_max;
            (p - (-x * x / 4.0).exp() * p_max).abs()
        })
        .fold(0.0, f64::max);

    PeakFit {
        delta_max,
        p_max,
        integral,
        residual,
        flat,
    }
}

/// Scans δ over `delta_range` with `coarse_n` points at each angle (widening
/// the window while the maximum sits on its edge) and refines the peak with a
/// parabola through the logarithms of the three best samples. Angles are
/// processed in parallel; the output order follows `thetas`.
pub fn delta_profile(table: &PartialWaveTable, thetas: &[f64], delta_range: (f64, f64), coarse_n: usize) -> Result<DeltaProfile> {
    if !(delta_range.0 <= -8.0 && delta_range.1 >= 8.0) {
        return Err(Error::InvalidParameter {
            name: "delta_range",
            value: delta_range.1 - delta_range.0,
            reason: "must contain [-8, 8]",
        });
    }
    if coarse_n < 3 {
        return Err(Error::InvalidParameter {
            name: "coarse_n",
            value: coarse_n as f64,
            reason: "need at least three scan points",
        });
    }
    let fits: Vec<PeakFit> = thetas.par_iter().map(|&t| fit_peak(table, t, delta_range, coarse_n)).collect();
    Ok(DeltaProfile {
        thetas: thetas.to_vec(),
        delta_max: fits.iter().map(|f| f.delta_max).collect(),
        p_max: fits.iter().map(|f| f.p_max).collect(),
        p_max_integral: fits.iter().map(|f| f.integral).collect(),
        factorization_residual: fits.iter().map(|f| f.residual).collect(),
        flat: fits.iter().map(|f| f.flat).collect(),
    })
}

/// Number of coarse points giving [`COARSE_STEP`] over `range`.
pub fn coarse_points(range: (f64, f64)) -> usize {
    ((range.1 - range.0) / COARSE_STEP).round() as usize + 1
}

/// [`delta_profile`] over the default window and step.
pub fn default_delta_profile(table: &PartialWaveTable, thetas: &[f64]) -> Result<DeltaProfile> {
    delta_profile(table, thetas, DEFAULT_DELTA_RANGE, coarse_points(DEFAULT_DELTA_RANGE))
}

impl DeltaProfile {
    /// A profile that pins δ instead of searching for the peak.
    pub fn at_fixed_delta(table: &PartialWaveTable, thetas: &[f64], delta: f64) -> Self {
        let p: Vec<f64> = thetas.par_iter().map(|&t| table.probability(t, delta)).collect();
        let n = thetas.len();
        Self {
            thetas: thetas.to_vec(),
            delta_max: vec![delta; n],
            p_max_integral: vec![f64::NAN; n],
            p_max: p,
            factorization_residual: vec![f64::NAN; n],
            flat: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Columns `theta, delta_max, p_max, dcs, rutherford, ratio`; the
    /// Rutherford columns read `inf` at θ = 0.
    pub fn write_csv<W: Write>(&self, table: &PartialWaveTable, mut out: W) -> io::Result<()> {
        writeln!(out, "theta,delta_max,p_max,dcs,rutherford,ratio")?;
        let to_dcs = probability_to_dcs(table.scenario());
        for i in 0..self.len() {
            let dcs = self.p_max[i] * to_dcs;
            let (ruth, ratio) = match rutherford_dcs(table.scenario(), self.thetas[i]) {
                Ok(r) => (r, dcs / r),
                Err(_) => (f64::INFINITY, f64::INFINITY),
            };
            writeln!(out, "{}", csv_row(&[self.thetas[i], self.delta_max[i], self.p_max[i], dcs, ruth, ratio]))?;
        }
        Ok(())
    }
}

/// Midpoints of `n` equal intervals on [0, π].
pub fn uniform_midpoints(n: usize) -> Vec<f64> {
    let h = PI / n as f64;
    (0..n).map(|i| (i as f64 + 0.5) * h).collect()
}

/// Midpoints of a partition that resolves forward structure: intervals of
/// width ε/20 out to 20ε, then `n` intervals growing geometrically to π.
pub fn forward_resolving_midpoints(n: usize, eps: f64) -> Vec<f64> {
    let edge = 20.0 * eps;
    let fine = 400;
    let h_fine = edge / fine as f64;
    let ratio = (PI / edge).powf(1.0 / n as f64);
    let mut mids: Vec<f64> = (0..fine).map(|i| (i as f64 + 0.5) * h_fine).collect();
    let mut lower = edge;
    for i in 1..=n {
        let upper = if i == n { PI } else { edge * ratio.powi(i as i32) };
        mids.push(0.5 * (lower + upper));
        lower = upper;
    }
    mids
}

/// `(1/2ε²) ∫_0^π sin θ P(θ, δ_max(θ)) dθ` by the midpoint rule on the
/// partition whose midpoints are `profile.thetas`.
pub fn probability_sphere_integral(table: &PartialWaveTable, profile: &DeltaProfile) -> Result<f64> {
    let mut lower = 0.0;
    let mut total = 0.0;
    for (&mid, &p) in profile.thetas.iter().zip(&profile.p_max) {
        let width = 2.0 * (mid - lower);
        if !(width > 0.0) {
            return Err(Error::InvalidParameter {
                name: "profile angles",
                value: mid,
                reason: "must be increasing interval midpoints starting from 0",
            });
        }
        total += mid.sin() * p * width;
        lower += width;
    }
    if (lower - PI).abs() > 1e-9 {
        return Err(Error::InvalidParameter {
            name: "profile angles",
            value: lower,
            reason: "partition must end at pi",
        });
    }
    let eps = table.eps();
    Ok(total / (2.0 * eps * eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoPoint {
    pub energy: f64,
    pub eta: f64,
    pub delta_max: f64,
    pub rho: f64,
}

/// Angle at which the energy dependence of the cross-section ratio is taken.
pub const RHO_ANGLE: f64 = PI / 4.0;

/// Ratio of the predicted to the Rutherford cross section at θ = π/4, with δ
/// set to the peak position at that angle and energy.
pub fn energy_ratio_rho(family: &ScenarioFamily, energy: f64) -> Result<RhoPoint> {
    let scenario = family.at_energy(energy)?;
    let table = build_table(&scenario, &PhaseShiftModel::CoulombExact, DEFAULT_TAIL_TOL)?;
    let profile = default_delta_profile(&table, &[RHO_ANGLE])?;
    let dcs = profile.p_max[0] * probability_to_dcs(&scenario);
    Ok(RhoPoint {
        energy,
        eta: scenario.eta(),
        delta_max: profile.delta_max[0],
        rho: dcs / rutherford_dcs(&scenario, RHO_ANGLE)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::PhysicalScenario;
    use crate::units::UnitsContext;

    fn table(eta: f64, eps: f64) -> PartialWaveTable {
        let z2 = if eta < 0.0 { -2 } else { 2 };
        let s = PhysicalScenario::from_eta(79, z2, 3727.379, eta, eps, &UnitsContext::default()).unwrap();
        build_table(&s, &PhaseShiftModel::CoulombExact, 1e-10).unwrap()
    }

    #[test]
    fn free_profile_peaks_at_zero() {
        let t = table(0.0, 0.01);
        let prof = default_delta_profile(&t, &[0.0, 0.01]).unwrap();
        assert!(prof.delta_max[0].abs() < 1e-9);
        assert!((prof.p_max[0] - 1.0).abs() < 1e-3);
        assert!((prof.p_max_integral[0] / prof.p_max[0] - 1.0).abs() < 1e-6);
        assert!(prof.factorization_residual[0] < 1e-9);
    }

    #[test]
    fn window_must_cover_default() {
        let t = table(0.0, 0.01);
        assert!(delta_profile(&t, &[0.1], (-4.0, 4.0), 41).is_err());
        assert!(delta_profile(&t, &[0.1], (-8.0, 8.0), 2).is_err());
    }

    #[test]
    fn edge_maximum_extends_window() {
        // Large η puts the backward peak beyond δ = 8.
        let t = table(800.0, 0.001);
        let prof = default_delta_profile(&t, &[3.0]).unwrap();
        assert!(prof.delta_max[0] > 8.0, "{}", prof.delta_max[0]);
        let fixed = t.probability(3.0, prof.delta_max[0]);
        assert_eq!(fixed, prof.p_max[0]);
        for d in [prof.delta_max[0] - 0.3, prof.delta_max[0] + 0.3] {
            assert!(t.probability(3.0, d) < prof.p_max[0]);
        }
    }

    #[test]
    fn free_sphere_integral_is_one() {
        let eps = 0.001;
        let t = table(0.0, eps);
        let thetas = forward_resolving_midpoints(200, eps);
        let prof = DeltaProfile::at_fixed_delta(&t, &thetas, 0.0);
        let v = probability_sphere_integral(&t, &prof).unwrap();
        assert!((v - 1.0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn partition_checks() {
        let t = table(0.0, 0.01);
        let prof = DeltaProfile::at_fixed_delta(&t, &[0.1, 0.2], 0.0);
        assert!(probability_sphere_integral(&t, &prof).is_err());
    }

    #[test]
    fn csv_sentinel_at_forward_angle() {
        let t = table(1.0, 0.01);
        let prof = DeltaProfile::at_fixed_delta(&t, &[0.0, 1.0], 0.0);
        let mut buf = Vec::new();
        prof.write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().nth(1).unwrap();
        assert!(first.ends_with(",inf,inf"));
    }
}
