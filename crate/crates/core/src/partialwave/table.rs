use std::io::{self, Write};

use num_complex::Complex64;

use super::model::{PhaseShiftModel, ShortRangeTable};
use crate::error::{Error, Result};
use crate::kinematics::{eta_bound, PhysicalScenario};
use crate::output::csv_row;
use crate::specfun::{coulomb_sigma_asymptotic, coulomb_sigma_row, digamma};

/// Largest accepted tail tolerance.
pub const MAX_TAIL_TOL: f64 = 1e-3;

/// Default tail tolerance.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Truncation always reaches `ε(L + ½) ≥ 6`, i.e. a weight tail below e^{−72}.
const POLICY_WIDTHS: f64 = 6.0;

/// Everything the series needs, per partial wave, for one scenario and
/// phase-shift model. Immutable once built.
#[derive(Debug, Clone)]
pub struct PartialWaveTable {
    scenario: PhysicalScenario,
    model: PhaseShiftModel,
    l_max: usize,
    weight: Vec<f64>,
    phase_cos: Vec<f64>,
    phase_sin: Vec<f64>,
    sin_cos: Vec<f64>,
    sin_sq: Vec<f64>,
    xi: Vec<f64>,
    tail_bound: f64,
}

/// `w_l = (2l + 1) exp(−2ε²(l + ½)²)`.
pub fn partial_weight(l: usize, eps: f64) -> f64 {
    let x = l as f64 + 0.5;
    2.0 * x * (-2.0 * eps * eps * x * x).exp()
}

/// Bound on the modulus of the neglected amplitude terms,
/// `2ε² Σ_{l > l_max} w_l`, which dominates them since |P_l| ≤ 1 and the
/// Gaussian shift factors are at most one.
pub fn tail_bound(eps: f64, l_max: usize) -> f64 {
    let mut total = 0.0;
    let mut l = l_max + 1;
    loop {
        let term = partial_weight(l, eps);
        total += term;
        if (eps * (l as f64 + 0.5) > 1.0 && term <= total * 1e-17) || eps * (l as f64 + 0.5) > 40.0 {
            break;
        }
        l += 1;
    }
    2.0 * eps * eps * total
}

/// Smallest `L` with `ε(L + ½) ≥ 6` whose tail bound is also below `tail_tol`.
pub fn default_l_max(eps: f64, tail_tol: f64) -> usize {
    let mut l = (POLICY_WIDTHS / eps - 0.5).ceil().max(0.0) as usize;
    while tail_bound(eps, l) >= tail_tol {
        l += 1;
    }
    l
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if !(tail_tol > 0.0 && tail_tol <= MAX_TAIL_TOL) {
        return Err(Error::InvalidParameter {
            name: "tail_tol",
            value: tail_tol,
            reason: "must lie in (0, 1e-3]",
        });
    }
    Ok(())
}

fn check_strength(scenario: &PhysicalScenario, model: &PhaseShiftModel) -> Result<()> {
    if matches!(model, PhaseShiftModel::ShortRange(_)) {
        return Ok(());
    }
    let bound = eta_bound(scenario.eps())?;
    if scenario.eta().abs() > bound {
        return Err(Error::StrengthBound {
            eta: scenario.eta(),
            bound,
            eps: scenario.eps(),
        });
    }
    Ok(())
}

/// Builds the table with the default truncation policy.
pub fn build_table(scenario: &PhysicalScenario, model: &PhaseShiftModel, tail_tol: f64) -> Result<PartialWaveTable> {
    check_tail_tol(tail_tol)?;
    let l_max = default_l_max(scenario.eps(), tail_tol);
    build_table_with_lmax(scenario, model, l_max)
}

/// Builds the table with an explicit truncation index, e.g. for convergence
/// studies. The tail bound is recorded but not enforced.
pub fn build_table_with_lmax(scenario: &PhysicalScenario, model: &PhaseShiftModel, l_max: usize) -> Result<PartialWaveTable> {
    check_strength(scenario, model)?;
    let eps = scenario.eps();
    let n = l_max + 1;
    let weight: Vec<f64> = (0..n).map(|l| partial_weight(l, eps)).collect();

    let (phases, xi) = match model {
        PhaseShiftModel::CoulombExact => coulomb_exact(scenario, l_max),
        PhaseShiftModel::CoulombAsymptotic => coulomb_asymptotic(scenario, l_max),
        PhaseShiftModel::ShortRange(table) => short_range(scenario, table, l_max)?,
    };

    let mut phase_cos = Vec::with_capacity(n);
    let mut phase_sin = Vec::with_capacity(n);
    let mut sin_cos = Vec::with_capacity(n);
    let mut sin_sq = Vec::with_capacity(n);
    for &phase in &phases {
        let (s, c) = phase.sin_cos();
        let (s2, c2) = (2.0 * phase).sin_cos();
        phase_cos.push(c2);
        phase_sin.push(s2);
        sin_cos.push(s * c);
        sin_sq.push(s * s);
    }

    Ok(PartialWaveTable {
        scenario: *scenario,
        model: model.clone(),
        l_max,
        weight,
        phase_cos,
        phase_sin,
        sin_cos,
        sin_sq,
        xi,
        tail_bound: tail_bound(eps, l_max),
    })
}

/// Phases σ_l and spatial shifts `ξ_l = 4εη(ln 2pR − 1 − ∂σ_l/∂η)`, the
/// derivative carried upward from `Re ψ(1 + iη)` by
/// `Re ψ(l + 2 + iη) = Re ψ(l + 1 + iη) + (l + 1)/((l + 1)² + η²)`.
fn coulomb_exact(scenario: &PhysicalScenario, l_max: usize) -> (Vec<f64>, Vec<f64>) {
    let eps = scenario.eps();
    let eta = scenario.eta();
    let sigma = coulomb_sigma_row(l_max, eta);
    let base = scenario.ln_2pr() - 1.0;
    let mut derivative = digamma(Complex64::new(1.0, eta)).expect("1 + i eta is never a pole").re;
    let mut xi = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        xi.push(4.0 * eps * eta * (base - derivative));
        let lp1 = (l + 1) as f64;
        derivative += lp1 / (lp1 * lp1 + eta * eta);
    }
    (sigma, xi)
}

/// Stirling phases and the shift written as
/// `ξ_l = 4εη(ln 2pR − 1 − ln|l + 1 + iη| − 1)`.
fn coulomb_asymptotic(scenario: &PhysicalScenario, l_max: usize) -> (Vec<f64>, Vec<f64>) {
    let eps = scenario.eps();
    let eta = scenario.eta();
    let base = scenario.ln_2pr() - 1.0;
    let sigma = (0..=l_max).map(|l| coulomb_sigma_asymptotic(l, eta)).collect();
    let xi = (0..=l_max)
        .map(|l| 4.0 * eps * eta * (base - ((l + 1) as f64).hypot(eta).ln() - 1.0))
        .collect();
    (sigma, xi)
}

/// `ξ_l = (2/σ_x) dδ_l/dk`.
fn short_range(scenario: &PhysicalScenario, table: &ShortRangeTable, l_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if table.len() < l_max + 1 {
        return Err(Error::TruncationMismatch { len: table.len(), l_max });
    }
    let scale = 2.0 / scenario.sigma_x();
    let phases = table.delta()[..=l_max].to_vec();
    let xi = table.ddelta_dk()[..=l_max].iter().map(|d| scale * d).collect();
    Ok((phases, xi))
}

impl PartialWaveTable {
    pub fn scenario(&self) -> &PhysicalScenario {
        &self.scenario
    }

    pub fn model(&self) -> &PhaseShiftModel {
        &self.model
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn eps(&self) -> f64 {
        self.scenario.eps()
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    /// `cos 2σ_l` (or `cos 2δ_l`).
    pub fn phase_cos(&self) -> &[f64] {
        &self.phase_cos
    }

    /// `sin 2σ_l` (or `sin 2δ_l`).
    pub fn phase_sin(&self) -> &[f64] {
        &self.phase_sin
    }

    /// `sin σ_l cos σ_l`, the real part of `e^{iσ_l} sin σ_l`.
    pub fn sin_cos(&self) -> &[f64] {
        &self.sin_cos
    }

    /// `sin² σ_l`, the imaginary part of `e^{iσ_l} sin σ_l`.
    pub fn sin_sq(&self) -> &[f64] {
        &self.sin_sq
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Columns `l, weight, cos2sigma, sin2sigma, xi`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "l,weight,cos2sigma,sin2sigma,xi")?;
        for l in 0..=self.l_max {
            writeln!(
                out,
                "{},{}",
                l,
                csv_row(&[self.weight[l], self.phase_cos[l], self.phase_sin[l], self.xi[l]])
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::dsigma_deta;
    use crate::units::UnitsContext;

    fn scenario(eta: f64, eps: f64) -> PhysicalScenario {
        let z2 = if eta < 0.0 { -2 } else { 2 };
        PhysicalScenario::from_eta(79, z2, 3727.379, eta, eps, &UnitsContext::default()).unwrap()
    }

    #[test]
    fn free_table_is_trivial() {
        let table = build_table(&scenario(0.0, 0.001), &PhaseShiftModel::CoulombExact, 1e-10).unwrap();
        assert!(table.xi().iter().all(|&x| x == 0.0));
        assert!(table.phase_cos().iter().all(|&c| c == 1.0));
        assert!(table.phase_sin().iter().all(|&s| s == 0.0));
        let l_max = table.l_max() as f64;
        assert!((l_max * 0.001 / 6.0 - 1.0).abs() < 0.1);
        assert_eq!(table.l_max(), 6000);
    }

    #[test]
    fn exact_shift_uses_digamma() {
        let eps = 0.001;
        let table = build_table(&scenario(10.0, eps), &PhaseShiftModel::CoulombExact, 1e-10).unwrap();
        let ln_2pr = 1.5 * 1000f64.ln();
        for l in [0usize, 1, 17, 600, 6000] {
            let expected = 4.0 * eps * 10.0 * (ln_2pr - 1.0 - dsigma_deta(l, 10.0));
            assert!((table.xi()[l] - expected).abs() < 1e-11, "l = {l}");
        }
        let h = 1e-5;
        let fd = (crate::specfun::coulomb_sigma_exact(0, 10.0 + h) - crate::specfun::coulomb_sigma_exact(0, 10.0 - h)) / (2.0 * h);
        let xi0 = 4.0 * eps * 10.0 * (ln_2pr - 1.0 - fd);
        assert!((table.xi()[0] - xi0).abs() < 1e-6);
    }

    #[test]
    fn asymptotic_shift_formula() {
        let eps = 0.001;
        let table = build_table(&scenario(800.0, eps), &PhaseShiftModel::CoulombAsymptotic, 1e-10).unwrap();
        let ln_2pr = 1.5 * 1000f64.ln();
        let expected = 4.0 * eps * 800.0 * (ln_2pr - 2.0 - (9.0f64 + 640000.0).sqrt().ln());
        assert!((table.xi()[2] - expected).abs() < 1e-12);
    }

    #[test]
    fn strength_bound_enforced() {
        let err = build_table(&scenario(845.0, 0.001), &PhaseShiftModel::CoulombExact, 1e-10).unwrap_err();
        assert!(matches!(err, Error::StrengthBound { .. }));
        assert!(build_table(&scenario(844.0, 0.001), &PhaseShiftModel::CoulombExact, 1e-10).is_ok());
        assert!(build_table(&scenario(-845.0, 0.001), &PhaseShiftModel::CoulombExact, 1e-10).is_err());
    }

    #[test]
    fn tail_tolerance_domain() {
        let s = scenario(1.0, 0.01);
        assert!(build_table(&s, &PhaseShiftModel::CoulombExact, 0.0).is_err());
        assert!(build_table(&s, &PhaseShiftModel::CoulombExact, 2e-3).is_err());
        assert!(build_table(&s, &PhaseShiftModel::CoulombExact, 1e-3).is_ok());
    }

    #[test]
    fn short_table_rejected() {
        let s = scenario(0.0, 0.01);
        let short = ShortRangeTable::new(vec![0.1; 10], vec![0.0; 10]).unwrap();
        let err = build_table(&s, &PhaseShiftModel::ShortRange(short), 1e-10).unwrap_err();
        assert_eq!(err, Error::TruncationMismatch { len: 10, l_max: 600 });
    }

    #[test]
    fn phases_on_unit_circle() {
        let table = build_table(&scenario(-37.0, 0.005), &PhaseShiftModel::CoulombExact, 1e-10).unwrap();
        for l in 0..=table.l_max() {
            let norm = table.phase_cos()[l].powi(2) + table.phase_sin()[l].powi(2);
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_bound_is_tiny_under_policy() {
        let table = build_table(&scenario(1.0, 0.01), &PhaseShiftModel::CoulombExact, 1e-10).unwrap();
        assert!(table.tail_bound() < 1e-30);
        assert!(table.weight().iter().all(|&w| w > 0.0));
        let peak = table.weight().iter().cloned().fold(0.0, f64::max);
        assert!(table.weight()[table.l_max()] / peak < 1e-10);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let table = build_table_with_lmax(&scenario(1.0, 0.01), &PhaseShiftModel::CoulombExact, 3).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "l,weight,cos2sigma,sin2sigma,xi");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("3,"));
    }
}
