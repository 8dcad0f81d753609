//! Numerical acceptance criteria, shared by the `acceptance` test target and
//! the `selftest` command. Each criterion reports pass/fail with the numbers
//! it measured; criterion 16 collects the largest probability seen by all the
//! others.

use std::f64::consts::PI;
use std::sync::Mutex;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::kinematics::{eps_from_energy_width, eta_bound, time_shift_seconds, PhysicalScenario, ScenarioFamily};
use crate::observables::{
    conservation_weight_sum, default_delta_profile, energy_ratio_rho, optical_theorem_check_short_range,
    probability_sphere_integral, rutherford_probability, shadow_angle, uniform_midpoints,
};
use crate::partialwave::{build_table, default_l_max, square_well_phase_shifts, PartialWaveTable, PhaseShiftModel};
use crate::scan::{sweep, GridSpec, Quantity, SweepOptions};
use crate::specfun::{
    coulomb_sigma_asymptotic, coulomb_sigma_exact, coulomb_sigma_row, dsigma_deta, i_integral_closed_form,
    i_integral_quadrature,
};
use crate::units::{kev_to_mev, UnitsContext};

const EPS: f64 = 0.001;
const TAIL_TOL: f64 = 1e-12;

/// Largest admissible probability anywhere in the suite.
pub const UNITARITY_LIMIT: f64 = 1.0 + 1e-6;

#[derive(Debug, Clone, Copy, Default)]
pub struct AcceptanceContext {
    pub units: UnitsContext,
    pub workers: Option<usize>,
}

impl AcceptanceContext {
    /// Negative control: a fine-structure constant that is 5% too large.
    pub fn with_corrupted_alpha(mut self) -> Self {
        self.units.fine_structure_alpha *= 1.05;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<34} {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Running maximum of every probability sampled by the suite.
#[derive(Debug, Default)]
pub struct ProbabilityProbe {
    max: Mutex<f64>,
}

impl ProbabilityProbe {
    pub fn record(&self, p: f64) {
        let mut m = self.max.lock().expect("probe lock");
        if !(p <= *m) {
            *m = p;
        }
    }

    pub fn record_all(&self, values: &[f64]) {
        values.iter().for_each(|&p| self.record(p));
    }

    pub fn max(&self) -> f64 {
        *self.max.lock().expect("probe lock")
    }
}

type Check = (bool, String);

fn family(ctx: &AcceptanceContext, eps: f64) -> ScenarioFamily {
    ScenarioFamily {
        units: ctx.units,
        mass: ctx.units.projectile_mass_mev,
        ..ScenarioFamily::alpha_on_gold(eps)
    }
}

fn coulomb_table(ctx: &AcceptanceContext, eta: f64) -> Result<PartialWaveTable> {
    let scenario = family(ctx, EPS).at_eta(eta)?;
    build_table(&scenario, &PhaseShiftModel::CoulombExact, TAIL_TOL)
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn strength_bound() -> Result<Check> {
    let bound = eta_bound(EPS)?;
    Ok((within(bound, 844.0, 1.0), format!("eta_bound(0.001) = {bound:.3}")))
}

fn weight_sum(ctx: &AcceptanceContext) -> Result<Check> {
    let sum = conservation_weight_sum(&coulomb_table(ctx, 0.0)?);
    Ok((within(sum, 1.0, 1e-5), format!("weight sum = {sum:.9}")))
}

fn sphere_integral(ctx: &AcceptanceContext, probe: &ProbabilityProbe) -> Result<Check> {
    let table = coulomb_table(ctx, 800.0)?;
    let profile = default_delta_profile(&table, &uniform_midpoints(200))?;
    probe.record_all(&profile.p_max);
    let value = probability_sphere_integral(&table, &profile)?;
    Ok((within(value, 0.998, 0.005), format!("eta = 800: integral = {value:.5} (200 intervals)")))
}

fn shadow_angles() -> Result<Check> {
    let a = shadow_angle(EPS, 10.0);
    let b = shadow_angle(EPS, -10.0);
    let c = shadow_angle(EPS, 1.0);
    let d = shadow_angle(2.1e-4, 23.0).to_degrees();
    let ok = within(a, 0.04, 1e-6) && within(b, 0.04, 1e-6) && within(c, 0.004, 1e-7) && within(d, 1.1, 0.05);
    Ok((ok, format!("theta0 = {a:.6}, {b:.6}, {c:.7} rad; {d:.3} deg")))
}

fn time_shifts(ctx: &AcceptanceContext, probe: &ProbabilityProbe) -> Result<Check> {
    let cases = [(10.0, 0.03, 0.4, 0.1), (10.0, 0.0, 1.2, 0.15), (-10.0, 0.03, -0.4, 0.1), (800.0, PI / 2.0, 5.3, 0.3)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (eta, theta, target, tol) in cases {
        let table = coulomb_table(ctx, eta)?;
        let profile = default_delta_profile(&table, &[theta])?;
        probe.record_all(&profile.p_max);
        let d = profile.delta_max[0];
        ok &= within(d, target, tol);
        parts.push(format!("eta={eta} theta={theta:.3}: {d:+.3} (want {target:+.1})"));
    }
    Ok((ok, parts.join("; ")))
}

fn time_delay(ctx: &AcceptanceContext) -> Result<Check> {
    let scenario = family(ctx, EPS).at_energy(kev_to_mev(3.8))?;
    let seconds = time_shift_seconds(&scenario, 5.3, &ctx.units);
    Ok((within(seconds / 2.3e-16, 1.0, 0.05), format!("delta = 5.3 at 3.8 keV: {seconds:.3e} s")))
}

fn kinematics(ctx: &AcceptanceContext) -> Result<Check> {
    let fam = family(ctx, EPS);
    let low = fam.at_energy(kev_to_mev(3.8))?.eta();
    let high = fam.at_energy(4.8)?.eta();
    let eps = eps_from_energy_width(kev_to_mev(2.0), 4.8);
    let quoted = format!("{eps:.1e}");
    let ok = within(low / 800.0, 1.0, 0.02) && within(high / 23.0, 1.0, 0.02) && quoted == "2.1e-4";
    Ok((ok, format!("eta(3.8 keV) = {low:.2}, eta(4.8 MeV) = {high:.3}, eps = {quoted}")))
}

fn rutherford_regime(ctx: &AcceptanceContext, probe: &ProbabilityProbe) -> Result<Check> {
    let table = coulomb_table(ctx, 10.0)?;
    let scenario = *table.scenario();
    let delta = 0.4;
    let mut worst = (0.0f64, 0.0);
    for i in 0..=58 {
        let theta = 0.1 + 0.05 * i as f64;
        let p = table.probability(theta, delta);
        probe.record(p);
        let dev = p / rutherford_probability(&scenario, theta)? - 1.0;
        if dev.abs() > worst.0.abs() {
            worst = (dev, theta);
        }
    }
    let mut strongest = (0.0f64, 0.0);
    for i in 1..50 {
        let theta = 0.001 * i as f64;
        let p = table.probability(theta, delta);
        probe.record(p);
        let dev = p / rutherford_probability(&scenario, theta)? - 1.0;
        if dev.abs() > strongest.0.abs() {
            strongest = (dev, theta);
        }
    }
    let ok = worst.0.abs() <= 0.10 && strongest.0.abs() > 0.5;
    Ok((
        ok,
        format!(
            "max |dev| on [0.1, 3.0] = {:.4} at theta = {:.2}; max |dev| below 0.05 = {:.3} at theta = {:.3}",
            worst.0.abs(),
            worst.1,
            strongest.0.abs(),
            strongest.1
        ),
    ))
}

fn energy_scan(ctx: &AcceptanceContext) -> Result<Check> {
    let fam = family(ctx, EPS);
    let mut rhos = Vec::new();
    for e in [3.8, 10.0, 20.0, 50.0, 100.0, 200.0] {
        rhos.push(energy_ratio_rho(&fam, kev_to_mev(e))?.rho);
    }
    let first = rhos[0] / 2.5e-7;
    let monotone = rhos.windows(2).all(|w| w[1] > w[0]);
    let ok = (0.5..=2.0).contains(&first) && monotone;
    let listed: Vec<String> = rhos.iter().map(|r| format!("{r:.3e}")).collect();
    Ok((ok, format!("rho = [{}]", listed.join(", "))))
}

fn free_field(ctx: &AcceptanceContext, probe: &ProbabilityProbe) -> Result<Check> {
    let table = coulomb_table(ctx, 0.0)?;
    let grid = GridSpec::new((0.0, 10.0 * EPS, 21), (-4.0, 4.0, 81))?;
    let options = SweepOptions { workers: ctx.workers, ..Default::default() };
    let field = sweep(&table, &grid, Quantity::Probability, &options)?;
    probe.record_all(&field.values);
    let mut worst = 0.0f64;
    for (i, theta) in grid.thetas().iter().enumerate() {
        for (j, delta) in grid.deltas().iter().enumerate() {
            let expected = (-theta * theta / (4.0 * EPS * EPS)).exp() * (-delta * delta / 4.0).exp();
            worst = worst.max((field.value(i, j) - expected).abs());
        }
    }
    Ok((worst <= 5.0 * EPS * EPS, format!("max |P - gaussian| = {worst:.3e} (limit {:.1e})", 5.0 * EPS * EPS)))
}

fn phase_identities() -> Result<Check> {
    let mut recurrence = 0.0f64;
    for eta in [-800.0, -10.0, -1.0, 0.5, 1.0, 10.0, 800.0] {
        let row = coulomb_sigma_row(3000, eta);
        for l in 0..3000 {
            recurrence = recurrence.max(((row[l + 1] - row[l]) - eta.atan2((l + 1) as f64)).abs());
        }
    }
    let mut derivative = 0.0f64;
    let h = 1e-5;
    for l in [0usize, 5, 100] {
        for eta in [-800.0, -10.0, -1.0, 1.0, 10.0, 800.0] {
            let fd = (coulomb_sigma_exact(l, eta + h) - coulomb_sigma_exact(l, eta - h)) / (2.0 * h);
            derivative = derivative.max((fd / dsigma_deta(l, eta) - 1.0).abs());
        }
    }
    let mut constant = 0.0f64;
    for l in [0usize, 1, 10, 100, 1000, 5000] {
        for eta in [0.1, 1.0, 10.0, 100.0, 800.0] {
            let gap = (Complex64::from_polar(1.0, 2.0 * coulomb_sigma_exact(l, eta))
                - Complex64::from_polar(1.0, 2.0 * coulomb_sigma_asymptotic(l, eta)))
            .norm();
            constant = constant.max(gap * ((l + 1) as f64).hypot(eta));
        }
    }
    let ok = recurrence <= 1e-12 && derivative <= 1e-6 && constant <= 3.0;
    Ok((
        ok,
        format!("recurrence {recurrence:.1e}, d sigma/d eta {derivative:.1e}, asymptotic constant {constant:.3}"),
    ))
}

fn i_integral() -> Result<Check> {
    let mut worst = 0.0f64;
    for l in [0usize, 1000, 3000] {
        let rel = i_integral_quadrature(l, EPS) / i_integral_closed_form(l, EPS) - 1.0;
        worst = worst.max(rel.abs());
    }
    Ok((worst <= 1e-3, format!("max relative gap {worst:.2e}")))
}

fn decomposition(ctx: &AcceptanceContext, probe: &ProbabilityProbe) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_251_015);
    let mut worst = 0.0f64;
    for eta in [0.1, 10.0, 800.0] {
        let table = coulomb_table(ctx, eta)?;
        for _ in 0..100 {
            let theta = rng.gen_range(0.0..PI);
            let delta = rng.gen_range(-8.0..12.0);
            let a = table.amplitude(theta, delta);
            probe.record(a.norm_sqr());
            let split = table.amplitude_forward(theta, delta) + Complex64::i() * table.amplitude_scatter(theta, delta);
            worst = worst.max((a - split).norm());
        }
    }
    Ok((worst <= 1e-10, format!("max |A - (A_F + i A_S)| = {worst:.2e}")))
}

fn square_well_check(ctx: &AcceptanceContext, eps: f64) -> Result<(f64, f64)> {
    let scenario = PhysicalScenario::with_units(0, 79, ctx.units.projectile_mass_mev, 5.2233, eps, &ctx.units)?;
    let radius = ctx.units.fm_to_natural(5.0);
    let model = square_well_phase_shifts(2.0, radius, &scenario, default_l_max(eps, TAIL_TOL))?;
    let PhaseShiftModel::ShortRange(table) = model else {
        unreachable!("square well yields a short-range table")
    };
    let largest = table.delta().iter().fold(0.0f64, |m, d| m.max(d.abs()));
    Ok((optical_theorem_check_short_range(&table, &scenario)?.relative_difference, largest))
}

fn short_range_optical(ctx: &AcceptanceContext) -> Result<Check> {
    let (fine, largest) = square_well_check(ctx, 0.001)?;
    let (coarse, _) = square_well_check(ctx, 0.01)?;
    let improvement = coarse / fine;
    let ok = fine <= 1e-4 && (80.0..=125.0).contains(&improvement) && (0.5..=1.5).contains(&largest);
    Ok((
        ok,
        format!("rel diff {fine:.3e} (eps 1e-3), {coarse:.3e} (eps 1e-2), ratio {improvement:.1}, max |delta_l| {largest:.3}"),
    ))
}

fn determinism(ctx: &AcceptanceContext, probe: &ProbabilityProbe) -> Result<Check> {
    let table = coulomb_table(ctx, 10.0)?;
    let grid = GridSpec::new((0.0, 0.5, 120), (-4.0, 4.0, 41))?;
    let run = |workers| sweep(&table, &grid, Quantity::Probability, &SweepOptions { workers: Some(workers), ..Default::default() });
    let reference = run(1)?;
    probe.record_all(&reference.values);
    let mut identical = true;
    for workers in [4, 8, 8] {
        let other = run(workers)?;
        identical &= other.values.iter().zip(&reference.values).all(|(a, b)| a.to_bits() == b.to_bits());
        identical &= other.checksum == reference.checksum;
    }
    Ok((identical, format!("{} cells, workers 1/4/8/8 bit-identical: {identical}", grid.cells())))
}

type Runner<'a> = Box<dyn Fn() -> Result<Check> + 'a>;

/// Runs every criterion in order.
pub fn run_all(ctx: &AcceptanceContext) -> Vec<CriterionOutcome> {
    let probe = ProbabilityProbe::default();
    let criteria: Vec<(u32, &'static str, Runner)> = vec![
        (1, "strength bound", Box::new(strength_bound)),
        (2, "conservation weight sum", Box::new(|| weight_sum(ctx))),
        (3, "sphere integral at eta = 800", Box::new(|| sphere_integral(ctx, &probe))),
        (4, "shadow-zone estimates", Box::new(shadow_angles)),
        (5, "time-shift extraction", Box::new(|| time_shifts(ctx, &probe))),
        (6, "time delay in seconds", Box::new(|| time_delay(ctx))),
        (7, "kinematic correspondence", Box::new(|| kinematics(ctx))),
        (8, "Rutherford agreement regime", Box::new(|| rutherford_regime(ctx, &probe))),
        (9, "energy-scan ratio", Box::new(|| energy_scan(ctx))),
        (10, "free-case oracle", Box::new(|| free_field(ctx, &probe))),
        (11, "phase-shift identities", Box::new(phase_identities)),
        (12, "angular integral oracle", Box::new(i_integral)),
        (13, "forward/scatter decomposition", Box::new(|| decomposition(ctx, &probe))),
        (14, "short-range optical theorem", Box::new(|| short_range_optical(ctx))),
        (15, "determinism", Box::new(|| determinism(ctx, &probe))),
    ];
    let mut outcomes: Vec<CriterionOutcome> = criteria
        .into_iter()
        .map(|(id, name, run)| {
            let start = Instant::now();
            let (passed, detail) = match run() {
                Ok(check) => check,
                Err(e) => (false, format!("error: {e}")),
            };
            CriterionOutcome {
                id,
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    let max = probe.max();
    outcomes.push(CriterionOutcome {
        id: 16,
        name: "unitarity",
        passed: max <= UNITARITY_LIMIT,
        detail: format!("largest sampled probability {max:.12}"),
        seconds: 0.0,
    });
    outcomes
}
