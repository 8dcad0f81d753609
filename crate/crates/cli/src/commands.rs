use std::f64::consts::PI;
use std::io::Write;

use anyhow::anyhow;
use serde_json::json;
use wavepacket_core::acceptance::{run_all, AcceptanceContext};
use wavepacket_core::kinematics::{eta_bound, ScenarioFamily};
use wavepacket_core::observables::{
    conservation_weight_sum, default_delta_profile, delta_profile, energy_ratio_rho, forward_resolving_midpoints,
    optical_ratio, optical_theorem_check_short_range, probability_sphere_integral, probability_to_dcs,
    rutherford_dcs, rutherford_probability, scattering_amplitude_f, total_cross_section, uniform_midpoints,
    DeltaProfile, OpticalRatio, DEFAULT_DELTA_RANGE,
};
use wavepacket_core::partialwave::{build_table, default_l_max, square_well_phase_shifts};
use wavepacket_core::scan::{sweep, GridSpec, Quantity, SweepOptions};
use wavepacket_core::units::{kev_to_mev, mev_to_kev, UnitsContext};
use wavepacket_core::{Error, ModelKind, PartialWaveTable, PhaseShiftModel, PhysicalScenario};

use crate::table_out::Output;
use crate::{Failure, RunConfig};

/// Beyond this 4ε|η| the forward peak is shadowed and a uniform partition of
/// the sphere integral suffices.
const FORWARD_PEAK_LEVEL: f64 = 0.1;

/// Square-well runs need these.
const WELL_DEPTH_MISSING: &str = "square-well model needs --well-depth-mev and --well-radius-fm";

impl RunConfig {
    fn family(&self, units: &UnitsContext) -> ScenarioFamily {
        ScenarioFamily {
            z1: self.z1,
            z2: self.z2,
            mass: self.mass_mev,
            eps: self.eps,
            units: *units,
        }
    }

    fn scenario(&self) -> Result<PhysicalScenario, Failure> {
        let units = UnitsContext::default();
        let energy = match (self.energy_kev, self.energy_mev, self.eta) {
            (Some(kev), None, None) => kev_to_mev(kev),
            (None, Some(mev), None) => mev,
            (None, None, Some(eta)) => return Ok(self.family(&units).at_eta(eta)?),
            _ => return Err(Failure::Config(anyhow!("give exactly one of --energy-kev, --energy-mev, --eta"))),
        };
        Ok(PhysicalScenario::with_units(self.z1, self.z2, self.mass_mev, energy, self.eps, &units)?)
    }

    fn model(&self, scenario: &PhysicalScenario) -> Result<PhaseShiftModel, Failure> {
        Ok(match self.model {
            ModelKind::CoulombExact => PhaseShiftModel::CoulombExact,
            ModelKind::CoulombAsymptotic => PhaseShiftModel::CoulombAsymptotic,
            ModelKind::ShortRange => {
                let (Some(depth), Some(radius)) = (self.well_depth_mev, self.well_radius_fm) else {
                    return Err(Failure::Config(anyhow!(WELL_DEPTH_MISSING)));
                };
                let radius = UnitsContext::default().fm_to_natural(radius);
                let l_max = default_l_max(scenario.eps(), self.tail_tol);
                square_well_phase_shifts(depth, radius, scenario, l_max)?
            }
        })
    }

    fn table_for(&self, scenario: &PhysicalScenario) -> Result<PartialWaveTable, Failure> {
        let model = self.model(scenario)?;
        Ok(build_table(scenario, &model, self.tail_tol)?)
    }

    fn table(&self) -> Result<PartialWaveTable, Failure> {
        self.table_for(&self.scenario()?)
    }

    fn meta(&self, command: &str, table: &PartialWaveTable) -> serde_json::Value {
        json!({
            "command": command,
            "scenario": table.scenario(),
            "model": table.model().kind().as_str(),
            "l_max": table.l_max(),
            "tail_tol": self.tail_tol,
        })
    }

    fn emit(&self, output: &Output) -> Result<(), Failure> {
        output.emit(self.format, self.out.as_deref())?;
        Ok(())
    }

    /// Summary lines go to stdout when the data goes to a file, else stderr.
    fn say(&self, line: &str) {
        if self.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }

    fn install_workers(&self) -> Result<(), Failure> {
        if let Some(n) = self.workers {
            if n == 0 {
                return Err(Failure::Config(anyhow!("--workers must be at least 1")));
            }
            // Only the first call in a process takes effect.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    GridSpec::new((0.0, 0.0, n.max(1)), (lo, hi, n.max(1))).map(|g| g.deltas()).unwrap_or_default()
}

fn config_error(msg: &str) -> Failure {
    Failure::Config(anyhow!(msg.to_string()))
}

pub fn profile_delta(run: &RunConfig, theta: f64, deltas: (f64, f64, usize)) -> Result<(), Failure> {
    run.install_workers()?;
    if !(0.0..=PI).contains(&theta) {
        return Err(config_error("--theta must lie in [0, pi]"));
    }
    let table = run.table()?;
    let grid = GridSpec::new((theta, theta, 1), deltas)?;
    let field = sweep(&table, &grid, Quantity::Probability, &SweepOptions::default())?;
    let mut out = Output::new(&["delta", "probability"], run.meta("profile-delta", &table));
    for (d, p) in grid.deltas().iter().zip(&field.values) {
        out.push(vec![*d, *p]);
    }
    run.emit(&out)?;
    let range = (deltas.0.min(DEFAULT_DELTA_RANGE.0), deltas.1.max(DEFAULT_DELTA_RANGE.1));
    let profile = delta_profile(&table, &[theta], range, wavepacket_core::observables::coarse_points(range))?;
    run.say(&format!(
        "theta = {theta}: delta_max = {:.4}, p_max = {:.6e}",
        profile.delta_max[0], profile.p_max[0]
    ));
    Ok(())
}

pub fn angular(run: &RunConfig, thetas: (f64, f64, usize), delta: &str) -> Result<(), Failure> {
    run.install_workers()?;
    let table = run.table()?;
    let grid = GridSpec::new((thetas.0, thetas.1, thetas.2), (0.0, 0.0, 1))?;
    let angles = grid.thetas();
    let profile = if delta == "auto" {
        default_delta_profile(&table, &angles)?
    } else {
        let d: f64 = delta.parse().map_err(|_| config_error("--delta must be a number or `auto`"))?;
        DeltaProfile::at_fixed_delta(&table, &angles, d)
    };
    let scenario = *table.scenario();
    let to_dcs = probability_to_dcs(&scenario);
    let mut out = Output::new(
        &["theta", "delta", "probability", "rutherford_probability", "dcs", "rutherford_dcs", "ratio"],
        run.meta("angular", &table),
    );
    for (i, &theta) in angles.iter().enumerate() {
        let p = profile.p_max[i];
        let (rp, rd) = match (rutherford_probability(&scenario, theta), rutherford_dcs(&scenario, theta)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => (f64::INFINITY, f64::INFINITY),
        };
        let ratio = if rd.is_finite() { p * to_dcs / rd } else { f64::INFINITY };
        out.push(vec![theta, profile.delta_max[i], p, rp, p * to_dcs, rd, ratio]);
    }
    run.emit(&out)
}

pub fn conservation(run: &RunConfig, intervals: usize, sphere_tol: f64) -> Result<(), Failure> {
    run.install_workers()?;
    if intervals == 0 {
        return Err(config_error("--intervals must be positive"));
    }
    let table = run.table()?;
    let eps = table.eps();
    let eta = table.scenario().eta();
    let weight_sum = conservation_weight_sum(&table);
    let weight_tol = (eps * eps).max(1e-5);
    let thetas = if 4.0 * eps * eta.abs() < FORWARD_PEAK_LEVEL {
        forward_resolving_midpoints(intervals, eps)
    } else {
        uniform_midpoints(intervals)
    };
    let profile = default_delta_profile(&table, &thetas)?;
    let sphere = probability_sphere_integral(&table, &profile)?;
    let mut out = Output::new(&["theta", "delta_max", "p_max"], run.meta("conservation", &table));
    for i in 0..profile.len() {
        out.push(vec![profile.thetas[i], profile.delta_max[i], profile.p_max[i]]);
    }
    if run.out.is_some() {
        run.emit(&out)?;
    }
    println!("weight sum      = {weight_sum:.9} (1 +- {weight_tol:.1e})");
    println!("sphere integral = {sphere:.6} (1 +- {sphere_tol}, {} angles)", thetas.len());
    let flat = profile.flat.iter().filter(|f| **f).count();
    if flat > 0 {
        log::warn!("{flat} angles had flat delta profiles");
    }
    if (weight_sum - 1.0).abs() > weight_tol || (sphere - 1.0).abs() > sphere_tol {
        return Err(Failure::Tolerance("conservation outside tolerance".into()));
    }
    Ok(())
}

pub fn optical(run: &RunConfig, eta_min: f64, eta_max: f64, eta_n: usize) -> Result<(), Failure> {
    run.install_workers()?;
    if run.model == ModelKind::ShortRange {
        let scenario = run.scenario()?;
        let PhaseShiftModel::ShortRange(phases) = run.model(&scenario)? else {
            unreachable!("square-well model yields a short-range table")
        };
        let check = optical_theorem_check_short_range(&phases, &scenario)?;
        let mut out = Output::new(&["sigma", "forward", "relative_difference"], json!({"command": "optical", "scenario": scenario}));
        out.push(vec![check.sigma, check.forward, check.relative_difference]);
        run.emit(&out)?;
        run.say(&format!("optical theorem relative difference = {:.3e}", check.relative_difference));
        return Ok(());
    }
    if eta_n == 0 || !(eta_min > 0.0 && eta_min <= eta_max) {
        return Err(config_error("need 0 < --eta-min <= --eta-max and --eta-n >= 1"));
    }
    let units = UnitsContext::default();
    let family = run.family(&units);
    let etas: Vec<f64> = linspace(eta_min.ln(), eta_max.ln(), eta_n).into_iter().map(f64::exp).collect();
    let mut out = Output::new(&["eta", "gamma", "sigma", "im_f0"], json!({"command": "optical", "eps": run.eps}));
    for eta in etas {
        let scenario = family.at_eta(eta)?;
        let table = run.table_for(&scenario)?;
        let gamma = match optical_ratio(&table) {
            OpticalRatio::Ratio(g) => g,
            OpticalRatio::Free => f64::NAN,
        };
        let f0 = scattering_amplitude_f(&table, 0.0);
        out.push(vec![eta, gamma, total_cross_section(&table), f0.im]);
    }
    run.emit(&out)
}

pub fn energy_scan(run: &RunConfig, energies_kev: &[f64]) -> Result<(), Failure> {
    run.install_workers()?;
    if energies_kev.is_empty() {
        return Err(config_error("--energies-kev is empty"));
    }
    let units = UnitsContext::default();
    let family = run.family(&units);
    let bound = eta_bound(run.eps)?;
    let mut out = Output::new(&["E_keV", "eta", "delta_max", "rho"], json!({"command": "energy-scan", "family": family}));
    for &e in energies_kev {
        match energy_ratio_rho(&family, kev_to_mev(e)) {
            Ok(point) => out.push(vec![mev_to_kev(point.energy), point.eta, point.delta_max, point.rho]),
            Err(Error::StrengthBound { eta, .. }) => {
                eprintln!("warning: skipping E = {e} keV, |eta| = {eta:.2} exceeds the bound {bound:.2}");
            }
            Err(other) => return Err(other.into()),
        }
    }
    run.emit(&out)
}

pub fn field(run: &RunConfig, thetas: (f64, f64, usize), deltas: (f64, f64, usize), quantity: &str) -> Result<(), Failure> {
    let quantity = match quantity {
        "probability" => Quantity::Probability,
        "dcs" => Quantity::Dcs,
        "forward" => Quantity::ForwardPart,
        "scatter-re" => Quantity::ScatterRe,
        "scatter-im" => Quantity::ScatterIm,
        _ => return Err(config_error("--quantity must be probability, dcs, forward, scatter-re or scatter-im")),
    };
    let table = run.table()?;
    let grid = GridSpec::new(thetas, deltas)?;
    let options = SweepOptions {
        workers: run.workers,
        ..Default::default()
    };
    let result = sweep(&table, &grid, quantity, &options)?;
    match run.format {
        crate::table_out::Format::Csv => match &run.out {
            Some(path) => result.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))?,
            None => result.write_csv(std::io::stdout().lock())?,
        },
        crate::table_out::Format::Json => {
            let text = serde_json::to_string_pretty(&result.to_json()).map_err(anyhow::Error::from)?;
            match &run.out {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
        }
    }
    run.say(&format!(
        "{} cells, l_max = {}, {} terms in {:.2} s",
        grid.cells(),
        result.l_max,
        result.terms_summed,
        result.wall_time_s
    ));
    Ok(())
}

pub fn table_dump(run: &RunConfig) -> Result<(), Failure> {
    let table = run.table()?;
    // CSV goes through the table's own writer so that l stays an integer.
    if run.format == crate::table_out::Format::Csv {
        match &run.out {
            Some(path) => table.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))?,
            None => table.write_csv(std::io::stdout().lock())?,
        }
        return Ok(());
    }
    let mut out = Output::new(&["l", "weight", "cos2sigma", "sin2sigma", "xi"], run.meta("table-dump", &table));
    for l in 0..=table.l_max() {
        out.push(vec![l as f64, table.weight()[l], table.phase_cos()[l], table.phase_sin()[l], table.xi()[l]]);
    }
    run.emit(&out)
}

pub fn selftest(workers: Option<usize>, corrupt: bool) -> Result<(), Failure> {
    let mut ctx = AcceptanceContext {
        workers,
        ..Default::default()
    };
    if corrupt {
        ctx = ctx.with_corrupted_alpha();
    }
    let outcomes = run_all(&ctx);
    let mut stdout = std::io::stdout().lock();
    for o in &outcomes {
        writeln!(stdout, "{o}")?;
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    if failed.is_empty() {
        writeln!(stdout, "all {} criteria passed", outcomes.len())?;
        Ok(())
    } else {
        Err(Failure::Tolerance(format!("criteria {} failed", failed.join(", "))))
    }
}
