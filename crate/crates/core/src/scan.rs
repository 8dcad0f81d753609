//! Parallel evaluation of the series over (θ, δ) grids and η lists.
//!
//! Work is split by θ-row: one Legendre row per angle serves every δ in
//! that row, rows run on a rayon pool and are assembled in row order, so the
//! values do not depend on the worker count.

use std::collections::HashMap;
use std::io::{self, Write};
use std::sync::{Arc, Mutex};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kinematics::{PhysicalScenario, ScenarioFamily};
use crate::observables::probability_to_dcs;
use crate::output::{csv_row, format_f64};
use crate::partialwave::{build_table, ModelKind, PartialWaveTable, PhaseShiftModel};
use crate::specfun::legendre_row;

/// Default ceiling on the size of a result matrix.
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_n: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_n: usize,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect()
}

impl GridSpec {
    pub fn new(theta: (f64, f64, usize), delta: (f64, f64, usize)) -> Result<Self> {
        let grid = Self {
            theta_min: theta.0,
            theta_max: theta.1,
            theta_n: theta.2,
            delta_min: delta.0,
            delta_max: delta.1,
            delta_n: delta.2,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// A single point.
    pub fn point(theta: f64, delta: f64) -> Result<Self> {
        Self::new((theta, theta, 1), (delta, delta, 1))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| Err(Error::InvalidParameter { name, value, reason });
        if self.theta_n == 0 || self.delta_n == 0 {
            return bad("grid size", 0.0, "each axis needs at least one point");
        }
        if !(self.theta_min <= self.theta_max && self.delta_min <= self.delta_max) {
            return bad("grid bounds", self.theta_min, "min must not exceed max");
        }
        if !(self.theta_min >= 0.0 && self.theta_max <= std::f64::consts::PI) {
            return bad("theta", self.theta_max, "must lie in [0, pi]");
        }
        if !(self.delta_min.is_finite() && self.delta_max.is_finite()) {
            return bad("delta", self.delta_max, "must be finite");
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        linspace(self.theta_min, self.theta_max, self.theta_n)
    }

    pub fn deltas(&self) -> Vec<f64> {
        linspace(self.delta_min, self.delta_max, self.delta_n)
    }

    pub fn cells(&self) -> usize {
        self.theta_n * self.delta_n
    }
}

/// Field evaluated on the grid. The scattered part is complex and is split
/// into its real and imaginary fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    Probability,
    Dcs,
    ForwardPart,
    ScatterRe,
    ScatterIm,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Probability => "probability",
            Quantity::Dcs => "dcs",
            Quantity::ForwardPart => "forward",
            Quantity::ScatterRe => "scatter-re",
            Quantity::ScatterIm => "scatter-im",
        }
    }

    fn evaluate(self, table: &PartialWaveTable, row: &[f64], delta: f64) -> f64 {
        match self {
            Quantity::Probability => table.probability_with_row(row, delta),
            Quantity::Dcs => table.probability_with_row(row, delta) * probability_to_dcs(table.scenario()),
            Quantity::ForwardPart => table.amplitude_forward_with_row(row, delta),
            Quantity::ScatterRe => table.amplitude_scatter_with_row(row, delta).re,
            Quantity::ScatterIm => table.amplitude_scatter_with_row(row, delta).im,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub memory_budget: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            workers: None,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldResult {
    pub grid: GridSpec,
    pub quantity: Quantity,
    /// Row-major in θ: `values[i * delta_n + j]` is at `(θ_i, δ_j)`.
    pub values: Vec<f64>,
    pub scenario: PhysicalScenario,
    pub model: ModelKind,
    pub l_max: usize,
    pub wall_time_s: f64,
    /// SHA-256 over the table contents, grid and quantity.
    pub checksum: String,
    pub terms_summed: u64,
}

/// Content hash of a table (scenario parameters and every per-l entry).
pub fn table_digest(table: &PartialWaveTable) -> [u8; 32] {
    let mut h = Sha256::new();
    let s = table.scenario();
    for v in [s.eps(), s.eta(), s.momentum(), s.mass()] {
        h.update(v.to_le_bytes());
    }
    h.update(table.model().kind().as_str().as_bytes());
    h.update((table.l_max() as u64).to_le_bytes());
    for column in [table.weight(), table.phase_cos(), table.phase_sin(), table.xi()] {
        for v in column {
            h.update(v.to_le_bytes());
        }
    }
    h.finalize().into()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn input_checksum(table: &PartialWaveTable, grid: &GridSpec, quantity: Quantity) -> String {
    let mut h = Sha256::new();
    h.update(table_digest(table));
    for v in [grid.theta_min, grid.theta_max, grid.delta_min, grid.delta_max] {
        h.update(v.to_le_bytes());
    }
    h.update((grid.theta_n as u64).to_le_bytes());
    h.update((grid.delta_n as u64).to_le_bytes());
    h.update(quantity.as_str().as_bytes());
    hex(&h.finalize())
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|_| Error::ResourceLimit { requested: n, budget: 0 })?;
            Ok(pool.install(job))
        }
    }
}

pub fn sweep(table: &PartialWaveTable, grid: &GridSpec, quantity: Quantity, options: &SweepOptions) -> Result<FieldResult> {
    grid.validate()?;
    let bytes = grid.cells().saturating_mul(std::mem::size_of::<f64>());
    if bytes > options.memory_budget {
        return Err(Error::ResourceLimit {
            requested: bytes,
            budget: options.memory_budget,
        });
    }
    let start = Instant::now();
    let thetas = grid.thetas();
    let deltas = grid.deltas();
    let mut values = vec![0.0; grid.cells()];
    run_in_pool(options.workers, || {
        values.par_chunks_mut(grid.delta_n).zip(thetas.par_iter()).for_each(|(out, &theta)| {
            let row = legendre_row(theta, table.l_max()).values;
            for (slot, &delta) in out.iter_mut().zip(&deltas) {
                *slot = quantity.evaluate(table, &row, delta);
            }
        });
    })?;
    Ok(FieldResult {
        grid: *grid,
        quantity,
        values,
        scenario: *table.scenario(),
        model: table.model().kind(),
        l_max: table.l_max(),
        wall_time_s: start.elapsed().as_secs_f64(),
        checksum: input_checksum(table, grid, quantity),
        terms_summed: grid.cells() as u64 * (table.l_max() as u64 + 1),
    })
}

impl FieldResult {
    pub fn value(&self, theta_index: usize, delta_index: usize) -> f64 {
        self.values[theta_index * self.grid.delta_n + delta_index]
    }

    /// Columns `theta, delta, value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "theta,delta,value")?;
        let thetas = self.grid.thetas();
        let deltas = self.grid.deltas();
        for (i, theta) in thetas.iter().enumerate() {
            for (j, delta) in deltas.iter().enumerate() {
                writeln!(out, "{}", csv_row(&[*theta, *delta, self.value(i, j)]))?;
            }
        }
        Ok(())
    }

    /// JSON envelope with provenance; the only run-dependent fields are the
    /// wall time and the creation timestamp.
    pub fn to_json(&self) -> serde_json::Value {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        serde_json::json!({
            "quantity": self.quantity.as_str(),
            "grid": self.grid,
            "scenario": self.scenario,
            "model": self.model.as_str(),
            "l_max": self.l_max,
            "terms_summed": self.terms_summed,
            "checksum": self.checksum,
            "wall_time_s": self.wall_time_s,
            "created_unix": created,
            "values": self.values.iter().map(|v| format_f64(*v)).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    eps: u64,
    eta: u64,
    momentum: u64,
    model: ModelKind,
    tail_tol: u64,
    short_range: Option<[u8; 32]>,
}

fn short_range_digest(model: &PhaseShiftModel) -> Option<[u8; 32]> {
    match model {
        PhaseShiftModel::ShortRange(t) => {
            let mut h = Sha256::new();
            for v in t.delta().iter().chain(t.ddelta_dk()) {
                h.update(v.to_le_bytes());
            }
            Some(h.finalize().into())
        }
        _ => None,
    }
}

/// Tables keyed by (ε, η, p, model, tail tolerance), shared as `Arc`s.
#[derive(Debug, Default)]
pub struct TableCache {
    tables: Mutex<HashMap<CacheKey, Arc<PartialWaveTable>>>,
    hits: Mutex<u64>,
}

impl TableCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(&self, scenario: &PhysicalScenario, model: &PhaseShiftModel, tail_tol: f64) -> Result<Arc<PartialWaveTable>> {
        let key = CacheKey {
            eps: scenario.eps().to_bits(),
            eta: scenario.eta().to_bits(),
            momentum: scenario.momentum().to_bits(),
            model: model.kind(),
            tail_tol: tail_tol.to_bits(),
            short_range: short_range_digest(model),
        };
        if let Some(t) = self.tables.lock().expect("cache lock").get(&key) {
            *self.hits.lock().expect("cache lock") += 1;
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(build_table(scenario, model, tail_tol)?);
        self.tables.lock().expect("cache lock").entry(key).or_insert_with(|| Arc::clone(&table));
        Ok(table)
    }

    pub fn hits(&self) -> u64 {
        *self.hits.lock().expect("cache lock")
    }

    pub fn len(&self) -> usize {
        self.tables.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaSample {
    pub eta: f64,
    pub probability: Result<f64>,
}

/// `P(θ, δ)` for each η of a scenario family. Failures (e.g. η beyond the
/// strength bound) are recorded per entry.
pub fn eta_sweep(
    family: &ScenarioFamily,
    etas: &[f64],
    theta: f64,
    delta: f64,
    model: ModelKind,
    tail_tol: f64,
    cache: &TableCache,
) -> Vec<EtaSample> {
    etas.iter()
        .map(|&eta| {
            let probability = (|| {
                let model = match model {
                    ModelKind::CoulombExact => PhaseShiftModel::CoulombExact,
                    ModelKind::CoulombAsymptotic => PhaseShiftModel::CoulombAsymptotic,
                    ModelKind::ShortRange => return Err(Error::ModelMismatch("eta sweeps need a Coulomb model")),
                };
                let scenario = family.at_eta(eta)?;
                let table = cache.get_or_build(&scenario, &model, tail_tol)?;
                Ok(table.probability(theta, delta))
            })();
            EtaSample { eta, probability }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partialwave::build_table;
    use crate::units::UnitsContext;

    fn table(eta: f64, eps: f64) -> PartialWaveTable {
        let s = PhysicalScenario::from_eta(79, 2, 3727.379, eta, eps, &UnitsContext::default()).unwrap();
        build_table(&s, &PhaseShiftModel::CoulombExact, 1e-10).unwrap()
    }

    #[test]
    fn single_point_grid_matches_direct_call() {
        let t = table(10.0, 0.005);
        let grid = GridSpec::point(0.07, 0.4).unwrap();
        let field = sweep(&t, &grid, Quantity::Probability, &SweepOptions::default()).unwrap();
        assert_eq!(field.values, vec![t.probability(0.07, 0.4)]);
        assert_eq!(field.terms_summed, t.l_max() as u64 + 1);
    }

    #[test]
    fn every_cell_matches_direct_evaluation() {
        let t = table(3.0, 0.01);
        let grid = GridSpec::new((0.0, 0.5, 6), (-2.0, 2.0, 5)).unwrap();
        for q in [Quantity::Probability, Quantity::ForwardPart, Quantity::ScatterIm] {
            let field = sweep(&t, &grid, q, &SweepOptions::default()).unwrap();
            for (i, &theta) in grid.thetas().iter().enumerate() {
                for (j, &delta) in grid.deltas().iter().enumerate() {
                    let direct = match q {
                        Quantity::Probability => t.probability(theta, delta),
                        Quantity::ForwardPart => t.amplitude_forward(theta, delta),
                        _ => t.amplitude_scatter(theta, delta).im,
                    };
                    assert_eq!(field.value(i, j), direct);
                }
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_values() {
        let t = table(10.0, 0.01);
        let grid = GridSpec::new((0.0, 0.5, 17), (-4.0, 4.0, 9)).unwrap();
        let one = sweep(&t, &grid, Quantity::Probability, &SweepOptions { workers: Some(1), ..Default::default() }).unwrap();
        let four = sweep(&t, &grid, Quantity::Probability, &SweepOptions { workers: Some(4), ..Default::default() }).unwrap();
        assert_eq!(one.values, four.values);
        assert_eq!(one.checksum, four.checksum);
    }

    #[test]
    fn memory_budget() {
        let t = table(1.0, 0.05);
        let grid = GridSpec::new((0.0, 1.0, 100), (-1.0, 1.0, 100)).unwrap();
        let tight = SweepOptions { workers: None, memory_budget: 1000 };
        assert!(matches!(sweep(&t, &grid, Quantity::Probability, &tight), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new((0.0, 4.0, 3), (0.0, 1.0, 2)).is_err());
        assert!(GridSpec::new((0.5, 0.1, 3), (0.0, 1.0, 2)).is_err());
        assert!(GridSpec::new((0.0, 1.0, 0), (0.0, 1.0, 2)).is_err());
        let g = GridSpec::new((0.0, 1.0, 3), (-1.0, 1.0, 3)).unwrap();
        assert_eq!(g.thetas(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn csv_layout() {
        let t = table(1.0, 0.05);
        let grid = GridSpec::new((0.0, 1.0, 2), (-1.0, 1.0, 3)).unwrap();
        let field = sweep(&t, &grid, Quantity::Probability, &SweepOptions::default()).unwrap();
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert_eq!(text.lines().next().unwrap(), "theta,delta,value");
        let json = field.to_json();
        assert_eq!(json["values"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn eta_sweep_cache_and_errors() {
        let family = ScenarioFamily::alpha_on_gold(0.001);
        let cache = TableCache::new();
        let first = eta_sweep(&family, &[10.0, 900.0], 0.5, 0.4, ModelKind::CoulombExact, 1e-10, &cache);
        assert!(matches!(first[1].probability, Err(Error::StrengthBound { .. })));
        let again = eta_sweep(&family, &[10.0], 0.5, 0.4, ModelKind::CoulombExact, 1e-10, &cache);
        assert_eq!(first[0].probability, again[0].probability);
        assert_eq!(cache.hits(), 1);
        let direct = build_table(&family.at_eta(10.0).unwrap(), &PhaseShiftModel::CoulombExact, 1e-10).unwrap();
        assert_eq!(again[0].probability, Ok(direct.probability(0.5, 0.4)));
    }
}
