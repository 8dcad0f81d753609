//! Per-l tables of weights, phases and spatial shifts, and the amplitude
//! series built from them.

mod model;
mod series;
mod square_well;
mod table;

pub use model::{ModelKind, PhaseShiftModel, ShortRangeTable};
pub use square_well::{square_well_phase_shifts, DERIVATIVE_STEP};
pub use table::{
    build_table, build_table_with_lmax, default_l_max, partial_weight, tail_bound, PartialWaveTable, DEFAULT_TAIL_TOL,
    MAX_TAIL_TOL,
};
