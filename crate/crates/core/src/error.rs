use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// |η| exceeds the bound beyond which the logarithmic spatial shift
    /// outgrows half the initial separation.
    #[error("interaction strength |eta| = {eta} exceeds the bound {bound} for eps = {eps}")]
    StrengthBound { eta: f64, bound: f64, eps: f64 },

    #[error("short-range table has {len} entries but truncation needs l_max = {l_max}")]
    TruncationMismatch { len: usize, l_max: usize },

    #[error("log-gamma pole at z = {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("Rutherford formula diverges at theta = 0")]
    Divergence,

    #[error("square-well matching failed at l = {l}")]
    MatchingFailure { l: usize },

    #[error("short-range phase shifts not converged: |delta_{l}| = {value:e} at table end")]
    NonConvergence { l: usize, value: f64 },

    #[error("field of {requested} bytes exceeds the memory budget of {budget} bytes")]
    ResourceLimit { requested: usize, budget: usize },

    #[error("model mismatch: {0}")]
    ModelMismatch(&'static str),
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
