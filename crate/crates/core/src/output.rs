//! Shared text formatting for tabular output.

/// Round-trip representation of a double with 17 significant digits.
/// Infinities print as `inf` / `-inf`.
pub fn format_f64(value: f64) -> String {
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{value:.16e}")
}

/// Joins already formatted fields into one CSV line (no trailing newline).
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|v| format_f64(*v)).collect::<Vec<_>>().join(",")
}
