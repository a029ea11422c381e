//! Shared number formatting for CSV and JSON outputs.

/// Decimal rendering of `x` with 15 significant digits.
///
/// Magnitudes outside `[1e-5, 1e15)` fall back to scientific notation.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{x:.14e}");
    }
    let decimals = (14 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
