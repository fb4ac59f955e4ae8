//! Catalog ingestion and report serialization.

mod catalog;
mod report;

pub use catalog::{load_catalog, parse_catalog, CatalogLoad, CatalogRecord, Diagnostic, SCHEMA_VERSION};
pub use report::{ReportEnvelope, ReportVerdict};

/// Significant digits kept in reports and CSV tables.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Plain decimal rendering of [`round_sig`]; `-0` prints as `0`.
pub fn fmt_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}
