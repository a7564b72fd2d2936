//! Report documents, the built-in catalog and the command drivers behind
//! the `minindex` binary.

mod analyze;
mod catalog;
mod commands;

pub use analyze::{
    analyze, zeta_p_in, Agreement, AnalyzeOptions, FormulaSection, InputEcho, OracleSection, PrecisionInfo,
    ReportDocument, Timing, MAX_PRECISION,
};
pub use catalog::{catalog, catalog_verify, CatalogEntry, CatalogRow, CatalogSummary, Computed, Expected};
pub use commands::{global_report, parse_ram, sweep_report, GlobalReport, SweepReport};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREEMENT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::PrecisionExhausted(_)
        | Error::NotInvertibleToPrecision
        | Error::NotGenerator
        | Error::SearchExhausted(_)
        | Error::BudgetExceeded { .. } => EXIT_EXHAUSTED,
        Error::InvariantViolation(_) => EXIT_DISAGREEMENT,
        _ => EXIT_INPUT,
    }
}

/// `p^v`, the printed form of an index.
pub fn power(p: u64, v: i64) -> String {
    format!("{p}^{v}")
}
