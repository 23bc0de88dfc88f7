//! Shared fixtures for the unit tests.

use crate::dataset::Dataset;
use crate::ingest;

pub const TABLE1_CSV: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/tests/data/table1.csv"
));

pub const ST: &str = "Subscribers_total";
pub const BAS: &str = "Banner_Ad_Spend";
pub const PPC: &str = "PPC_Spend";
pub const REM: &str = "Reminder_Emails_Sent";
pub const VU: &str = "Videos_Upload";
pub const PV: &str = "Page_Views";

/// The canonical 15-month fixture dataset (Month label + 6 numeric columns).
pub fn table1() -> Dataset {
    ingest::ingest_csv(TABLE1_CSV, &["Month".to_string()]).expect("fixture parses")
}

/// Published correlation matrix (two decimals), rows/cols ST,BAS,PPC,REM,VU,PV.
pub const PUBLISHED_CORR: [[f64; 6]; 6] = [
    [1.0, 0.95, 0.9, 0.93, 0.78, 0.99],
    [0.95, 1.0, 0.98, 0.84, 0.82, 0.94],
    [0.9, 0.98, 1.0, 0.74, 0.78, 0.88],
    [0.93, 0.84, 0.74, 1.0, 0.75, 0.95],
    [0.78, 0.82, 0.78, 0.75, 1.0, 0.77],
    [0.99, 0.94, 0.88, 0.95, 0.77, 1.0],
];

pub fn assert_close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol,
        "expected {expected} +- {tol}, got {actual}"
    );
}
