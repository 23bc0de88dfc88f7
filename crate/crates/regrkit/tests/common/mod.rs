#![allow(dead_code)]

use regrkit::dataset::Dataset;

pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");

pub const ST: &str = "Subscribers_total";
pub const BAS: &str = "Banner_Ad_Spend";
pub const PPC: &str = "PPC_Spend";
pub const REM: &str = "Reminder_Emails_Sent";
pub const VU: &str = "Videos_Upload";
pub const PV: &str = "Page_Views";

pub fn table1() -> Dataset {
    regrkit::ingest::ingest_csv(TABLE1_CSV, &["Month".to_string()]).expect("fixture parses")
}

pub fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Published correlation matrix at two decimals, order ST,BAS,PPC,REM,VU,PV.
pub const PUBLISHED_CORR: [[f64; 6]; 6] = [
    [1.0, 0.95, 0.9, 0.93, 0.78, 0.99],
    [0.95, 1.0, 0.98, 0.84, 0.82, 0.94],
    [0.9, 0.98, 1.0, 0.74, 0.78, 0.88],
    [0.93, 0.84, 0.74, 1.0, 0.75, 0.95],
    [0.78, 0.82, 0.78, 0.75, 1.0, 0.77],
    [0.99, 0.94, 0.88, 0.95, 0.77, 1.0],
];

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: expected {expected} +- {tol}, got {actual}"
    );
}

/// 5% relative or the given absolute floor, whichever is looser.
pub fn within_weight_band(actual: f64, expected: f64, abs_floor: f64) -> bool {
    (actual - expected).abs() <= (0.05 * expected.abs()).max(abs_floor)
}
