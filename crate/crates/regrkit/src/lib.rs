//! regrkit: a small tabular-regression toolkit.
//!
//! Pipeline: ingest a raw CSV export (unit-suffixed cells) or an ARFF file
//! into a [`dataset::Dataset`], inspect correlations, fit ordinary
//! least-squares or SMO-trained epsilon-SVR models under three scaling
//! regimes, select attributes (stepwise elimination or CFS), and emit
//! prediction-error and growth reports.

pub mod arff;
pub mod cfs;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod evaluate;
pub mod filter;
pub mod ingest;
pub mod linreg;
pub mod model_io;
pub mod smoreg;

#[cfg(test)]
pub(crate) mod testutil;

pub use dataset::{AttributeKind, AttributeSpec, ColumnStats, CorrelationMatrix, Dataset, Value};
pub use error::{Error, Result};
