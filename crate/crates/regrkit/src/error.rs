//! Shared error type for the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // dataset construction / lookup
    #[error("row {row} has {found} values, expected {expected}")]
    WidthMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value {value} in attribute '{attribute}' at row {row}")]
    NonFiniteValue {
        attribute: String,
        row: usize,
        value: f64,
    },
    #[error("duplicate attribute name '{0}'")]
    DuplicateAttribute(String),
    #[error("attribute name must not be empty (position {0})")]
    EmptyAttributeName(usize),
    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),
    #[error("attribute '{0}' is not numeric")]
    NotNumeric(String),
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("need at least {needed} rows, dataset has {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("attribute '{0}' is constant, {1}")]
    ConstantColumn(String, &'static str),

    // quantity / CSV ingestion
    #[error("malformed quantity '{0}'")]
    MalformedQuantity(String),
    #[error("malformed quantity '{token}' at row {row}, column '{column}'")]
    MalformedCell {
        token: String,
        row: usize,
        column: String,
    },
    #[error("CSV header error: {0}")]
    CsvHeader(String),
    #[error("CSV error: {0}")]
    Csv(String),
    #[error("label column '{0}' not found in header")]
    UnknownLabelColumn(String),

    // ARFF
    #[error("ARFF syntax error at line {line}: {message}")]
    ArffSyntax { line: usize, message: String },
    #[error("missing value '?' at line {0} (not supported)")]
    MissingValue(usize),
    #[error("data row at line {line} has {found} fields, expected {expected}")]
    Arity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("unsupported attribute type '{kind}' at line {line}")]
    UnsupportedType { line: usize, kind: String },

    // model fitting / numerics
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("normal equations are singular (ridge retry failed)")]
    DegenerateSystem,
    #[error("exhaustive selection over {0} candidates exceeds the guard of {1}")]
    GuardExceeded(usize, usize),
    #[error("SMO did not converge within {updates} pair updates (max violation {violation:.6e})")]
    NonConvergence { updates: usize, violation: f64 },
    #[error("dual objective decreased at update {update} ({from} -> {to})")]
    ObjectiveDecreased { update: usize, from: f64, to: f64 },
    #[error("model has no dual variables for {0} instances (was it loaded from a file?)")]
    MissingDuals(usize),
    #[error("attribute mismatch: {0}")]
    AttributeMismatch(String),

    // evaluation / reports
    #[error("actual target value is zero at row {0}; error percent undefined")]
    ZeroActual(usize),
    #[error("constant {0} vector; correlation coefficient undefined")]
    ConstantVector(&'static str),
    #[error("baseline row {0} must have positive page views and positive total cost")]
    ZeroBaseline(usize),
    #[error("negative cost {value} in attribute '{attribute}' at row {row}")]
    NegativeCost {
        attribute: String,
        row: usize,
        value: f64,
    },
    #[error("row index {0} out of range (1..={1})")]
    RowOutOfRange(usize, usize),

    // model files
    #[error("model file error at line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Exit-code class used by the CLI: 2 for data/parse problems,
    /// 3 for numerical failures.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSystem
                | Error::NonConvergence { .. }
                | Error::ObjectiveDecreased { .. }
                | Error::ConstantColumn(..)
                | Error::ConstantVector(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
