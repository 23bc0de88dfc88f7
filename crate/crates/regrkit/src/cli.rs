//! Command-line front end: one binary, one subcommand per pipeline stage.
//!
//! Exit codes: 0 success, 1 usage errors, 2 data/parse errors, 3 numerical
//! failures (non-convergence, singular systems). Output files are written
//! atomically (temp file + rename); diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::arff;
use crate::cfs;
use crate::dataset::{AttributeKind, Dataset};
use crate::error::Error;
use crate::evaluate;
use crate::filter::FilterKind;
use crate::ingest;
use crate::linreg::{self, Selection};
use crate::model_io::{self, Model};
use crate::smoreg::{self, SvrParams};

#[derive(Parser)]
#[command(
    name = "regrkit",
    version,
    about = "Tabular regression toolkit: ingest, correlate, fit, select, evaluate, report"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a raw CSV export (unit-suffixed cells) to ARFF
    Ingest(IngestArgs),
    /// Print per-attribute statistics of an ARFF dataset
    Describe(DescribeArgs),
    /// Emit the Pearson correlation matrix as CSV
    Correlate(CorrelateArgs),
    /// Fit a regression model and save it
    Fit(FitArgs),
    /// Attribute subset selection
    Select(SelectArgs),
    /// Evaluate a saved model on a dataset
    Evaluate(EvaluateArgs),
    /// Derived reports
    Report(ReportArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Raw CSV export
    #[arg(long = "in")]
    input: PathBuf,
    /// ARFF file to write
    #[arg(long)]
    out: PathBuf,
    /// Columns carried as text labels instead of numerics
    #[arg(long = "label-cols", value_delimiter = ',')]
    label_cols: Vec<String>,
}

#[derive(Args)]
struct DescribeArgs {
    /// ARFF dataset
    #[arg(long)]
    data: PathBuf,
    /// Aligned text instead of CSV
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct CorrelateArgs {
    /// ARFF dataset
    #[arg(long)]
    data: PathBuf,
    /// Round matrix entries to N decimals (0..=12)
    #[arg(long)]
    round: Option<u32>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Aligned text instead of CSV
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct FitArgs {
    #[command(subcommand)]
    model: FitCommand,
}

#[derive(Subcommand)]
enum FitCommand {
    /// Ordinary least squares with optional attribute elimination
    Linreg(LinregArgs),
    /// Epsilon-SVR trained by sequential minimal optimization
    Smoreg(SmoregArgs),
}

#[derive(Args)]
struct LinregArgs {
    #[arg(long)]
    data: PathBuf,
    /// Target attribute
    #[arg(long)]
    target: String,
    /// Candidate attributes (default: every numeric attribute but the target)
    #[arg(long, value_delimiter = ',')]
    attrs: Vec<String>,
    /// Attribute elimination mode
    #[arg(long, default_value = "greedy")]
    selection: String,
    /// Model file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SmoregArgs {
    #[arg(long)]
    data: PathBuf,
    /// Target attribute
    #[arg(long)]
    target: String,
    /// Input attributes (default: every numeric attribute but the target)
    #[arg(long, value_delimiter = ',')]
    attrs: Vec<String>,
    /// Scaling regime applied to inputs and target
    #[arg(long)]
    filter: String,
    /// Box constraint
    #[arg(long = "c", default_value_t = 1.0)]
    c: f64,
    /// Tube half-width
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// KKT tolerance
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Model file to write
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SelectArgs {
    #[command(subcommand)]
    method: SelectCommand,
}

#[derive(Subcommand)]
enum SelectCommand {
    /// Correlation-based feature subset selection
    Cfs(CfsArgs),
}

#[derive(Args)]
struct CfsArgs {
    #[arg(long)]
    data: PathBuf,
    /// Target attribute
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Saved model file
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Aligned text with table-style rounding instead of full-precision CSV
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct ReportArgs {
    #[command(subcommand)]
    kind: ReportCommand,
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Per-month page-view growth versus advertising spend
    Growth(GrowthArgs),
}

#[derive(Args)]
struct GrowthArgs {
    #[arg(long)]
    data: PathBuf,
    /// Page-view attribute
    #[arg(long)]
    target: String,
    /// Cost attributes summed into total spend
    #[arg(long = "cost-attrs", value_delimiter = ',')]
    cost_attrs: Vec<String>,
    /// 1-based row supplying the cost-per-page-view baseline
    #[arg(long = "baseline-row", default_value_t = 1)]
    baseline_row: usize,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Aligned text instead of CSV
    #[arg(long)]
    pretty: bool,
}

enum CliError {
    Usage(String),
    App(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::App(e)
    }
}

type CliResult = Result<(), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `args` and runs the selected subcommand, returning the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::App(e)) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Ingest(a) => cmd_ingest(a),
        Command::Describe(a) => cmd_describe(a),
        Command::Correlate(a) => cmd_correlate(a),
        Command::Fit(a) => match a.model {
            FitCommand::Linreg(l) => cmd_fit_linreg(l),
            FitCommand::Smoreg(s) => cmd_fit_smoreg(s),
        },
        Command::Select(a) => match a.method {
            SelectCommand::Cfs(c) => cmd_select_cfs(c),
        },
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Report(a) => match a.kind {
            ReportCommand::Growth(g) => cmd_report_growth(g),
        },
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::App(Error::io(format!("reading {}", path.display()), e)))
}

fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    let text = read_file(path)?;
    Ok(arff::parse_arff(&text)?)
}

/// Writes via a temp file in the target directory plus rename, so the output
/// appears complete or not at all.
fn write_atomic(path: &Path, content: &str) -> CliResult {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| {
        CliError::App(Error::io(
            format!("creating temp file in {}", dir.display()),
            e,
        ))
    })?;
    tmp.write_all(content.as_bytes())
        .map_err(|e| CliError::App(Error::io(format!("writing {}", path.display()), e)))?;
    tmp.persist(path).map_err(|e| {
        CliError::App(Error::io(
            format!("renaming into {}", path.display()),
            e.error,
        ))
    })?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult {
    match out {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn default_attrs(d: &Dataset, target: &str) -> Vec<String> {
    d.numeric_attributes()
        .iter()
        .filter(|s| s.name != target)
        .map(|s| s.name.clone())
        .collect()
}

fn cmd_ingest(a: IngestArgs) -> CliResult {
    let text = read_file(&a.input)?;
    let d = ingest::ingest_csv(&text, &a.label_cols)?;
    let relation = a
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    write_atomic(&a.out, &arff::write_arff(&d, &relation))?;
    eprintln!(
        "ingested {} rows, {} attributes -> {}",
        d.n_rows(),
        d.attributes().len(),
        a.out.display()
    );
    Ok(())
}

fn cmd_describe(a: DescribeArgs) -> CliResult {
    let d = load_dataset(&a.data)?;
    let mut headers = vec!["attribute", "kind", "n", "min", "max", "mean", "stddev"];
    let mut rows: Vec<Vec<String>> = Vec::new();
    for spec in d.attributes() {
        match spec.kind {
            AttributeKind::Numeric => {
                let s = d.column_stats(&spec.name)?;
                rows.push(vec![
                    spec.name.clone(),
                    "numeric".into(),
                    s.n.to_string(),
                    fmt_sig(s.min, 6),
                    fmt_sig(s.max, 6),
                    fmt_sig(s.mean, 6),
                    fmt_sig(s.stddev, 6),
                ]);
            }
            AttributeKind::Label => rows.push(vec![
                spec.name.clone(),
                "label".into(),
                d.n_rows().to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]),
        }
    }
    if a.pretty {
        print!("{}", render_aligned(&headers, &rows));
    } else {
        let hdr: Vec<String> = headers.drain(..).map(String::from).collect();
        print!("{}", render_csv(&hdr, &rows));
    }
    Ok(())
}

fn cmd_correlate(a: CorrelateArgs) -> CliResult {
    if let Some(r) = a.round {
        if r > 12 {
            return Err(usage("--round accepts 0..=12"));
        }
    }
    let d = load_dataset(&a.data)?;
    let m = d.correlation_matrix()?;
    let fmt = |v: f64| -> String {
        match a.round {
            Some(decimals) => {
                let scale = 10f64.powi(decimals as i32);
                format!("{}", (v * scale).round() / scale)
            }
            None => fmt_sig(v, 6),
        }
    };
    let mut header = vec![String::new()];
    header.extend(m.names.iter().cloned());
    let rows: Vec<Vec<String>> = m
        .names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut row = vec![name.clone()];
            row.extend(m.values[i].iter().map(|&v| fmt(v)));
            row
        })
        .collect();
    let text = if a.pretty {
        let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
        render_aligned(&hdr, &rows)
    } else {
        render_csv(&header, &rows)
    };
    emit(&a.out, &text)
}

fn cmd_fit_linreg(a: LinregArgs) -> CliResult {
    let selection = Selection::parse(&a.selection)
        .ok_or_else(|| usage(format!("unknown --selection '{}'", a.selection)))?;
    let d = load_dataset(&a.data)?;
    let attrs = if a.attrs.is_empty() {
        default_attrs(&d, &a.target)
    } else {
        a.attrs.clone()
    };
    let model = linreg::fit_linreg(&d, &a.target, &attrs, selection)?;
    let rendered = model_io::render_model(&Model::Linear(model.clone()));
    write_atomic(&a.out, &rendered)?;
    println!("{}", model.equation());
    Ok(())
}

fn cmd_fit_smoreg(a: SmoregArgs) -> CliResult {
    let filter = FilterKind::parse(&a.filter)
        .ok_or_else(|| usage(format!("unknown --filter '{}'", a.filter)))?;
    if !a.c.is_finite() || a.c <= 0.0 {
        return Err(usage("--c must be positive"));
    }
    if !a.epsilon.is_finite() || a.epsilon < 0.0 {
        return Err(usage("--epsilon must be non-negative"));
    }
    if !a.tol.is_finite() || a.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let d = load_dataset(&a.data)?;
    let attrs = if a.attrs.is_empty() {
        default_attrs(&d, &a.target)
    } else {
        a.attrs.clone()
    };
    let params = SvrParams {
        c: a.c,
        epsilon: a.epsilon,
        tolerance: a.tol,
        ..SvrParams::default()
    };
    let model = smoreg::fit_smoreg(&d, &a.target, &attrs, filter, params)?;
    let rendered = model_io::render_model(&Model::Svr(model.clone()));
    write_atomic(&a.out, &rendered)?;
    println!("{}", model.equation());
    Ok(())
}

fn cmd_select_cfs(a: CfsArgs) -> CliResult {
    let d = load_dataset(&a.data)?;
    let r = cfs::cfs_select(&d, &a.target)?;
    let indices: Vec<String> = r.indices.iter().map(|i| i.to_string()).collect();
    println!(
        "selected attributes: {} : {}",
        indices.join(","),
        r.selected.len()
    );
    for name in &r.selected {
        println!("  {name}");
    }
    Ok(())
}

fn cmd_evaluate(a: EvaluateArgs) -> CliResult {
    let model = model_io::parse_model(&read_file(&a.model)?)?;
    let d = load_dataset(&a.data)?;
    let rows = evaluate::evaluate_model(&model, &d)?;
    let text = if a.pretty {
        render_pretty_predictions(&model, &rows)
    } else {
        evaluate::prediction_table_csv(&rows)
    };
    emit(&a.out, &text)?;
    if !a.pretty {
        if let Ok(cc) = evaluate::correlation_coefficient(&rows) {
            eprintln!("correlation coefficient: {}", fmt_sig(cc, 6));
        }
    }
    Ok(())
}

/// Analysis-table print style: ceiling predictions; error percent at three
/// decimals for linear models and whole percent for SVR models, both rounded
/// away from zero.
fn render_pretty_predictions(model: &Model, rows: &[evaluate::PredictionRow]) -> String {
    let headers = ["actual", "predicted", "difference", "error_pct"];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let shown = evaluate::display_prediction(r.predicted);
            let integral = r.actual.fract() == 0.0 && r.actual.abs() < 9e15 && r.actual != 0.0;
            let err = if integral {
                let diff = shown - r.actual as i64;
                let millis = evaluate::error_pct_millis(diff, r.actual as i64);
                match model {
                    Model::Linear(_) => evaluate::format_millis(millis),
                    Model::Svr(_) => format!(
                        "{}",
                        (millis as f64 / 1000.0).signum() * (millis.abs() as f64 / 1000.0).ceil()
                    ),
                }
            } else {
                format!("{:.3}", r.error_pct)
            };
            let diff_shown = if integral {
                format!("{}", shown - r.actual as i64)
            } else {
                format!("{}", r.predicted - r.actual)
            };
            vec![format!("{}", r.actual), shown.to_string(), diff_shown, err]
        })
        .collect();
    render_aligned(&headers, &body)
}

fn cmd_report_growth(a: GrowthArgs) -> CliResult {
    if a.cost_attrs.is_empty() {
        return Err(usage("--cost-attrs needs at least one attribute"));
    }
    if a.baseline_row == 0 {
        return Err(usage("--baseline-row is 1-based"));
    }
    let d = load_dataset(&a.data)?;
    let rows = evaluate::growth_report(&d, &a.target, &a.cost_attrs, a.baseline_row)?;
    let text = if a.pretty {
        let headers = [
            "label",
            "page_views",
            "total_cost",
            "estimated_views",
            "diff",
            "profit_pct",
            "trend",
        ];
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.label.clone(),
                    format!("{}", r.page_views),
                    format!("{}", r.total_cost),
                    r.estimated_views.to_string(),
                    format!("{}", r.diff),
                    r.profit_pct.to_string(),
                    r.trend.as_str().to_string(),
                ]
            })
            .collect();
        render_aligned(&headers, &body)
    } else {
        evaluate::growth_table_csv(&rows)
    };
    emit(&a.out, &text)
}

/// `sig` significant digits, plain decimal notation.
fn fmt_sig(v: f64, sig: u32) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).clamp(0, 17) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn render_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    wtr.write_record(header).expect("csv write");
    for row in rows {
        wtr.write_record(row).expect("csv write");
    }
    String::from_utf8(wtr.into_inner().expect("csv flush")).expect("utf8")
}

fn render_aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = Vec::with_capacity(cols);
    for (i, h) in header.iter().enumerate() {
        line.push(format!("{h:<width$}", width = widths[i]));
    }
    out.push_str(line.join("  ").trim_end());
    out.push('\n');
    for row in rows {
        let mut line = Vec::with_capacity(cols);
        for (i, cell) in row.iter().enumerate() {
            if i == 0 {
                line.push(format!("{cell:<width$}", width = widths[i]));
            } else {
                line.push(format!("{cell:>width$}", width = widths[i]));
            }
        }
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
