//! Plain-text model persistence shared by linear and SVR models.
//!
//! Line-oriented, LF-terminated:
//!
//! ```text
//! # regrkit model v1
//! type: svr
//! target: Page_Views
//! filter: normalize
//! filter_param: Subscribers_total 1000 145000
//! coef: Subscribers_total 0.5108
//! intercept: 0.0315
//! params: C=1 epsilon=0.001 tol=0.001
//! ```
//!
//! Linear models carry `filter: none`, no `filter_param` lines and no
//! `params` line. Numbers use the shortest round-trip representation.
//! Unknown keys are rejected on load.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::filter::{FilterKind, FilterModel};
use crate::linreg::LinearModel;
use crate::smoreg::{SvrModel, SvrParams};

pub const MODEL_HEADER: &str = "# regrkit model v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(LinearModel),
    Svr(SvrModel),
}

impl Model {
    pub fn target(&self) -> &str {
        match self {
            Model::Linear(m) => &m.target,
            Model::Svr(m) => &m.target,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            Model::Linear(_) => "linear",
            Model::Svr(_) => "svr",
        }
    }

    pub fn predict(&self, d: &Dataset, row: usize) -> Result<f64> {
        match self {
            Model::Linear(m) => m.predict(d, row),
            Model::Svr(m) => m.predict(d, row),
        }
    }

    pub fn equation(&self) -> String {
        match self {
            Model::Linear(m) => m.equation(),
            Model::Svr(m) => m.equation(),
        }
    }
}

pub fn render_model(model: &Model) -> String {
    let mut out = String::new();
    out.push_str(MODEL_HEADER);
    out.push('\n');
    out.push_str(&format!("type: {}\n", model.kind_str()));
    out.push_str(&format!("target: {}\n", model.target()));
    match model {
        Model::Linear(m) => {
            out.push_str("filter: none\n");
            for (name, coef) in &m.terms {
                out.push_str(&format!("coef: {name} {coef}\n"));
            }
            out.push_str(&format!("intercept: {}\n", m.intercept));
        }
        Model::Svr(m) => {
            out.push_str(&format!("filter: {}\n", m.filter.kind.as_str()));
            for (name, a, b) in &m.filter.params {
                out.push_str(&format!("filter_param: {name} {a} {b}\n"));
            }
            for (name, w) in m.attrs.iter().zip(&m.weights) {
                out.push_str(&format!("coef: {name} {w}\n"));
            }
            out.push_str(&format!("intercept: {}\n", m.bias));
            out.push_str(&format!(
                "params: C={} epsilon={} tol={}\n",
                m.params.c, m.params.epsilon, m.params.tolerance
            ));
        }
    }
    out
}

pub fn parse_model(text: &str) -> Result<Model> {
    let mut kind: Option<String> = None;
    let mut target: Option<String> = None;
    let mut filter_kind: Option<FilterKind> = None;
    let mut filter_params: Vec<(String, f64, f64)> = Vec::new();
    let mut coefs: Vec<(String, f64)> = Vec::new();
    let mut intercept: Option<f64> = None;
    let mut params: Option<SvrParams> = None;

    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if line.trim() != MODEL_HEADER {
                return Err(fmt_err(line_no, "expected '# regrkit model v1' header"));
            }
            saw_header = true;
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| fmt_err(line_no, "expected 'key: value'"))?;
        let value = value.trim();
        match key.trim() {
            "type" => {
                if !matches!(value, "linear" | "svr") {
                    return Err(fmt_err(line_no, &format!("unknown model type '{value}'")));
                }
                kind = Some(value.to_string());
            }
            "target" => target = Some(value.to_string()),
            "filter" => {
                filter_kind = Some(
                    FilterKind::parse(value)
                        .ok_or_else(|| fmt_err(line_no, &format!("unknown filter '{value}'")))?,
                )
            }
            "filter_param" => {
                let (name, a, b) = split_name_two_numbers(value, line_no)?;
                filter_params.push((name, a, b));
            }
            "coef" => {
                let (name, w) = split_name_number(value, line_no)?;
                coefs.push((name, w));
            }
            "intercept" => {
                intercept = Some(parse_number(value, line_no)?);
            }
            "params" => {
                let mut c = None;
                let mut eps = None;
                let mut tol = None;
                for piece in value.split_whitespace() {
                    let (k, v) = piece
                        .split_once('=')
                        .ok_or_else(|| fmt_err(line_no, "params entries look like key=value"))?;
                    let v = parse_number(v, line_no)?;
                    match k {
                        "C" => c = Some(v),
                        "epsilon" => eps = Some(v),
                        "tol" => tol = Some(v),
                        _ => return Err(fmt_err(line_no, &format!("unknown params key '{k}'"))),
                    }
                }
                match (c, eps, tol) {
                    (Some(c), Some(epsilon), Some(tolerance)) => {
                        params = Some(SvrParams {
                            c,
                            epsilon,
                            tolerance,
                            ..SvrParams::default()
                        })
                    }
                    _ => return Err(fmt_err(line_no, "params needs C, epsilon and tol")),
                }
            }
            other => return Err(fmt_err(line_no, &format!("unknown key '{other}'"))),
        }
    }

    if !saw_header {
        return Err(fmt_err(1, "empty model file"));
    }
    let kind = kind.ok_or_else(|| fmt_err(0, "missing 'type' line"))?;
    let target = target.ok_or_else(|| fmt_err(0, "missing 'target' line"))?;
    let filter_kind = filter_kind.ok_or_else(|| fmt_err(0, "missing 'filter' line"))?;
    let intercept = intercept.ok_or_else(|| fmt_err(0, "missing 'intercept' line"))?;
    if coefs.is_empty() {
        return Err(fmt_err(0, "missing 'coef' lines"));
    }

    match kind.as_str() {
        "linear" => {
            if filter_kind != FilterKind::None {
                return Err(fmt_err(0, "linear models always use 'filter: none'"));
            }
            if params.is_some() || !filter_params.is_empty() {
                return Err(fmt_err(
                    0,
                    "linear models carry no params/filter_param lines",
                ));
            }
            Ok(Model::Linear(LinearModel {
                target,
                terms: coefs,
                intercept,
            }))
        }
        "svr" => {
            let params = params.ok_or_else(|| fmt_err(0, "svr models need a 'params' line"))?;
            if filter_kind == FilterKind::None && !filter_params.is_empty() {
                return Err(fmt_err(0, "'filter: none' admits no filter_param lines"));
            }
            let (attrs, weights): (Vec<String>, Vec<f64>) = coefs.into_iter().unzip();
            Ok(Model::Svr(SvrModel {
                target,
                attrs,
                weights,
                bias: intercept,
                filter: FilterModel {
                    kind: filter_kind,
                    params: filter_params,
                },
                params,
                duals: Vec::new(),
            }))
        }
        _ => unreachable!("validated above"),
    }
}

fn fmt_err(line: usize, message: &str) -> Error {
    Error::ModelFormat {
        line,
        message: message.to_string(),
    }
}

fn parse_number(s: &str, line_no: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| fmt_err(line_no, &format!("bad number '{s}'")))?;
    if !v.is_finite() {
        return Err(fmt_err(line_no, &format!("non-finite number '{s}'")));
    }
    Ok(v)
}

/// "name with spaces 1.5" -> ("name with spaces", 1.5)
fn split_name_number(s: &str, line_no: usize) -> Result<(String, f64)> {
    let (name, num) = s
        .rsplit_once(char::is_whitespace)
        .ok_or_else(|| fmt_err(line_no, "expected '<attribute> <number>'"))?;
    Ok((name.trim().to_string(), parse_number(num, line_no)?))
}

/// "name 1000 145000" -> ("name", 1000.0, 145000.0)
fn split_name_two_numbers(s: &str, line_no: usize) -> Result<(String, f64, f64)> {
    let (rest, b) = s
        .rsplit_once(char::is_whitespace)
        .ok_or_else(|| fmt_err(line_no, "expected '<attribute> <a> <b>'"))?;
    let (name, a) = rest
        .trim()
        .rsplit_once(char::is_whitespace)
        .ok_or_else(|| fmt_err(line_no, "expected '<attribute> <a> <b>'"))?;
    Ok((
        name.trim().to_string(),
        parse_number(a, line_no)?,
        parse_number(b, line_no)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::FilterKind;
    use crate::linreg::{fit_linreg, Selection};
    use crate::smoreg::fit_smoreg;
    use crate::testutil::{table1, PV, REM, ST};

    #[test]
    fn linear_model_roundtrips() {
        let d = table1();
        let m = fit_linreg(&d, PV, &[ST.to_string(), REM.to_string()], Selection::None).unwrap();
        let text = render_model(&Model::Linear(m.clone()));
        assert!(text.starts_with("# regrkit model v1\ntype: linear\n"));
        assert!(text.contains("filter: none\n"));
        match parse_model(&text).unwrap() {
            Model::Linear(back) => assert_eq!(back, m),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn svr_model_roundtrips_without_duals() {
        let d = table1();
        let m = fit_smoreg(
            &d,
            PV,
            &[ST.to_string(), REM.to_string()],
            FilterKind::Normalize,
            Default::default(),
        )
        .unwrap();
        let text = render_model(&Model::Svr(m.clone()));
        assert!(text.contains("filter: normalize\n"));
        assert!(text.contains(&format!("filter_param: {ST} 1000 145000\n")));
        assert!(text.contains("params: C=1 epsilon=0.001 tol=0.001\n"));
        match parse_model(&text).unwrap() {
            Model::Svr(back) => {
                assert_eq!(back.weights, m.weights);
                assert_eq!(back.bias, m.bias);
                assert_eq!(back.filter, m.filter);
                assert_eq!(back.params.c, m.params.c);
                assert!(back.duals.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = "# regrkit model v1\ntype: linear\ntarget: y\nfilter: none\ncoef: x 1\nintercept: 0\nflavour: vanilla\n";
        match parse_model(text) {
            Err(Error::ModelFormat { line, message }) => {
                assert_eq!(line, 7);
                assert!(message.contains("flavour"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_is_mandatory() {
        assert!(matches!(
            parse_model("type: linear\n"),
            Err(Error::ModelFormat { .. })
        ));
    }

    #[test]
    fn attribute_names_with_spaces_survive() {
        let text = "# regrkit model v1\ntype: linear\ntarget: page views\nfilter: none\ncoef: subscriber count 2.5\nintercept: 1\n";
        match parse_model(text).unwrap() {
            Model::Linear(m) => {
                assert_eq!(m.target, "page views");
                assert_eq!(m.terms, vec![("subscriber count".to_string(), 2.5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn numbers_render_shortest_roundtrip() {
        let m = Model::Linear(LinearModel {
            target: "y".into(),
            terms: vec![("x".into(), 0.1)],
            intercept: 10.0731,
        });
        let text = render_model(&m);
        assert!(text.contains("coef: x 0.1\n"));
        assert!(text.contains("intercept: 10.0731\n"));
    }

    #[test]
    fn autotraits() {
        fn has_autotraits<T: Send + Sync + Sized>() {}
        has_autotraits::<Model>();
        has_autotraits::<crate::dataset::Dataset>();
        has_autotraits::<crate::dataset::CorrelationMatrix>();
        has_autotraits::<crate::filter::FilterModel>();
    }
}
