//! ARFF (attribute-relation file format) reading and writing.
//!
//! Supported surface: `%` comment lines, `@relation`, `@attribute <name>
//! <type>` with numeric/real/integer (numeric) or string (label) types, then
//! `@data` with comma-separated rows. Keywords are case-insensitive; names
//! and string values may be single-quoted. Nominal `{...}` and date types are
//! recognized and rejected, and `?` missing values are a hard error.
//!
//! Writer contract: lowercase keywords, single space separation, LF line
//! endings, numerics in shortest round-trip form, trailing newline.

use crate::dataset::{AttributeKind, AttributeSpec, Dataset, Value};
use crate::error::{Error, Result};

pub fn parse_arff(text: &str) -> Result<Dataset> {
    let mut relation_seen = false;
    let mut specs: Vec<AttributeSpec> = Vec::new();
    let mut rows: Vec<Vec<Value>> = Vec::new();
    let mut in_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                if relation_seen {
                    return Err(syntax(line_no, "duplicate @relation"));
                }
                let rest = line["@relation".len()..].trim();
                if rest.is_empty() {
                    return Err(syntax(line_no, "@relation needs a name"));
                }
                relation_seen = true;
            } else if lower.starts_with("@attribute") {
                if !relation_seen {
                    return Err(syntax(line_no, "@attribute before @relation"));
                }
                let rest = line["@attribute".len()..].trim();
                let (name, after) = take_name(rest, line_no)?;
                let kind = after.trim();
                if kind.is_empty() {
                    return Err(syntax(line_no, "@attribute needs a type"));
                }
                let spec = match kind.to_ascii_lowercase().as_str() {
                    "numeric" | "real" | "integer" => AttributeSpec::numeric(name, specs.len()),
                    "string" => AttributeSpec::label(name, specs.len()),
                    _ => {
                        return Err(Error::UnsupportedType {
                            line: line_no,
                            kind: kind.to_string(),
                        })
                    }
                };
                specs.push(spec);
            } else if lower == "@data" {
                if !relation_seen {
                    return Err(syntax(line_no, "@data before @relation"));
                }
                if specs.is_empty() {
                    return Err(syntax(line_no, "@data before any @attribute"));
                }
                in_data = true;
            } else {
                return Err(syntax(line_no, "expected @relation, @attribute or @data"));
            }
        } else {
            let fields = split_fields(line, line_no)?;
            if fields.len() != specs.len() {
                return Err(Error::Arity {
                    line: line_no,
                    expected: specs.len(),
                    found: fields.len(),
                });
            }
            let mut row = Vec::with_capacity(specs.len());
            for (spec, field) in specs.iter().zip(fields) {
                if field == "?" {
                    return Err(Error::MissingValue(line_no));
                }
                match spec.kind {
                    AttributeKind::Numeric => {
                        let v: f64 = field.parse().map_err(|_| {
                            syntax(line_no, &format!("bad numeric value '{field}'"))
                        })?;
                        if !v.is_finite() {
                            return Err(syntax(line_no, &format!("non-finite value '{field}'")));
                        }
                        row.push(Value::Num(v));
                    }
                    AttributeKind::Label => row.push(Value::Text(field)),
                }
            }
            rows.push(row);
        }
    }
    if !in_data {
        return Err(syntax(text.lines().count() + 1, "missing @data section"));
    }
    Dataset::new(specs, rows)
}

pub fn write_arff(d: &Dataset, relation: &str) -> String {
    let mut out = String::new();
    out.push_str("@relation ");
    out.push_str(&quote_if_needed(relation));
    out.push('\n');
    for spec in d.attributes() {
        out.push_str("@attribute ");
        out.push_str(&quote_if_needed(&spec.name));
        out.push(' ');
        out.push_str(match spec.kind {
            AttributeKind::Numeric => "numeric",
            AttributeKind::Label => "string",
        });
        out.push('\n');
    }
    out.push_str("@data\n");
    for row in d.rows() {
        let line: Vec<String> = row
            .iter()
            .map(|v| match v {
                Value::Num(x) => format!("{x}"),
                Value::Text(t) => quote_if_needed(t),
            })
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn syntax(line: usize, message: &str) -> Error {
    Error::ArffSyntax {
        line,
        message: message.to_string(),
    }
}

/// Reads a possibly single-quoted name; returns (name, remainder).
fn take_name(s: &str, line_no: usize) -> Result<(String, &str)> {
    if let Some(rest) = s.strip_prefix('\'') {
        let mut name = String::new();
        let mut chars = rest.char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => {
                    if let Some((_, esc)) = chars.next() {
                        name.push(esc);
                    } else {
                        return Err(syntax(line_no, "dangling escape in quoted name"));
                    }
                }
                '\'' => return Ok((name, &rest[i + 1..])),
                _ => name.push(c),
            }
        }
        Err(syntax(line_no, "unterminated quoted name"))
    } else {
        match s.find(char::is_whitespace) {
            Some(i) => Ok((s[..i].to_string(), &s[i..])),
            None => Err(syntax(line_no, "@attribute needs a type")),
        }
    }
}

/// Splits a data line on commas, honouring single-quoted fields.
fn split_fields(line: &str, line_no: usize) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    loop {
        match chars.peek() {
            None => {
                fields.push(cur.trim().to_string());
                return Ok(fields);
            }
            Some('\'') if cur.trim().is_empty() => {
                chars.next();
                cur.clear();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some(esc) => cur.push(esc),
                            None => return Err(syntax(line_no, "dangling escape in value")),
                        },
                        Some('\'') => break,
                        Some(c) => cur.push(c),
                        None => return Err(syntax(line_no, "unterminated quoted value")),
                    }
                }
                // consume everything up to the next separator
                while let Some(&c) = chars.peek() {
                    if c == ',' {
                        break;
                    }
                    if !c.is_whitespace() {
                        return Err(syntax(line_no, "garbage after quoted value"));
                    }
                    chars.next();
                }
                if chars.peek() == Some(&',') {
                    chars.next();
                    fields.push(cur.clone());
                    cur.clear();
                } else {
                    fields.push(cur.clone());
                    return Ok(fields);
                }
            }
            Some(',') => {
                chars.next();
                fields.push(cur.trim().to_string());
                cur.clear();
            }
            Some(&c) => {
                chars.next();
                cur.push(c);
            }
        }
    }
}

fn quote_if_needed(s: &str) -> String {
    if !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || c == ',' || c == '\'' || c == '%' || c == '{' || c == '}')
    {
        s.to_string()
    } else {
        let mut q = String::from("'");
        for c in s.chars() {
            if c == '\'' || c == '\\' {
                q.push('\\');
            }
            q.push(c);
        }
        q.push('\'');
        q
    }
}
