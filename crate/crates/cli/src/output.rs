//! Fixed-format writers. Every float leaves the process with 12 significant
//! digits, so equal inputs give byte-identical files.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Decimal with 12 significant digits; scientific outside `[1e-5, 1e11)`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..11).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        sci
    }
}

fn reformat(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => match n.as_f64() {
            Some(x) if x.is_finite() => {
                Value::Number(fmt_num(x).parse::<Number>().expect("valid JSON number"))
            }
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(reformat).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, reformat(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(data: &T) -> CliResult<Value> {
    Ok(reformat(serde_json::to_value(data)?))
}

pub fn write_json<T: Serialize>(path: &Path, data: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&to_value(data)?)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => o.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Summary report as `<stem>.json`, or as `quantity,value` rows in
/// `<stem>.csv` with dotted keys for nested fields.
pub fn write_report<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: Format,
    data: &T,
) -> CliResult<()> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    match format {
        Format::Json => write_json(&path, data),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &to_value(data)?, &mut rows);
            write_csv(
                &path,
                &["quantity", "value"],
                rows.into_iter().map(|(k, v)| vec![k, v]),
            )
        }
    }
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}
