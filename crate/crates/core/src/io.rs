//! Signal and matrix serialization. Floats are written with 17 significant
//! digits so every value round-trips exactly.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::signal::GroupSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(format!("json: {e}"))
}

fn parse_f64(field: &str, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad {what} value `{field}`")))
}

/// CSV `index,re,im[,label]`.
pub fn write_signal_csv<W: Write>(out: W, signal: &GroupSignal, labels: Option<&[String]>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if labels.is_some() {
        w.write_record(["index", "re", "im", "label"]).map_err(csv_err)?;
    } else {
        w.write_record(["index", "re", "im"]).map_err(csv_err)?;
    }
    for (i, v) in signal.values().iter().enumerate() {
        let mut rec = vec![i.to_string(), fmt_f64(v.re), fmt_f64(v.im)];
        if let Some(l) = labels {
            rec.push(l.get(i).cloned().unwrap_or_default());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON array of `[re, im]` pairs.
pub fn write_signal_json<W: Write>(mut out: W, signal: &GroupSignal) -> Result<()> {
    let pairs: Vec<[f64; 2]> = signal.values().iter().map(|v| [v.re, v.im]).collect();
    serde_json::to_writer(&mut out, &pairs).map_err(json_err)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_signal<W: Write>(
    out: W,
    signal: &GroupSignal,
    format: Format,
    labels: Option<&[String]>,
) -> Result<()> {
    match format {
        Format::Csv => write_signal_csv(out, signal, labels),
        Format::Json => write_signal_json(out, signal),
    }
}

/// Reads CSV with an `index,re[,im]` header; rows may come in any order but
/// must cover `0..len` exactly once.
pub fn read_signal_csv<R: Read>(input: R) -> Result<GroupSignal> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers().map_err(csv_err)?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (ci, cre) = match (col("index"), col("re")) {
        (Some(i), Some(re)) => (i, re),
        _ => return Err(Error::Parse("signal csv needs `index` and `re` columns".into())),
    };
    let cim = col("im");
    let mut entries = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let get = |c: usize| rec.get(c).ok_or_else(|| Error::Parse("short csv row".into()));
        let idx: usize = get(ci)?
            .parse()
            .map_err(|_| Error::Parse(format!("bad index `{}`", &rec[ci])))?;
        let re = parse_f64(get(cre)?, "re")?;
        let im = match cim {
            Some(c) => parse_f64(get(c)?, "im")?,
            None => 0.0,
        };
        entries.push((idx, Complex64::new(re, im)));
    }
    let len = entries.len();
    let mut values = vec![None; len];
    for (idx, v) in entries {
        match values.get_mut(idx) {
            Some(slot @ None) => *slot = Some(v),
            Some(Some(_)) => return Err(Error::Parse(format!("duplicate index {idx}"))),
            None => return Err(Error::Parse(format!("index {idx} out of range 0..{len}"))),
        }
    }
    Ok(GroupSignal::new(values.into_iter().map(|v| v.expect("filled")).collect()))
}

/// Reads a JSON array whose items are `[re, im]`, `{"re": .., "im": ..}` or
/// plain real numbers.
pub fn read_signal_json<R: Read>(input: R) -> Result<GroupSignal> {
    let value: serde_json::Value = serde_json::from_reader(input).map_err(json_err)?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::Parse("signal json must be an array".into()))?;
    let num = |v: &serde_json::Value| {
        v.as_f64()
            .ok_or_else(|| Error::Parse(format!("expected a number, found {v}")))
    };
    let values = items
        .iter()
        .map(|item| match item {
            serde_json::Value::Array(pair) if pair.len() == 2 => {
                Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?))
            }
            serde_json::Value::Object(map) => Ok(Complex64::new(
                num(map.get("re").unwrap_or(&serde_json::Value::Null))?,
                map.get("im").map(num).transpose()?.unwrap_or(0.0),
            )),
            other => Ok(Complex64::new(num(other)?, 0.0)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupSignal::new(values))
}

/// Format from the extension, else JSON if the content starts with `[`.
pub fn read_signal(path: &Path) -> Result<GroupSignal> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    let format = Format::from_path(path).unwrap_or(if text.trim_start().starts_with('[') {
        Format::Json
    } else {
        Format::Csv
    });
    match format {
        Format::Csv => read_signal_csv(text.as_bytes()),
        Format::Json => read_signal_json(text.as_bytes()),
    }
}

pub fn write_signal_file(path: &Path, signal: &GroupSignal, format: Format) -> Result<()> {
    let format = Format::from_path(path).unwrap_or(format);
    let file = fs::File::create(path)?;
    write_signal(std::io::BufWriter::new(file), signal, format, None)
}

/// Long-form CSV `row,col,re,im`, zeros included.
pub fn write_matrix_csv<W: Write>(out: W, m: &CMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "re", "im"]).map_err(csv_err)?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            w.write_record([i.to_string(), j.to_string(), fmt_f64(v.re), fmt_f64(v.im)])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// JSON array of rows of `[re, im]` pairs.
pub fn write_matrix_json<W: Write>(mut out: W, m: &CMatrix) -> Result<()> {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::to_writer(&mut out, &rows).map_err(json_err)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_matrix<W: Write>(out: W, m: &CMatrix, format: Format) -> Result<()> {
    match format {
        Format::Csv => write_matrix_csv(out, m),
        Format::Json => write_matrix_json(out, m),
    }
}

pub fn read_matrix_csv<R: Read>(input: R) -> Result<CMatrix> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut entries = Vec::new();
    let (mut rows, mut cols) = (0, 0);
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() < 4 {
            return Err(Error::Parse("matrix csv rows need row,col,re,im".into()));
        }
        let i: usize = rec[0].parse().map_err(|_| Error::Parse(format!("bad row `{}`", &rec[0])))?;
        let j: usize = rec[1].parse().map_err(|_| Error::Parse(format!("bad col `{}`", &rec[1])))?;
        let v = Complex64::new(parse_f64(&rec[2], "re")?, parse_f64(&rec[3], "im")?);
        rows = rows.max(i + 1);
        cols = cols.max(j + 1);
        entries.push((i, j, v));
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (i, j, v) in entries {
        m[(i, j)] = v;
    }
    Ok(m)
}

pub fn read_matrix_json<R: Read>(input: R) -> Result<CMatrix> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_reader(input).map_err(json_err)?;
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}
