//! CSV and JSON writers for result tables.
//!
//! Floats are printed with 12 significant digits (`%.12g` style), `.` as the
//! decimal point, and `\n` line endings, so output is byte-stable across
//! platforms and locales.

use std::fmt::Write as _;
use std::io::Write as _;

use crate::cli::config::OutputTarget;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::UInt(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::UInt(x as u64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match schema");
        self.rows.push(row);
    }
}

pub const CURVE_COLUMNS: &[&str] = &["delta_alpha", "m_analytic", "m_estimated", "stderr", "n"];
pub const CHSH_COLUMNS: &[&str] = &[
    "a1",
    "a2",
    "b1",
    "b2",
    "e11",
    "e12",
    "e21",
    "e22",
    "s",
    "s_stderr",
    "s_quantum",
    "ratio",
];

/// `%.12g`-style formatting. Non-finite values print as `NaN`, `inf`, `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    const SIG: i32 = 12;
    // exponent after rounding to SIG digits
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::UInt(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
    }
}

pub fn to_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(cell_text).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Array of objects keyed by the CSV column names. Non-finite floats are `null`.
pub fn to_json(table: &Table) -> String {
    if table.rows.is_empty() {
        return "[]\n".to_string();
    }
    let mut out = String::from("[\n");
    for (i, row) in table.rows.iter().enumerate() {
        out.push_str("  {");
        for (j, (col, cell)) in table.columns.iter().zip(row).enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            let value = match cell {
                Cell::Float(v) if !v.is_finite() => "null".to_string(),
                c => cell_text(c),
            };
            let _ = write!(out, "\"{col}\": {value}");
        }
        out.push('}');
        if i + 1 < table.rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

pub fn emit_csv(table: &Table, target: &OutputTarget) -> Result<()> {
    write_text(&to_csv(table), target)
}

pub fn emit_json(table: &Table, target: &OutputTarget) -> Result<()> {
    write_text(&to_json(table), target)
}

fn write_text(text: &str, target: &OutputTarget) -> Result<()> {
    match target {
        OutputTarget::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        OutputTarget::File(path) => std::fs::write(path, text)?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-1.0), "-1");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(PI), "3.14159265359");
        assert_eq!(format_float(2.0 * SQRT_2), "2.82842712475");
        assert_eq!(format_float(1e-5), "1e-05");
        assert_eq!(format_float(1.5e-4), "0.00015");
        assert_eq!(format_float(123456789012.0), "123456789012");
        assert_eq!(format_float(1234567890123.0), "1.23456789012e+12");
        assert_eq!(format_float(9.9999999999996), "10");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn headers() {
        let t = Table::new(CURVE_COLUMNS);
        assert_eq!(to_csv(&t), "delta_alpha,m_analytic,m_estimated,stderr,n\n");
        let t = Table::new(CHSH_COLUMNS);
        assert_eq!(
            to_csv(&t),
            "a1,a2,b1,b2,e11,e12,e21,e22,s,s_stderr,s_quantum,ratio\n"
        );
        assert_eq!(to_json(&t), "[]\n");
    }

    #[test]
    fn json_rows() {
        let mut t = Table::new(&["x", "n"]);
        t.push(vec![0.25.into(), 3u64.into()]);
        t.push(vec![f64::NAN.into(), Cell::Int(-2)]);
        assert_eq!(
            to_json(&t),
            "[\n  {\"x\": 0.25, \"n\": 3},\n  {\"x\": null, \"n\": -2}\n]\n"
        );
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let t = Table::new(CURVE_COLUMNS);
        let target = OutputTarget::File("/nonexistent-dir/x/y.csv".into());
        assert!(matches!(emit_csv(&t, &target), Err(crate::Error::Io(_))));
    }
}
