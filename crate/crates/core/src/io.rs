//! Decimal formatting and CSV tables.

use std::path::Path;

use crate::error::{Error, Result};

/// `v` with 15 significant digits, in positional notation for moderate
/// magnitudes and scientific notation otherwise, without trailing zeros.
pub fn fmt15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A table of named columns, rendered as CSV with a header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    /// Appends a row of numbers, formatted with [`fmt15`].
    pub fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| fmt15(v)).collect());
    }

    pub fn push_raw(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(io)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(io)?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()).map_err(io))
            .collect::<Result<_>>()?;
        Ok(Self { header, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path).map_err(io)?)
    }

    /// Column `name` parsed as numbers.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Io(format!("no column named {name}")))?;
        self.rows
            .iter()
            .map(|r| r[k].parse::<f64>().map_err(|e| Error::Io(format!("column {name}: {e}"))))
            .collect()
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt15(0.840_896_415_253_714_5), "0.840896415253715");
        assert_eq!(fmt15(1.180_340_599_016_096_2), "1.1803405990161");
        assert_eq!(fmt15(2.5), "2.5");
        assert_eq!(fmt15(-1e-7), "-1e-7");
        assert_eq!(fmt15(123456.0), "123456");
        assert_eq!(fmt15(1.5e20), "1.5e20");
        assert_eq!(fmt15(0.0), "0");
    }

    #[test]
    fn round_trip() {
        let values = [std::f64::consts::PI, -2.0 / 3.0, 1e-300, 6.02214076e23, 0.1, 7.0];
        let mut t = Table::new(&["v"]);
        for v in values {
            t.push(&[v]);
        }
        let back = Table::from_csv(&t.to_csv().unwrap()).unwrap();
        for (a, b) in values.iter().zip(back.column("v").unwrap()) {
            assert!((a - b).abs() <= 5e-15 * a.abs(), "{a} vs {b}");
        }
    }
}
