//! Number formatting and table rendering.

use std::fmt::Write as _;

/// `%.15g`: 15 significant digits, trailing zeros dropped, exponent form
/// outside [1e-4, 1e15).
pub fn fmt_g(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (14 - exp) as usize;
    strip_zeros(&format!("{v:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_g).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| -> String {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let _ = write!(s, "{cell:>w$}");
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = line(self.header.clone());
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(-0.1875), "-0.1875");
        assert_eq!(fmt_g(0.5), "0.5");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_g(std::f64::consts::PI * 1e6), "3141592.65358979");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(1.25e-7), "1.25e-07");
        assert_eq!(fmt_g(0.000123), "0.000123");
        assert_eq!(fmt_g(1e15), "1e+15");
        assert_eq!(fmt_g(123456789012345.0), "123456789012345");
        assert_eq!(fmt_g(f64::NAN), "nan");
        // Rounding that carries into the next decade.
        assert_eq!(fmt_g(9.999999999999999e-5), "0.0001");
        assert_eq!(fmt_g(0.999_999_999_999_999_9), "1");
    }

    #[test]
    fn csv_quotes() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x, y".into(), "1".into()]);
        assert_eq!(t.render(Format::Csv), "a,b\n\"x, y\",1\n");
    }

    #[test]
    fn text_aligns() {
        let mut t = Table::new(&["x", "value"]);
        t.push(vec!["0.5".into(), "1".into()]);
        assert_eq!(t.render(Format::Text), "  x  value\n0.5      1\n");
    }
}
