//! CSV tables with fixed float formatting.

use std::fmt::Write as _;

/// Twelve significant digits, shortest form; `inf`, `-inf`, `nan` spelled out.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    // Avoid "-0" for values that round to zero from below.
    if rounded == 0.0 {
        return "0".into();
    }
    // Debug switches to exponent form for very large or small magnitudes.
    let s = format!("{rounded:?}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

pub fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";")
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

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(-1e-20), "-1e-20");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        assert_eq!(num(123456789012345.0), "123456789012000");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(6.02214076e23), "6.02214076e23");
    }
}
