//! Exact rationals used for observable values and level targets.

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::shift::beta::{parse_decimal, small_ratio};

pub type Rational = Ratio<i64>;

/// Parses `"3"`, `"-1/4"` or a decimal such as `"0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let big = parse_decimal(s)?;
    let (n, d) = small_ratio(&big).ok_or_else(|| Error::Parse(format!("{s:?} does not fit in 64 bits")))?;
    Ok(Rational::new(n, d))
}

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal-string form of a rational: `"n"` or `"n/d"`.
pub fn format_rational(r: Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `start:stop:step` into the inclusive arithmetic grid, exactly.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(Error::Parse(format!("grid {s:?} is not start:stop:step")));
    };
    let (start, stop, step) = (parse_rational(start)?, parse_rational(stop)?, parse_rational(step)?);
    if step <= Rational::from_integer(0) {
        return Err(Error::Parse("grid step must be positive".into()));
    }
    let mut out = Vec::new();
    let mut x = start;
    while x <= stop {
        out.push(x);
        x += step;
    }
    Ok(out)
}

pub(crate) fn lcm(a: i64, b: i64) -> Result<i64> {
    let g = num_integer::gcd(a, b);
    (a / g)
        .checked_mul(b)
        .ok_or_else(|| Error::InvalidInput("common denominator overflows 64 bits".into()))
}
