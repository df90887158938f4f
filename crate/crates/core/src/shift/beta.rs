//! Quasi-greedy expansions of 1 in base beta.
//!
//! Two exact routes are provided: beta a root of `x^2 = a x + b` with integer
//! `a >= b >= 1` (arithmetic in `Z[beta]`), and beta given as a rational
//! number, typically a high-precision decimal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Symbol;
use crate::error::{Error, Result};

/// Expansion of 1 truncated to `depth` digits, quasi-greedy form: a finite
/// greedy expansion `d_1 .. d_m` becomes the periodic `(d_1 .. d_{m-1} (d_m - 1))^inf`.
fn quasi_greedy_from_greedy(greedy: Vec<Symbol>, finite: bool, depth: usize) -> Vec<Symbol> {
    if !finite {
        return greedy.into_iter().take(depth).collect();
    }
    let mut period = greedy;
    *period.last_mut().expect("finite expansions are non-empty") -= 1;
    period.iter().copied().cycle().take(depth).collect()
}

/// Element `p + q*beta` of `Z[beta]` where `beta^2 = a*beta + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct QuadInt {
    p: i128,
    q: i128,
}

/// Quasi-greedy expansion of 1 for the Pisot number `beta = (a + sqrt(a^2 + 4b)) / 2`.
pub fn quasi_greedy_quadratic(a: i64, b: i64, depth: usize) -> Result<Vec<Symbol>> {
    if !(a >= b && b >= 1) {
        return Err(Error::InvalidInput(
            "quadratic beta requires integers a >= b >= 1".into(),
        ));
    }
    let (a, b) = (a as i128, b as i128);
    let disc = a * a + 4 * b;
    // sign of u + v*sqrt(disc), exactly
    let sign = |u: i128, v: i128| -> i128 {
        match (u.signum(), v.signum()) {
            (su, sv) if su >= 0 && sv >= 0 => (su + sv).signum(),
            (su, sv) if su <= 0 && sv <= 0 => -((su.abs() + sv.abs()).signum()),
            (su, _) => {
                let lhs = u * u;
                let rhs = v * v * disc;
                if lhs == rhs {
                    0
                } else if (lhs > rhs) == (su > 0) {
                    1
                } else {
                    -1
                }
            }
        }
    };
    // sign of x - m for x = p + q*beta: 2(p - m) + q*a + q*sqrt(disc)
    let cmp_int = |x: QuadInt, m: i128| sign(2 * (x.p - m) + x.q * a, x.q);
    let beta_f = (a as f64 + (disc as f64).sqrt()) / 2.0;
    let mut x = QuadInt { p: 1, q: 0 };
    let mut digits = Vec::new();
    for _ in 0..depth {
        // beta * (p + q beta) = q b + (p + q a) beta
        let bx = QuadInt {
            p: x.q * b,
            q: x.p + x.q * a,
        };
        let mut d = (bx.p as f64 + bx.q as f64 * beta_f).floor() as i128;
        while cmp_int(bx, d) < 0 {
            d -= 1;
        }
        while cmp_int(bx, d + 1) >= 0 {
            d += 1;
        }
        digits.push(d as Symbol);
        x = QuadInt { p: bx.p - d, q: bx.q };
        if x.p == 0 && x.q == 0 {
            return Ok(quasi_greedy_from_greedy(digits, true, depth));
        }
    }
    Ok(quasi_greedy_from_greedy(digits, false, depth))
}

/// Quasi-greedy expansion of 1 for a rational `beta > 1`, computed exactly.
pub fn quasi_greedy_rational(beta: &BigRational, depth: usize) -> Result<Vec<Symbol>> {
    if beta <= &BigRational::one() {
        return Err(Error::InvalidInput("beta must exceed 1".into()));
    }
    let mut x = BigRational::one();
    let mut digits = Vec::new();
    for _ in 0..depth {
        let bx = beta * &x;
        let d = bx.floor();
        let digit: Symbol = d
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidInput("digit does not fit in a symbol".into()))?;
        digits.push(digit);
        x = bx - d;
        if x.is_zero() {
            return Ok(quasi_greedy_from_greedy(digits, true, depth));
        }
    }
    Ok(quasi_greedy_from_greedy(digits, false, depth))
}

/// Parses a decimal string such as `"1.6180339887"` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a decimal number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("not a decimal number: {s:?}")))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Reduces a big rational into `i64` parts when it fits.
pub(crate) fn small_ratio(r: &BigRational) -> Option<(i64, i64)> {
    let g = r.numer().gcd(r.denom());
    let n: i64 = (r.numer() / &g).try_into().ok()?;
    let d: i64 = (r.denom() / &g).abs().try_into().ok()?;
    let n = if r.denom().is_negative() { -n } else { n };
    Some((n, d))
}
