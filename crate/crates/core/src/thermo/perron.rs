//! Perron root and vectors of irreducible non-negative matrices given in
//! log form.
//!
//! Entries are rescaled by the largest exponent before exponentiating, and
//! the iteration runs on `M + sI` with `s` half the current Collatz-Wielandt
//! lower bound, which makes periodic matrices primitive and keeps negative
//! eigenvalues of near-periodic ones from stalling convergence.

use crate::error::{Error, Result};

const TIGHT_TOL: f64 = 1e-14;
const LOOSE_TOL: f64 = 1e-12;
const LOOSE_AFTER: usize = 50_000;
pub(crate) const MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone)]
pub(crate) struct Perron {
    /// Natural log of the Perron root.
    pub ln_lambda: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// The rescaled matrix `exp(logw - shift)` the vectors belong to.
    pub scaled: Vec<f64>,
    /// Perron root of `scaled`.
    pub lambda_scaled: f64,
}

/// `logw` is row-major `k x k` with `-inf` for absent edges.
pub(crate) fn perron_log(k: usize, logw: &[f64]) -> Result<Perron> {
    debug_assert_eq!(logw.len(), k * k);
    let shift = logw
        .iter()
        .copied()
        .filter(|x| x.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::InvalidInput("transfer matrix has no finite entry".into()));
    }
    let scaled: Vec<f64> = logw
        .iter()
        .map(|&x| {
            if x == f64::NEG_INFINITY {
                0.0
            } else {
                // Keep allowed edges strictly positive so irreducibility survives underflow.
                (x - shift).exp().max(f64::MIN_POSITIVE)
            }
        })
        .collect();
    let (lambda, right) = power_iteration(k, &scaled, false)?;
    let (_, left) = power_iteration(k, &scaled, true)?;
    Ok(Perron {
        ln_lambda: lambda.ln() + shift,
        left,
        right,
        scaled,
        lambda_scaled: lambda,
    })
}

fn power_iteration(k: usize, m: &[f64], transpose: bool) -> Result<(f64, Vec<f64>)> {
    let at = |i: usize, j: usize| if transpose { m[j * k + i] } else { m[i * k + j] };
    let mut v = vec![1.0; k];
    let mut w = vec![0.0; k];
    for it in 1..=MAX_ITER {
        for i in 0..k {
            w[i] = (0..k).map(|j| at(i, j) * v[j]).sum();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..k {
            let r = w[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::InvalidInput("transfer matrix is not irreducible".into()));
        }
        let tol = if it > LOOSE_AFTER { LOOSE_TOL } else { TIGHT_TOL };
        if hi - lo <= tol * hi {
            let norm = w.iter().copied().fold(0.0, f64::max);
            w.iter_mut().for_each(|x| *x /= norm);
            return Ok((0.5 * (lo + hi), w));
        }
        let s = 0.5 * lo;
        let mut norm = 0.0f64;
        for i in 0..k {
            v[i] = w[i] + s * v[i];
            norm = norm.max(v[i]);
        }
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Err(Error::NoConvergence {
        what: "Perron root".into(),
        iterations: MAX_ITER,
    })
}

impl Perron {
    /// Edge frequencies `u_i M_ij v_j / (lambda u.v)` of the equilibrium state.
    pub fn edge_frequencies(&self) -> Vec<f64> {
        let k = self.right.len();
        let dot: f64 = self.left.iter().zip(&self.right).map(|(a, b)| a * b).sum();
        let norm = self.lambda_scaled * dot;
        let mut x = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                x[i * k + j] = self.left[i] * self.scaled[i * k + j] * self.right[j] / norm;
            }
        }
        x
    }
}
