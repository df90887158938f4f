//! Brute-force ground truth by counting words.
//!
//! For `eps` in `(1/2, 1)` Bowen balls on a shift space are cylinders, so
//! entropy and pressure of a set of points with prescribed averages are
//! growth rates of (weighted) cylinder counts. All counts are exact big
//! integers; logarithms are taken only when reporting.

mod lattice;
mod separated;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::rational::Rational;
use crate::shift::{SymbolicSystem, SystemKind};

pub use lattice::{
    count_exact, count_table, ln_big, log_count, Checkpoint, CountTable, LatticeConstraint, LatticeQuery,
    MAX_LATTICE_CONSTRAINTS,
};
pub use separated::{
    bowen_ball_membership, count_separated, MeasureBall, MistakeFunction, SeparatedCount, SeparatedMode,
    MAX_CLIQUE_VERTICES, MAX_EXACT_N, MAX_GREEDY_N,
};

/// Number of admissible `n`-words.
pub fn count_words(sys: &SymbolicSystem, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::WordTooShort { len: 0, min: 1 });
    }
    let a = sys.alphabet_size();
    if sys.kind() == SystemKind::Beta {
        let e = sys.beta_expansion();
        if n > e.len() {
            return Err(Error::WordTooLong { len: n, max: e.len() });
        }
        // State j: the current suffix agrees with the first j digits of the
        // expansion.
        let mut cur = vec![BigUint::zero(); n + 1];
        cur[0] = BigUint::from(1u32);
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); n + 1];
            for (j, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let ej = e[j] as usize;
                next[0] += c * BigUint::from(ej.min(a));
                if ej < a {
                    next[j + 1] += c;
                }
            }
            cur = next;
        }
        return Ok(cur.into_iter().sum());
    }
    let mut cur = vec![BigUint::from(1u32); a];
    for _ in 1..n {
        let mut next = vec![BigUint::zero(); a];
        for (i, c) in cur.iter().enumerate() {
            for j in sys.successors(i) {
                next[j] += c;
            }
        }
        cur = next;
    }
    Ok(cur.into_iter().sum())
}

/// Admissible `n`-words whose Birkhoff average of `f` over the `n - k + 1`
/// full windows lies in `[lo, hi]`.
pub fn count_level_words(
    sys: &SymbolicSystem,
    f: &Observable,
    lo: Rational,
    hi: Rational,
    n: usize,
) -> Result<BigUint> {
    count_exact(
        sys,
        &LatticeQuery::new(n, vec![LatticeConstraint::window(f.clone(), lo, hi)]),
    )
}

/// `(1/n) ln` of a count.
pub fn growth_rate(count: &BigUint, n: usize) -> f64 {
    ln_big(count) / n as f64
}

/// `(1/n) ln sum exp(S_n psi(w))` over the words of `count_level_words`.
pub fn pressure_of_set_estimate(
    sys: &SymbolicSystem,
    psi: &Observable,
    f: &Observable,
    lo: Rational,
    hi: Rational,
    n: usize,
) -> Result<f64> {
    let q = LatticeQuery::new(n, vec![LatticeConstraint::window(f.clone(), lo, hi)]).with_potential(psi.clone());
    Ok(log_count(sys, &q)? / n as f64)
}
