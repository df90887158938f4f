//! Pressure via transfer matrices, equilibrium states, constrained
//! entropy/pressure maximization by convex duality, and achievable average
//! ranges by mean-cycle analysis.
//!
//! Potentials and constraints are observables of depth at most 2; deeper
//! ones must be recoded first. A depth-1 observable contributes `f(j)` to
//! the transition `i -> j`.

mod dual;
pub mod karp;
pub(crate) mod perron;

pub use dual::{constrained_value, constrained_value_with, ConstrainedValue, DualOptions};

use crate::error::{Error, Result};
use crate::measure::MarkovMeasure;
use crate::observable::Observable;
use crate::rational::Rational;
use crate::shift::{Symbol, SymbolicSystem};

use karp::Frac;
use perron::{perron_log, Perron};

/// Non-negative `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub n: usize,
    pub entries: Vec<f64>,
}

impl TransferMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.n).map(|r| r.iter().sum()).collect()
    }
}

/// Closed interval of achievable averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange {
    pub lo: Rational,
    pub hi: Rational,
}

impl ValueRange {
    pub fn width(&self) -> Rational {
        self.hi - self.lo
    }

    pub fn contains(&self, x: Rational) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Pressure of `objective + sum q_i phi_i` with its derivative data.
#[derive(Debug, Clone)]
pub struct PressureEvaluation {
    pub q: Vec<f64>,
    pub pressure: f64,
    /// `integral phi_i d mu_q`.
    pub gradient: Vec<f64>,
    pub equilibrium: MarkovMeasure,
}

/// Edge data of an observable: float values (`NaN` on forbidden edges) and
/// integer values scaled by the common denominator.
#[derive(Debug, Clone)]
pub(crate) struct EdgeTable {
    pub values: Vec<f64>,
    pub scaled: Vec<i64>,
    pub denom: i64,
}

pub(crate) fn edge_table(sys: &SymbolicSystem, f: &Observable) -> Result<EdgeTable> {
    let exact = f.edge_values(sys)?;
    let denom = f.denominator();
    let values = exact
        .iter()
        .map(|v| v.map(crate::rational::to_f64).unwrap_or(f64::NAN))
        .collect();
    let scaled = exact
        .iter()
        .map(|v| v.map(|v| (v * denom).to_integer()).unwrap_or(0))
        .collect();
    Ok(EdgeTable { values, scaled, denom })
}

/// `Frac` in scaled units back to a rational.
pub(crate) fn frac_to_rational(f: Frac, denom: i64) -> Result<Rational> {
    let g = Frac::new(f.num, f.den * denom as i128);
    let num = i64::try_from(g.num).map_err(|_| Error::InvalidInput("mean overflows 64 bits".into()))?;
    let den = i64::try_from(g.den).map_err(|_| Error::InvalidInput("mean overflows 64 bits".into()))?;
    Ok(Rational::new(num, den))
}

/// `target * denom` as a fraction, for exact comparison with scaled means.
pub(crate) fn scaled_target(target: Rational, denom: i64) -> Frac {
    Frac::new(*target.numer() as i128 * denom as i128, *target.denom() as i128)
}

/// `M_ij = A_ij exp(potential(ij))`.
pub fn transfer_matrix(sys: &SymbolicSystem, potential: &Observable) -> Result<TransferMatrix> {
    let t = edge_table(sys, potential)?;
    let n = sys.alphabet_size();
    Ok(TransferMatrix {
        n,
        entries: t
            .values
            .iter()
            .map(|&v| if v.is_nan() { 0.0 } else { v.exp() })
            .collect(),
    })
}

/// Log-weights on the whole system: `-inf` off the transition graph.
fn log_weights(objective: &[f64], scale: f64, constraints: &[&[f64]], q: &[f64]) -> Vec<f64> {
    (0..objective.len())
        .map(|e| {
            if objective[e].is_nan() {
                f64::NEG_INFINITY
            } else {
                scale * objective[e] + constraints.iter().zip(q).map(|(c, qi)| qi * c[e]).sum::<f64>()
            }
        })
        .collect()
}

fn full_perron(sys: &SymbolicSystem, potential: &Observable) -> Result<Perron> {
    let t = edge_table(sys, potential)?;
    perron_log(sys.alphabet_size(), &log_weights(&t.values, 1.0, &[], &[]))
}

/// `ln` of the Perron root of the transfer matrix.
pub fn pressure(sys: &SymbolicSystem, potential: &Observable) -> Result<f64> {
    Ok(full_perron(sys, potential)?.ln_lambda)
}

/// The Markov equilibrium state of a depth-2 potential.
pub fn equilibrium_state(sys: &SymbolicSystem, potential: &Observable) -> Result<MarkovMeasure> {
    MarkovMeasure::from_edge_frequencies(sys, &full_perron(sys, potential)?.edge_frequencies())
}

/// Pressure of `objective + sum q_i constraints_i` with gradient
/// `integral constraints_i d mu_q`.
pub fn evaluate_pressure(
    sys: &SymbolicSystem,
    objective: &Observable,
    constraints: &[Observable],
    q: &[f64],
) -> Result<PressureEvaluation> {
    if q.len() != constraints.len() {
        return Err(Error::InvalidInput("one dual variable per constraint expected".into()));
    }
    let obj = edge_table(sys, objective)?;
    let cons = constraints
        .iter()
        .map(|c| edge_table(sys, c))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&[f64]> = cons.iter().map(|c| c.values.as_slice()).collect();
    let p = perron_log(sys.alphabet_size(), &log_weights(&obj.values, 1.0, &refs, q))?;
    let x = p.edge_frequencies();
    let gradient = refs
        .iter()
        .map(|c| {
            x.iter()
                .zip(c.iter())
                .filter(|(xe, _)| **xe > 0.0)
                .map(|(xe, ce)| xe * ce)
                .sum()
        })
        .collect();
    Ok(PressureEvaluation {
        q: q.to_vec(),
        pressure: p.ln_lambda,
        gradient,
        equilibrium: MarkovMeasure::from_edge_frequencies(sys, &x)?,
    })
}

/// `[min, max]` of `integral f d mu` over invariant measures: the extreme
/// mean cycle weights, exact on the lattice scaled by the common denominator.
pub fn average_range(sys: &SymbolicSystem, f: &Observable) -> Result<ValueRange> {
    let t = edge_table(sys, f)?;
    let n = sys.alphabet_size();
    let mask = sys.adjacency();
    let nodes: Vec<usize> = (0..n).collect();
    Ok(ValueRange {
        lo: frac_to_rational(karp::min_mean_exact(n, mask, &t.scaled, &nodes), t.denom)?,
        hi: frac_to_rational(karp::max_mean_exact(n, mask, &t.scaled, &nodes), t.denom)?,
    })
}

/// Edge set carrying exactly the invariant measures with `integral f = a`
/// when `a` is an endpoint of the achievable range (or `f` is degenerate);
/// `None` for interior targets.
pub(crate) fn boundary_subgraph(sys: &SymbolicSystem, f: &Observable, a: Rational) -> Result<Option<Vec<bool>>> {
    let t = edge_table(sys, f)?;
    let n = sys.alphabet_size();
    let mask = sys.adjacency();
    let nodes: Vec<usize> = (0..n).collect();
    let lo = karp::min_mean_exact(n, mask, &t.scaled, &nodes);
    let hi = karp::max_mean_exact(n, mask, &t.scaled, &nodes);
    let target = scaled_target(a, t.denom);
    if target < lo || target > hi {
        return Err(Error::Infeasible(format!(
            "target {a} lies outside the achievable range"
        )));
    }
    Ok(if lo == hi {
        Some(mask.to_vec())
    } else if target == lo {
        Some(karp::min_critical_edges(n, mask, &t.scaled, &nodes, lo))
    } else if target == hi {
        Some(karp::max_critical_edges(n, mask, &t.scaled, &nodes, hi))
    } else {
        None
    })
}

/// Exact range of `f` over invariant measures carried by `mask`.
pub(crate) fn range_on_subgraph(sys: &SymbolicSystem, f: &Observable, mask: &[bool]) -> Result<ValueRange> {
    let t = edge_table(sys, f)?;
    let n = sys.alphabet_size();
    let comps = karp::cyclic_components(n, mask);
    if comps.is_empty() {
        return Err(Error::Infeasible("subgraph carries no invariant measure".into()));
    }
    let lo = comps
        .iter()
        .map(|c| karp::min_mean_exact(n, mask, &t.scaled, c))
        .min()
        .expect("non-empty");
    let hi = comps
        .iter()
        .map(|c| karp::max_mean_exact(n, mask, &t.scaled, c))
        .max()
        .expect("non-empty");
    Ok(ValueRange {
        lo: frac_to_rational(lo, t.denom)?,
        hi: frac_to_rational(hi, t.denom)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Min,
    Max,
}

/// Transitions lying on cycles whose mean weight of `f` is extreme.
pub fn extreme_subgraph(sys: &SymbolicSystem, f: &Observable, which: Extreme) -> Result<Vec<(Symbol, Symbol)>> {
    let t = edge_table(sys, f)?;
    let n = sys.alphabet_size();
    let mask = sys.adjacency();
    let nodes: Vec<usize> = (0..n).collect();
    let crit = match which {
        Extreme::Min => {
            let m = karp::min_mean_exact(n, mask, &t.scaled, &nodes);
            karp::min_critical_edges(n, mask, &t.scaled, &nodes, m)
        }
        Extreme::Max => {
            let m = karp::max_mean_exact(n, mask, &t.scaled, &nodes);
            karp::max_critical_edges(n, mask, &t.scaled, &nodes, m)
        }
    };
    Ok((0..n * n)
        .filter(|&e| crit[e])
        .map(|e| ((e / n) as Symbol, (e % n) as Symbol))
        .collect())
}
