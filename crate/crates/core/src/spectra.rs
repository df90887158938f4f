//! Entropy and pressure of level sets of Birkhoff averages: `X(c, d)` with
//! liminf `c` and limsup `d`, intersections with pinned regular level sets,
//! and regular/irregular intersections.
//!
//! A non-empty level set with endpoints `c <= d` has value
//! `min over xi in {c, d}` of the constrained value at `xi`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::MarkovMixtureMeasure;
use crate::observable::Observable;
use crate::rational::{to_f64, Rational};
use crate::shift::SymbolicSystem;
use crate::thermo::{
    self, average_range, boundary_subgraph, constrained_value, equilibrium_state, karp, pressure, range_on_subgraph,
    ConstrainedValue,
};

/// Slices narrower than this count as a single value.
pub const WIDTH_TOL: f64 = 1e-9;
/// Bound on `|t|` in the mean-cycle Legendre search.
pub const T_MAX: f64 = 1e3;
const A_GRID: usize = 101;

#[derive(Debug, Clone)]
pub struct LevelSetQuery {
    pub level_observable: Observable,
    pub c: Rational,
    pub d: Rational,
    pub pinned: Vec<(Observable, Rational)>,
    /// Zero for entropy.
    pub potential: Observable,
}

impl LevelSetQuery {
    pub fn new(level_observable: Observable, c: Rational, d: Rational, potential: Observable) -> Self {
        Self {
            level_observable,
            c,
            d,
            pinned: Vec::new(),
            potential,
        }
    }

    pub fn with_pinned(mut self, pinned: Vec<(Observable, Rational)>) -> Self {
        self.pinned = pinned;
        self
    }
}

/// Dual data attaining the value at one endpoint.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub xi: Rational,
    pub value: f64,
    pub q: Vec<f64>,
    pub equilibrium: MarkovMixtureMeasure,
    pub converged: bool,
}

impl Certificate {
    pub(crate) fn from_value(xi: Rational, v: ConstrainedValue) -> Self {
        Self {
            xi,
            value: v.value,
            q: v.q,
            equilibrium: v.equilibrium,
            converged: v.converged,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub empty: bool,
    pub value: Option<f64>,
    /// Values at `xi = c` and `xi = d`.
    pub endpoint_values: Option<(f64, f64)>,
    pub certificates: Vec<Certificate>,
}

impl SpectrumResult {
    pub fn empty() -> Self {
        Self {
            empty: true,
            value: None,
            endpoint_values: None,
            certificates: Vec::new(),
        }
    }

    pub(crate) fn from_endpoints(at_c: Certificate, at_d: Option<Certificate>) -> Self {
        let vc = at_c.value;
        let vd = at_d.as_ref().map_or(vc, |c| c.value);
        let mut certificates = vec![at_c];
        certificates.extend(at_d);
        Self {
            empty: false,
            value: Some(vc.min(vd)),
            endpoint_values: Some((vc, vd)),
            certificates,
        }
    }

    pub fn converged(&self) -> bool {
        self.certificates.iter().all(|c| c.converged)
    }
}

fn check_order(c: Rational, d: Rational) -> Result<()> {
    if c > d {
        return Err(Error::InvalidInput(format!(
            "level bounds out of order: c = {c} > d = {d}"
        )));
    }
    Ok(())
}

/// Value of `X(c, d)` without pinned constraints. Empty iff `c` or `d` lies
/// outside the achievable range; endpoints use the boundary path.
pub fn level_set_value(sys: &SymbolicSystem, query: &LevelSetQuery) -> Result<SpectrumResult> {
    if !query.pinned.is_empty() {
        return Err(Error::InvalidInput("pinned constraints need joint_level_value".into()));
    }
    check_order(query.c, query.d)?;
    let range = average_range(sys, &query.level_observable)?;
    if !range.contains(query.c) || !range.contains(query.d) {
        return Ok(SpectrumResult::empty());
    }
    let solve = |xi: Rational| -> Result<Certificate> {
        let v = constrained_value(sys, &[(query.level_observable.clone(), xi)], &query.potential)?;
        Ok(Certificate::from_value(xi, v))
    };
    let at_c = solve(query.c)?;
    let at_d = if query.d == query.c {
        None
    } else {
        Some(solve(query.d)?)
    };
    Ok(SpectrumResult::from_endpoints(at_c, at_d))
}

/// Value of `(intersection of regular sets of the pinned observables) x X(c, d)`.
/// Empty iff either endpoint system is infeasible.
pub fn joint_level_value(sys: &SymbolicSystem, query: &LevelSetQuery) -> Result<SpectrumResult> {
    if query.pinned.is_empty() {
        return level_set_value(sys, query);
    }
    check_order(query.c, query.d)?;
    let solve = |xi: Rational| -> Result<Option<Certificate>> {
        let mut cons = query.pinned.clone();
        cons.push((query.level_observable.clone(), xi));
        match constrained_value(sys, &cons, &query.potential) {
            Ok(v) => Ok(Some(Certificate::from_value(xi, v))),
            Err(Error::Infeasible(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let Some(at_c) = solve(query.c)? else {
        return Ok(SpectrumResult::empty());
    };
    let at_d = if query.d == query.c {
        None
    } else {
        match solve(query.d)? {
            Some(c) => Some(c),
            None => return Ok(SpectrumResult::empty()),
        }
    };
    Ok(SpectrumResult::from_endpoints(at_c, at_d))
}

/// Closed interval of real values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRange {
    pub lo: f64,
    pub hi: f64,
}

impl RealRange {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// `[min, max]` of `integral objective d mu` over invariant `mu` with
/// `integral constraint d mu = a`.
///
/// Interior targets use `inf_t [maxmean(objective + t constraint) - t a]`
/// (and the matching sup for the minimum) by golden-section search on
/// `[-T_MAX, T_MAX]`; endpoint targets are computed exactly on the critical
/// subgraph.
pub fn support_extremes(
    sys: &SymbolicSystem,
    objective: &Observable,
    constraint: &Observable,
    a: Rational,
) -> Result<RealRange> {
    if let Some(mask) = boundary_subgraph(sys, constraint, a)? {
        let r = range_on_subgraph(sys, objective, &mask)?;
        return Ok(RealRange {
            lo: to_f64(r.lo),
            hi: to_f64(r.hi),
        });
    }
    let obj = thermo::edge_table(sys, objective)?;
    let con = thermo::edge_table(sys, constraint)?;
    let n = sys.alphabet_size();
    let mask = sys.adjacency();
    let nodes: Vec<usize> = (0..n).collect();
    let af = to_f64(a);
    let weights = |t: f64| -> Vec<f64> {
        obj.values
            .iter()
            .zip(&con.values)
            .map(|(o, c)| if o.is_nan() { 0.0 } else { o + t * c })
            .collect()
    };
    let upper = |t: f64| karp::max_mean_f64(n, mask, &weights(t), &nodes) - t * af;
    let lower = |t: f64| -(karp::min_mean_f64(n, mask, &weights(t), &nodes) - t * af);
    let hi = golden_min(upper, -T_MAX, T_MAX);
    let lo = -golden_min(lower, -T_MAX, T_MAX);
    Ok(RealRange { lo, hi })
}

/// Minimum of a convex function on `[a, b]` by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = f1.min(f2);
    for _ in 0..200 {
        if b - a < 1e-13 {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
        best = best.min(f1).min(f2);
    }
    best.min(f(a)).min(f(b))
}

/// Maximum of a concave function on `[a, b]`, returning `(argmax, max)`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Width of the `phi2`-slice of the rotation set at `integral phi1 = a`.
pub fn slice_width(sys: &SymbolicSystem, phi1: &Observable, phi2: &Observable, a: Rational) -> Result<f64> {
    Ok(support_extremes(sys, phi2, phi1, a)?.width())
}

/// Value of `R_phi1(a) x I_phi2` (or of `I_phi2` intersected with all
/// `phi1`-regular points when `a` is absent).
///
/// Without `a` the existence test scans a 101-point grid of `a` values and
/// refines the best one by golden-section search; a slice of positive width
/// narrower than the grid spacing could be missed.
pub fn reg_irreg_value(
    sys: &SymbolicSystem,
    phi1: &Observable,
    phi2: &Observable,
    potential: &Observable,
    a: Option<Rational>,
) -> Result<SpectrumResult> {
    match a {
        Some(a) => {
            let width = match slice_width(sys, phi1, phi2, a) {
                Ok(w) => w,
                Err(Error::Infeasible(_)) => return Ok(SpectrumResult::empty()),
                Err(e) => return Err(e),
            };
            if width <= WIDTH_TOL {
                return Ok(SpectrumResult::empty());
            }
            let v = constrained_value(sys, &[(phi1.clone(), a)], potential)?;
            Ok(SpectrumResult::from_endpoints(Certificate::from_value(a, v), None))
        }
        None => {
            let range = average_range(sys, phi1)?;
            let (lo, hi) = (range.lo, range.hi);
            let step = (hi - lo) / Rational::from_integer(A_GRID as i64 - 1);
            let grid: Vec<Rational> = (0..A_GRID as i64).map(|k| lo + step * k).collect();
            let widths = grid
                .par_iter()
                .map(|&a| slice_width(sys, phi1, phi2, a))
                .collect::<Result<Vec<_>>>()?;
            let (best, mut width) =
                widths.iter().copied().enumerate().fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, w)| if w > acc.1 { (i, w) } else { acc },
                );
            if width <= WIDTH_TOL && hi > lo {
                // The width is concave in a; refine between the neighbours.
                let left = to_f64(grid[best.saturating_sub(1)]);
                let right = to_f64(grid[(best + 1).min(A_GRID - 1)]);
                let refined = golden_max(
                    |x| {
                        let a = Rational::approximate_float(x).unwrap_or(grid[best]);
                        slice_width(sys, phi1, phi2, a).unwrap_or(0.0)
                    },
                    left,
                    right,
                    40,
                );
                width = width.max(refined.1);
            }
            if width <= WIDTH_TOL {
                return Ok(SpectrumResult::empty());
            }
            let p = pressure(sys, potential)?;
            let eq = equilibrium_state(sys, potential)?;
            let cert = Certificate {
                xi: grid[best],
                value: p,
                q: Vec::new(),
                equilibrium: eq.into(),
                converged: true,
            };
            Ok(SpectrumResult::from_endpoints(cert, None))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub alpha: Rational,
    pub value: f64,
    pub q_star: f64,
    pub converged: bool,
}

/// `alpha -> sup { h(mu) + integral potential : integral phi = alpha }` on a
/// grid, evaluated in parallel; output order follows the grid.
pub fn spectrum_curve(
    sys: &SymbolicSystem,
    phi: &Observable,
    potential: &Observable,
    grid: &[Rational],
) -> Result<Vec<SpectrumPoint>> {
    grid.par_iter()
        .map(|&alpha| {
            let v = constrained_value(sys, &[(phi.clone(), alpha)], potential)?;
            Ok(SpectrumPoint {
                alpha,
                value: v.value,
                q_star: v.q[0],
                converged: v.converged,
            })
        })
        .collect()
}

/// Largest amount by which a sampled curve dips below the chord of its
/// neighbours (0 for a concave curve).
pub fn concavity_violation(points: &[(f64, f64)]) -> f64 {
    points
        .windows(3)
        .map(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            let (x2, y2) = w[2];
            let chord = y0 + (y2 - y0) * (x1 - x0) / (x2 - x0);
            (chord - y1).max(0.0)
        })
        .fold(0.0, f64::max)
}
