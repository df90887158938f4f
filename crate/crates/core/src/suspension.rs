//! Suspension flows over the base shift: Abramov's entropy formula and
//! flow-level Birkhoff spectra.
//!
//! Flow observables are given in induced form `phi` (the integral of the
//! flow observable along each roof fibre). The flow average over time `T`
//! is then `S_n phi / S_n rho`, so the flow level `xi` corresponds to the
//! base constraint `integral (phi - xi rho) d mu = 0`, and the flow value
//! is the root `h` of `sup { h(mu) - h integral rho d mu } = 0` over that
//! constraint.

use crate::error::{Error, Result};
use crate::measure::{integrate, markov_entropy, MarkovMixtureMeasure};
use crate::observable::Observable;
use crate::rational::Rational;
use crate::shift::SymbolicSystem;
use crate::spectra::{Certificate, SpectrumResult};
use crate::thermo::{average_range, constrained_value_with, pressure, ConstrainedValue, DualOptions};

const RESIDUAL_TOL: f64 = 1e-8;

/// A strictly positive roof function.
#[derive(Debug, Clone, PartialEq)]
pub struct RoofFunction(Observable);

impl RoofFunction {
    pub fn new(f: Observable) -> Result<Self> {
        if f.min_value() <= Rational::from_integer(0) {
            return Err(Error::InvalidInput(format!(
                "roof function must be positive, minimum is {}",
                f.min_value()
            )));
        }
        Ok(Self(f))
    }

    pub fn observable(&self) -> &Observable {
        &self.0
    }

    pub fn min_value(&self) -> Rational {
        self.0.min_value()
    }
}

/// `h(m) / integral roof dm`.
pub fn abramov_entropy(m: &MarkovMixtureMeasure, roof: &RoofFunction) -> Result<f64> {
    Ok(markov_entropy(m) / integrate(m, roof.observable())?)
}

/// Flow entropy of the flow level set with liminf `c` and limsup `d`.
pub fn suspension_level_value(
    sys: &SymbolicSystem,
    phi: &Observable,
    roof: &RoofFunction,
    c: Rational,
    d: Rational,
) -> Result<SpectrumResult> {
    if c > d {
        return Err(Error::InvalidInput(format!(
            "level bounds out of order: c = {c} > d = {d}"
        )));
    }
    let mut certs = Vec::new();
    for xi in if c == d { vec![c] } else { vec![c, d] } {
        let g = phi.sub(&roof.observable().scale(xi)?)?;
        if !average_range(sys, &g)?.contains(Rational::from_integer(0)) {
            return Ok(SpectrumResult::empty());
        }
        let root = flow_root(sys, &g, roof)?;
        certs.push(Certificate {
            xi,
            value: root.h,
            q: root.at_root.q,
            equilibrium: root.at_root.equilibrium,
            converged: root.at_root.converged,
        });
    }
    let mut it = certs.into_iter();
    let first = it.next().expect("at least one endpoint");
    Ok(SpectrumResult::from_endpoints(first, it.next()))
}

/// Root of the flow pressure equation with its certificate.
#[derive(Debug, Clone)]
pub struct FlowRoot {
    pub h: f64,
    /// `V(h)`, the constrained pressure at the returned root.
    pub residual: f64,
    pub iterations: usize,
    pub at_root: ConstrainedValue,
}

/// `V(h) = sup { h(mu) - h integral rho : integral g = 0 }`.
pub fn flow_pressure(sys: &SymbolicSystem, g: &Observable, roof: &RoofFunction, h: f64) -> Result<ConstrainedValue> {
    constrained_value_with(
        sys,
        &[(g.clone(), Rational::from_integer(0))],
        roof.observable(),
        -h,
        &DualOptions::default(),
    )
}

/// Solves `V(h) = 0` by bisection on `[0, h_top / min rho + 1]`, taking the
/// Newton step `V / integral rho d mu_h` whenever it stays in the bracket.
pub fn flow_root(sys: &SymbolicSystem, g: &Observable, roof: &RoofFunction) -> Result<FlowRoot> {
    let at_zero = flow_pressure(sys, g, roof, 0.0)?;
    if at_zero.value.abs() <= 1e-15 {
        return Ok(FlowRoot {
            h: 0.0,
            residual: at_zero.value,
            iterations: 0,
            at_root: at_zero,
        });
    }
    let h_top = pressure(sys, &Observable::zero(sys)?)?;
    let (mut lo, mut hi) = (0.0, h_top / crate::rational::to_f64(roof.min_value()) + 1.0);
    let at_hi = flow_pressure(sys, g, roof, hi)?;
    if !(at_zero.value > 0.0 && at_hi.value < 0.0) {
        return Err(Error::BisectionBracketFailure { lo, hi });
    }
    let mut cur = (0.0, at_zero);
    for it in 1..=200 {
        let (h, v) = (&cur.0, &cur.1);
        let slope = integrate(&v.equilibrium, roof.observable())?;
        let newton = h + v.value / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let val = flow_pressure(sys, g, roof, next)?;
        if val.value > 0.0 {
            lo = next;
        } else {
            hi = next;
        }
        cur = (next, val);
        if cur.1.value.abs() <= 1e-13 || hi - lo <= 1e-15 * hi.max(1.0) {
            return finish(cur, it);
        }
    }
    finish(cur, 200)
}

fn finish((h, v): (f64, ConstrainedValue), iterations: usize) -> Result<FlowRoot> {
    if v.value.abs() > RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            what: format!("flow pressure root (residual {:.3e})", v.value),
            iterations,
        });
    }
    Ok(FlowRoot {
        h,
        residual: v.value,
        iterations,
        at_root: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MarkovMeasure;
    use crate::spectra::{level_set_value, LevelSetQuery};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn abramov_examples() {
        let full = SymbolicSystem::full(2).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let one = Observable::constant(&full, r(1, 1)).unwrap();
        let b: MarkovMixtureMeasure = MarkovMeasure::bernoulli(&full, &[0.5, 0.5]).unwrap().into();
        let unit = RoofFunction::new(one.clone()).unwrap();
        assert_eq!(abramov_entropy(&b, &unit).unwrap(), markov_entropy(&b));
        let roof = RoofFunction::new(one.add(&ones).unwrap()).unwrap();
        assert!((abramov_entropy(&b, &roof).unwrap() - 2f64.ln() / 1.5).abs() < 1e-15);
        let cyc: MarkovMixtureMeasure = MarkovMeasure::periodic_orbit(&full, &[0]).unwrap().into();
        assert_eq!(abramov_entropy(&cyc, &roof).unwrap(), 0.0);
        assert!(RoofFunction::new(ones).is_err());
    }

    #[test]
    fn flow_examples() {
        let full = SymbolicSystem::full(2).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let one = Observable::constant(&full, r(1, 1)).unwrap();
        let roof = RoofFunction::new(one.add(&ones).unwrap()).unwrap();
        let v = suspension_level_value(&full, &ones, &roof, r(1, 3), r(1, 3)).unwrap();
        assert!((v.value.unwrap() - 2f64.ln() / 1.5).abs() < 1e-9);
        let cert = &v.certificates[0];
        assert!((abramov_entropy(&cert.equilibrium, &roof).unwrap() - cert.value).abs() < 1e-8);
        let v = suspension_level_value(&full, &ones, &roof, r(0, 1), r(0, 1)).unwrap();
        assert_eq!(v.value, Some(0.0));
        let v = suspension_level_value(&full, &ones, &roof, r(3, 5), r(3, 5)).unwrap();
        assert!(v.empty);

        let unit = RoofFunction::new(one).unwrap();
        let flow = suspension_level_value(&full, &ones, &unit, r(1, 4), r(1, 2)).unwrap();
        let q = LevelSetQuery::new(ones, r(1, 4), r(1, 2), Observable::zero(&full).unwrap());
        let map = level_set_value(&full, &q).unwrap();
        assert!((flow.value.unwrap() - map.value.unwrap()).abs() < 1e-9);
    }
}
