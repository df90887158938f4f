//! Constrained maximization of `h(mu) + integral psi d mu` subject to
//! `integral phi_i d mu = a_i`, through the convex dual
//! `inf_q [P(psi + sum q_i phi_i) - q.a]`.
//!
//! Targets on the boundary of a constraint's range are resolved exactly
//! first: the feasible measures are then those carried by the critical
//! subgraph of extreme-mean cycles, so the constraint is dropped and the
//! problem continues on that subgraph. When the subgraph splits into several
//! components the pressure is the maximum over components, and the dual is
//! smoothed with a log-sum-exp whose temperature is driven to zero.

use crate::error::{Error, Result};
use crate::measure::{MarkovMeasure, MarkovMixtureMeasure};
use crate::observable::Observable;
use crate::rational::Rational;
use crate::shift::SymbolicSystem;

use super::karp::{self, Frac};
use super::perron::perron_log;
use super::{edge_table, scaled_target, EdgeTable};

pub const MAX_CONSTRAINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualOptions {
    /// Dual vectors longer than this signal an infeasible or boundary target.
    pub q_max: f64,
    /// Dual values below this signal divergence.
    pub floor: f64,
    pub grad_tol: f64,
    pub max_iter: usize,
}

impl Default for DualOptions {
    fn default() -> Self {
        Self {
            q_max: 50.0,
            floor: -1e6,
            grad_tol: 1e-9,
            max_iter: 200,
        }
    }
}

/// Result of a constrained maximization.
///
/// On a split critical subgraph `value` is the dual bound at the final
/// smoothing temperature; `converged` then also requires the mixture
/// certificate to come within 1e-8 of it.
#[derive(Debug, Clone)]
pub struct ConstrainedValue {
    pub value: f64,
    /// One dual variable per input constraint. Constraints resolved on the
    /// boundary report `-inf` (minimum) or `+inf` (maximum); degenerate ones 0.
    pub q: Vec<f64>,
    pub equilibrium: MarkovMixtureMeasure,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Whether the problem was moved to a critical subgraph.
    pub restricted: bool,
}

/// `sup { h(mu) + integral objective d mu : integral phi_i d mu = a_i }`.
pub fn constrained_value(
    sys: &SymbolicSystem,
    constraints: &[(Observable, Rational)],
    objective: &Observable,
) -> Result<ConstrainedValue> {
    constrained_value_with(sys, constraints, objective, 1.0, &DualOptions::default())
}

/// As [`constrained_value`] with the objective multiplied by
/// `objective_scale`.
pub fn constrained_value_with(
    sys: &SymbolicSystem,
    constraints: &[(Observable, Rational)],
    objective: &Observable,
    objective_scale: f64,
    opts: &DualOptions,
) -> Result<ConstrainedValue> {
    sys.require_markov("constrained values need a transition matrix")?;
    if constraints.len() > MAX_CONSTRAINTS {
        return Err(Error::InvalidInput(format!(
            "at most {MAX_CONSTRAINTS} constraints are supported"
        )));
    }
    if !objective_scale.is_finite() {
        return Err(Error::InvalidInput("objective scale must be finite".into()));
    }
    let obj = edge_table(sys, objective)?;
    let cons = constraints
        .iter()
        .map(|(f, a)| {
            Ok(Con {
                table: edge_table(sys, f)?,
                target: *a,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = sys.alphabet_size();
    let ctx = Ctx {
        sys,
        n,
        objective: obj.values.iter().map(|v| v * objective_scale).collect(),
        cons: &cons,
        opts,
    };
    let mut q = vec![0.0; cons.len()];
    let active: Vec<usize> = (0..cons.len()).collect();
    ctx.solve(sys.adjacency().to_vec(), active, &mut q, false)
}

struct Con {
    table: EdgeTable,
    target: Rational,
}

struct Ctx<'a> {
    sys: &'a SymbolicSystem,
    n: usize,
    objective: Vec<f64>,
    cons: &'a [Con],
    opts: &'a DualOptions,
}

/// Pressure data of one strongly connected component at a dual point.
struct CompEval {
    pressure: f64,
    /// `integral phi_i d mu` over active constraints.
    integrals: Vec<f64>,
    /// Edge frequencies on the whole alphabet.
    x: Vec<f64>,
}

impl<'a> Ctx<'a> {
    fn solve(
        &self,
        mask: Vec<bool>,
        mut active: Vec<usize>,
        q: &mut [f64],
        mut restricted: bool,
    ) -> Result<ConstrainedValue> {
        let n = self.n;
        let comps = karp::cyclic_components(n, &mask);
        if comps.is_empty() {
            return Err(Error::Infeasible(
                "no invariant measure satisfies the constraints".into(),
            ));
        }
        let mask = karp::restrict_mask(n, &mask, &comps);

        for pos in 0..active.len() {
            let ci = active[pos];
            let c = &self.cons[ci];
            let w = &c.table.scaled;
            let mins: Vec<Frac> = comps
                .iter()
                .map(|nodes| karp::min_mean_exact(n, &mask, w, nodes))
                .collect();
            let maxs: Vec<Frac> = comps
                .iter()
                .map(|nodes| karp::max_mean_exact(n, &mask, w, nodes))
                .collect();
            let lo = *mins.iter().min().expect("non-empty");
            let hi = *maxs.iter().max().expect("non-empty");
            let a = scaled_target(c.target, c.table.denom);
            if a < lo || a > hi {
                return Err(Error::Infeasible(format!(
                    "target {} of constraint {ci} lies outside its achievable range",
                    c.target
                )));
            }
            if lo == hi {
                // Cohomologous to a constant on what is left, and a equals it.
                q[ci] = 0.0;
                active.remove(pos);
                return self.solve(mask, active, q, restricted);
            }
            if a == lo || a == hi {
                let mut next = vec![false; n * n];
                for (k, nodes) in comps.iter().enumerate() {
                    let crit = if a == lo {
                        (mins[k] == lo).then(|| karp::min_critical_edges(n, &mask, w, nodes, lo))
                    } else {
                        (maxs[k] == hi).then(|| karp::max_critical_edges(n, &mask, w, nodes, hi))
                    };
                    if let Some(crit) = crit {
                        next.iter_mut().zip(crit).for_each(|(e, c)| *e |= c);
                    }
                }
                q[ci] = if a == lo { f64::NEG_INFINITY } else { f64::INFINITY };
                active.remove(pos);
                restricted = true;
                return self.solve(next, active, q, restricted);
            }
        }

        if active.is_empty() {
            let evals = comps
                .iter()
                .map(|nodes| self.eval_component(&mask, nodes, &active, q))
                .collect::<Result<Vec<_>>>()?;
            let best = (0..evals.len())
                .max_by(|&i, &j| evals[i].pressure.total_cmp(&evals[j].pressure))
                .expect("non-empty");
            return Ok(ConstrainedValue {
                value: evals[best].pressure,
                q: q.to_vec(),
                equilibrium: MarkovMeasure::from_edge_frequencies(self.sys, &evals[best].x)?.into(),
                gradient_norm: 0.0,
                iterations: 0,
                converged: true,
                restricted,
            });
        }

        if comps.len() == 1 {
            self.newton_single(&mask, &comps[0], &active, q, restricted)
        } else {
            self.smoothed(&mask, &comps, &active, q, restricted)
        }
    }

    fn targets(&self, active: &[usize]) -> Vec<f64> {
        active
            .iter()
            .map(|&i| crate::rational::to_f64(self.cons[i].target))
            .collect()
    }

    /// Perron data on one component with dual variables `q` (indexed like
    /// the full constraint list; only `active` entries are used).
    fn eval_component(&self, mask: &[bool], nodes: &[usize], active: &[usize], q: &[f64]) -> Result<CompEval> {
        let n = self.n;
        let k = nodes.len();
        let mut logw = vec![f64::NEG_INFINITY; k * k];
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate() {
                let e = u * n + v;
                if mask[e] {
                    logw[a * k + b] =
                        self.objective[e] + active.iter().map(|&i| q[i] * self.cons[i].table.values[e]).sum::<f64>();
                }
            }
        }
        let p = perron_log(k, &logw)?;
        let local = p.edge_frequencies();
        let mut x = vec![0.0; n * n];
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate() {
                x[u * n + v] = local[a * k + b];
            }
        }
        let integrals = active
            .iter()
            .map(|&i| {
                let vals = &self.cons[i].table.values;
                x.iter()
                    .zip(vals)
                    .filter(|(xe, _)| **xe > 0.0)
                    .map(|(xe, v)| xe * v)
                    .sum()
            })
            .collect();
        Ok(CompEval {
            pressure: p.ln_lambda,
            integrals,
            x,
        })
    }

    fn embed(&self, q: &[f64], active: &[usize], z: &[f64]) -> Vec<f64> {
        let mut full = q.to_vec();
        for (k, &i) in active.iter().enumerate() {
            full[i] = z[k];
        }
        full
    }

    /// Central-difference Jacobian of the component integrals.
    fn component_hessian(
        &self,
        mask: &[bool],
        nodes: &[usize],
        active: &[usize],
        q: &[f64],
        z: &[f64],
    ) -> Result<Vec<f64>> {
        let m = z.len();
        let h = 1e-5;
        let mut hess = vec![0.0; m * m];
        for j in 0..m {
            let mut zp = z.to_vec();
            let mut zm = z.to_vec();
            zp[j] += h;
            zm[j] -= h;
            let gp = self
                .eval_component(mask, nodes, active, &self.embed(q, active, &zp))?
                .integrals;
            let gm = self
                .eval_component(mask, nodes, active, &self.embed(q, active, &zm))?
                .integrals;
            for i in 0..m {
                hess[i * m + j] = (gp[i] - gm[i]) / (2.0 * h);
            }
        }
        symmetrize(&mut hess, m);
        Ok(hess)
    }

    fn newton_single(
        &self,
        mask: &[bool],
        nodes: &[usize],
        active: &[usize],
        q: &mut [f64],
        restricted: bool,
    ) -> Result<ConstrainedValue> {
        let a = self.targets(active);
        let m = active.len();
        let value_grad = |z: &[f64]| -> Result<(f64, Vec<f64>)> {
            let e = self.eval_component(mask, nodes, active, &self.embed(q, active, z))?;
            let f = e.pressure - z.iter().zip(&a).map(|(zi, ai)| zi * ai).sum::<f64>();
            let g = e.integrals.iter().zip(&a).map(|(v, ai)| v - ai).collect();
            Ok((f, g))
        };
        let hessian = |z: &[f64]| self.component_hessian(mask, nodes, active, q, z);
        let res = minimize(&vec![0.0; m], value_grad, hessian, self.opts)?;
        let full = self.embed(q, active, &res.z);
        let e = self.eval_component(mask, nodes, active, &full)?;
        q.copy_from_slice(&full);
        Ok(ConstrainedValue {
            value: res.f,
            q: full,
            equilibrium: MarkovMeasure::from_edge_frequencies(self.sys, &e.x)?.into(),
            gradient_norm: res.grad_norm,
            iterations: res.iterations,
            converged: res.converged,
            restricted,
        })
    }

    fn smoothed(
        &self,
        mask: &[bool],
        comps: &[Vec<usize>],
        active: &[usize],
        q: &mut [f64],
        restricted: bool,
    ) -> Result<ConstrainedValue> {
        let a = self.targets(active);
        let m = active.len();
        let evals = |z: &[f64]| -> Result<Vec<CompEval>> {
            let full = self.embed(q, active, z);
            comps
                .iter()
                .map(|nodes| self.eval_component(mask, nodes, active, &full))
                .collect()
        };
        let softmax = |es: &[CompEval], tau: f64| -> (f64, Vec<f64>) {
            let pmax = es.iter().map(|e| e.pressure).fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = es.iter().map(|e| ((e.pressure - pmax) / tau).exp()).collect();
            let s: f64 = w.iter().sum();
            (pmax + tau * s.ln(), w.into_iter().map(|x| x / s).collect())
        };
        let mut z = vec![0.0; m];
        let mut total_iters = 0;
        let mut last = None;
        let mut tau = 1e-1;
        while tau >= 1e-10 {
            let value_grad = |z: &[f64]| -> Result<(f64, Vec<f64>)> {
                let es = evals(z)?;
                let (lse, w) = softmax(&es, tau);
                let f = lse - z.iter().zip(&a).map(|(zi, ai)| zi * ai).sum::<f64>();
                let g = (0..m)
                    .map(|i| es.iter().zip(&w).map(|(e, wc)| wc * e.integrals[i]).sum::<f64>() - a[i])
                    .collect();
                Ok((f, g))
            };
            let hessian = |z: &[f64]| -> Result<Vec<f64>> {
                let es = evals(z)?;
                let (_, w) = softmax(&es, tau);
                let full = self.embed(q, active, z);
                let mut hess = vec![0.0; m * m];
                let mut mean = vec![0.0; m];
                for (c, nodes) in comps.iter().enumerate() {
                    if w[c] < 1e-300 {
                        continue;
                    }
                    let hc = self.component_hessian(mask, nodes, active, &full, z)?;
                    let gc = &es[c].integrals;
                    for i in 0..m {
                        mean[i] += w[c] * gc[i];
                        for j in 0..m {
                            hess[i * m + j] += w[c] * (hc[i * m + j] + gc[i] * gc[j] / tau);
                        }
                    }
                }
                for i in 0..m {
                    for j in 0..m {
                        hess[i * m + j] -= mean[i] * mean[j] / tau;
                    }
                }
                symmetrize(&mut hess, m);
                Ok(hess)
            };
            // Pressure differences are resolved to about 1e-15, so weights
            // (and the gradient) carry noise of order 1e-15 / tau.
            let stage = DualOptions {
                grad_tol: self.opts.grad_tol.max(1e-15 / tau),
                ..*self.opts
            };
            let res = minimize(&z, value_grad, hessian, &stage)?;
            total_iters += res.iterations;
            z = res.z.clone();
            last = Some(res);
            tau *= 0.1;
        }
        let res = last.expect("at least one temperature");
        let es = evals(&z)?;
        let (_, w) = softmax(&es, 1e-10);
        let w = repair_weights(&es, w, &a);
        let dual = es.iter().map(|e| e.pressure).fold(f64::NEG_INFINITY, f64::max)
            - z.iter().zip(&a).map(|(zi, ai)| zi * ai).sum::<f64>();
        // Primal certificate: the softmax mixture of component equilibria.
        let primal: f64 = es
            .iter()
            .zip(&w)
            .map(|(e, wc)| wc * (e.pressure - z.iter().zip(&e.integrals).map(|(zi, gi)| zi * gi).sum::<f64>()))
            .sum();
        let mut parts = Vec::new();
        for (e, &wc) in es.iter().zip(&w) {
            if wc > 0.0 {
                parts.push((wc, MarkovMeasure::from_edge_frequencies(self.sys, &e.x)?));
            }
        }
        let s: f64 = parts.iter().map(|p| p.0).sum();
        parts.iter_mut().for_each(|p| p.0 /= s);
        let full = self.embed(q, active, &z);
        q.copy_from_slice(&full);
        Ok(ConstrainedValue {
            value: dual,
            q: full,
            equilibrium: MarkovMixtureMeasure::new(parts)?,
            gradient_norm: res.grad_norm,
            iterations: total_iters,
            converged: res.converged && (dual - primal).abs() <= 1e-8,
            restricted,
        })
    }
}

/// Smallest change to the mixture weights `w` that meets the constraints
/// exactly (`sum t_c g_c = a`, `sum t_c = 1`); keeps `w` if the correction
/// would turn a weight negative.
fn repair_weights(es: &[CompEval], w: Vec<f64>, a: &[f64]) -> Vec<f64> {
    let k = es.len();
    let m = a.len() + 1;
    let row = |i: usize, c: usize| if i < a.len() { es[c].integrals[i] } else { 1.0 };
    let target = |i: usize| if i < a.len() { a[i] } else { 1.0 };
    let resid: Vec<f64> = (0..m)
        .map(|i| target(i) - (0..k).map(|c| row(i, c) * w[c]).sum::<f64>())
        .collect();
    let mut aat = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            aat[i * m + j] = (0..k).map(|c| row(i, c) * row(j, c)).sum();
        }
    }
    let neg: Vec<f64> = resid.iter().map(|r| -r).collect();
    let y = damped_newton_step(&aat, &neg);
    let t: Vec<f64> = (0..k)
        .map(|c| w[c] + (0..m).map(|i| row(i, c) * y[i]).sum::<f64>())
        .collect();
    if t.iter().all(|&x| x >= 0.0) {
        let s: f64 = t.iter().sum();
        t.into_iter().map(|x| x / s).collect()
    } else {
        w
    }
}

fn symmetrize(h: &mut [f64], m: usize) {
    for i in 0..m {
        for j in 0..i {
            let s = 0.5 * (h[i * m + j] + h[j * m + i]);
            h[i * m + j] = s;
            h[j * m + i] = s;
        }
    }
}

struct MinResult {
    z: Vec<f64>,
    f: f64,
    grad_norm: f64,
    iterations: usize,
    converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `(H + lambda I) d = -g` by Cholesky, raising `lambda` until the
/// factorization succeeds.
fn damped_newton_step(h: &[f64], g: &[f64]) -> Vec<f64> {
    let m = g.len();
    let scale = (0..m).map(|i| h[i * m + i].abs()).fold(0.0, f64::max).max(1e-300);
    let mut lambda = 0.0;
    loop {
        if let Some(d) = cholesky_solve(h, g, m, lambda) {
            return d;
        }
        lambda = if lambda == 0.0 { 1e-12 * scale } else { lambda * 10.0 };
    }
}

fn cholesky_solve(h: &[f64], g: &[f64], m: usize, lambda: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = h[i * m + j] + if i == j { lambda } else { 0.0 };
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * m + i] = s.sqrt();
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    let mut y = vec![0.0; m];
    for i in 0..m {
        y[i] = (-g[i] - (0..i).map(|k| l[i * m + k] * y[k]).sum::<f64>()) / l[i * m + i];
    }
    let mut d = vec![0.0; m];
    for i in (0..m).rev() {
        d[i] = (y[i] - (i + 1..m).map(|k| l[k * m + i] * d[k]).sum::<f64>()) / l[i * m + i];
    }
    d.iter().all(|x| x.is_finite()).then_some(d)
}

/// Damped Newton with backtracking, falling back to a gradient step.
fn minimize(
    z0: &[f64],
    value_grad: impl Fn(&[f64]) -> Result<(f64, Vec<f64>)>,
    hessian: impl Fn(&[f64]) -> Result<Vec<f64>>,
    opts: &DualOptions,
) -> Result<MinResult> {
    let mut z = z0.to_vec();
    let (mut f, mut g) = value_grad(&z)?;
    let mut iterations = 0;
    let mut converged = false;
    let infeasible = |z: &[f64], f: f64| norm(z) > opts.q_max || f < opts.floor;
    while iterations < opts.max_iter {
        if norm(&g) <= opts.grad_tol {
            converged = true;
            break;
        }
        if infeasible(&z, f) {
            return Err(Error::Infeasible(format!(
                "dual diverges (|q| = {:.3e}, value {f:.6e})",
                norm(&z)
            )));
        }
        iterations += 1;
        let h = hessian(&z)?;
        let m = z.len();
        let newton = damped_newton_step(&h, &g);
        let lip = (0..m).map(|i| h[i * m + i].abs()).fold(0.0, f64::max).max(1e-12);
        let gradient: Vec<f64> = g.iter().map(|x| -x / lip).collect();
        let mut accepted = false;
        for dir in [newton, gradient] {
            let slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
            let mut t = 1.0;
            for _ in 0..60 {
                let trial: Vec<f64> = z.iter().zip(&dir).map(|(zi, di)| zi + t * di).collect();
                if let Ok((ft, gt)) = value_grad(&trial) {
                    let armijo = ft <= f + 1e-4 * t * slope;
                    // Near the optimum the decrease drowns in rounding; accept
                    // steps that shrink the gradient without raising the value.
                    let flat = ft <= f + 1e-13 * (1.0 + f.abs()) && norm(&gt) <= 0.5 * norm(&g);
                    if armijo || flat {
                        z = trial;
                        f = ft;
                        g = gt;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if accepted {
                break;
            }
        }
        if !accepted {
            break;
        }
    }
    if !converged && norm(&g) <= opts.grad_tol {
        converged = true;
    }
    if !converged && infeasible(&z, f) {
        return Err(Error::Infeasible(format!("dual diverges (|q| = {:.3e})", norm(&z))));
    }
    if !converged && norm(&g) > 1e-6 {
        return Err(Error::NoConvergence {
            what: format!("dual minimization (gradient norm {:.3e})", norm(&g)),
            iterations,
        });
    }
    Ok(MinResult {
        grad_norm: norm(&g),
        z,
        f,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{integrate, markov_entropy};

    fn h(a: f64) -> f64 {
        -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn closed_forms() {
        let full = SymbolicSystem::full(2).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let zero = Observable::zero(&full).unwrap();
        let v = constrained_value(&full, &[(ones.clone(), r(1, 2))], &zero).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-12);
        let v = constrained_value(&full, &[(ones.clone(), r(1, 4))], &zero).unwrap();
        assert!((v.value - h(0.25)).abs() < 1e-10);
        assert!((v.q[0] - (1f64 / 3.0).ln()).abs() < 1e-6);
        let v = constrained_value(&full, &[(ones.clone(), r(1, 2))], &ones).unwrap();
        assert!((v.value - (2f64.ln() + 0.5)).abs() < 1e-10);
    }

    #[test]
    fn two_constraints_pin_the_measure() {
        let full = SymbolicSystem::full(2).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let pair = Observable::word_indicator(&full, &[1, 1]).unwrap();
        let zero = Observable::zero(&full).unwrap();
        let v = constrained_value(&full, &[(ones, r(2, 5)), (pair, r(4, 25))], &zero).unwrap();
        let expect = h(0.4);
        assert!((v.value - expect).abs() < 1e-9, "{}", v.value);
    }

    #[test]
    fn boundary_and_degenerate() {
        let full = SymbolicSystem::full(2).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let zero = Observable::zero(&full).unwrap();
        let v = constrained_value(&full, &[(ones.clone(), r(0, 1))], &zero).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(v.restricted);
        assert_eq!(v.q[0], f64::NEG_INFINITY);
        assert!(matches!(
            constrained_value(&full, &[(ones.clone(), r(3, 2))], &zero),
            Err(Error::Infeasible(_))
        ));
        let one = Observable::constant(&full, r(1, 1)).unwrap();
        let v = constrained_value(&full, &[(one.clone(), r(1, 1))], &zero).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-13);
        assert!(matches!(
            constrained_value(&full, &[(one, r(1, 2))], &zero),
            Err(Error::Infeasible(_))
        ));
        // Contradictory pair: the dual diverges.
        assert!(matches!(
            constrained_value(&full, &[(ones.clone(), r(1, 2)), (ones, r(3, 10))], &zero),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn golden_boundary_uses_cycle() {
        let gm = SymbolicSystem::golden_mean();
        let ones = Observable::symbol_indicator(&gm, 1).unwrap();
        let v = constrained_value(&gm, &[(ones.clone(), r(1, 2))], &Observable::zero(&gm).unwrap()).unwrap();
        assert!(v.value.abs() < 1e-14);
        assert!((integrate(&v.equilibrium, &ones).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn split_critical_subgraph() {
        // Changing symbols is free only on the two self-loops, so the
        // boundary leaves two components; the mixture 0.7 d_0 + 0.3 d_1
        // is the only feasible measure and the objective rewards ones.
        let full = SymbolicSystem::full(2).unwrap();
        let change = Observable::from_entries(&full, 2, [(vec![0u16, 1], r(1, 1)), (vec![1u16, 0], r(1, 1))]).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let v = constrained_value(&full, &[(change, r(0, 1)), (ones.clone(), r(3, 10))], &ones).unwrap();
        assert!((v.value - 0.3).abs() < 1e-8, "{}", v.value);
        assert!(v.converged, "{v:?}");
        assert!((integrate(&v.equilibrium, &ones).unwrap() - 0.3).abs() < 1e-8);
        assert!(markov_entropy(&v.equilibrium).abs() < 1e-12);
    }
}
