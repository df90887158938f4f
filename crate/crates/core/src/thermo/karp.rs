//! Karp's minimum mean cycle on strongly connected subgraphs, exactly on
//! integer weights and approximately on floats, plus the critical subgraph of
//! extreme-mean cycles.

use std::cmp::Ordering;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

/// A fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num_integer::gcd(num, den).max(1);
        Frac {
            num: num / g,
            den: den / g,
        }
    }

    pub fn negated(self) -> Self {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Strongly connected components of `mask` (an `n x n` edge table) that
/// contain at least one cycle, with nodes sorted.
pub fn cyclic_components(n: usize, mask: &[bool]) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::with_capacity(n, mask.iter().filter(|&&b| b).count());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if mask[i * n + j] {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|v| v.index()).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| c.len() > 1 || mask[c[0] * n + c[0]])
        .collect();
    comps.sort();
    comps
}

/// Keeps only edges inside the given components.
pub fn restrict_mask(n: usize, mask: &[bool], comps: &[Vec<usize>]) -> Vec<bool> {
    let mut comp_of = vec![usize::MAX; n];
    for (c, nodes) in comps.iter().enumerate() {
        for &v in nodes {
            comp_of[v] = c;
        }
    }
    (0..n * n)
        .map(|e| mask[e] && comp_of[e / n] != usize::MAX && comp_of[e / n] == comp_of[e % n])
        .collect()
}

/// Minimum mean edge weight over cycles inside the strongly connected node
/// set `nodes`.
pub fn min_mean_exact(n: usize, mask: &[bool], weights: &[i64], nodes: &[usize]) -> Frac {
    let k = nodes.len();
    let edges = component_edges(n, mask, nodes);
    // d[t][v]: lightest walk of exactly t edges from nodes[0] to local node v
    let mut d = vec![vec![None::<i128>; k]; k + 1];
    d[0][0] = Some(0);
    for t in 1..=k {
        for &(u, v, e) in &edges {
            if let Some(du) = d[t - 1][u] {
                let cand = du + weights[e] as i128;
                if d[t][v].is_none_or(|dv| cand < dv) {
                    d[t][v] = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Frac> = None;
    for v in 0..k {
        let Some(dn) = d[k][v] else { continue };
        let worst = (0..k)
            .filter_map(|t| d[t][v].map(|dt| Frac::new(dn - dt, (k - t) as i128)))
            .max();
        if let Some(w) = worst {
            if best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
    }
    best.expect("strongly connected components with a cycle have a mean")
}

pub fn max_mean_exact(n: usize, mask: &[bool], weights: &[i64], nodes: &[usize]) -> Frac {
    let neg: Vec<i64> = weights.iter().map(|w| -w).collect();
    min_mean_exact(n, mask, &neg, nodes).negated()
}

/// Floating-point variant of [`min_mean_exact`].
pub fn min_mean_f64(n: usize, mask: &[bool], weights: &[f64], nodes: &[usize]) -> f64 {
    let k = nodes.len();
    let edges = component_edges(n, mask, nodes);
    let mut d = vec![vec![f64::INFINITY; k]; k + 1];
    d[0][0] = 0.0;
    for t in 1..=k {
        for &(u, v, e) in &edges {
            let cand = d[t - 1][u] + weights[e];
            if cand < d[t][v] {
                d[t][v] = cand;
            }
        }
    }
    let mut best = f64::INFINITY;
    for v in 0..k {
        if !d[k][v].is_finite() {
            continue;
        }
        let worst = (0..k)
            .filter(|&t| d[t][v].is_finite())
            .map(|t| (d[k][v] - d[t][v]) / (k - t) as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        best = best.min(worst);
    }
    best
}

pub fn max_mean_f64(n: usize, mask: &[bool], weights: &[f64], nodes: &[usize]) -> f64 {
    let neg: Vec<f64> = weights.iter().map(|w| -w).collect();
    -min_mean_f64(n, mask, &neg, nodes)
}

/// `(local u, local v, global edge index)` for edges inside `nodes`.
fn component_edges(n: usize, mask: &[bool], nodes: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut local = vec![usize::MAX; n];
    for (i, &v) in nodes.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    for &u in nodes {
        for &v in nodes {
            if mask[u * n + v] {
                edges.push((local[u], local[v], u * n + v));
            }
        }
    }
    edges
}

/// Edges of `nodes` lying on cycles of mean exactly `mean` (the minimum
/// mean of the component), found as tight edges under exact potentials.
pub fn min_critical_edges(n: usize, mask: &[bool], weights: &[i64], nodes: &[usize], mean: Frac) -> Vec<bool> {
    let edges = component_edges(n, mask, nodes);
    let reduced = |e: usize| weights[e] as i128 * mean.den - mean.num;
    let k = nodes.len();
    // No negative cycles under reduced weights, so k rounds settle.
    let mut pot = vec![0i128; k];
    for _ in 0..k {
        let mut changed = false;
        for &(u, v, e) in &edges {
            let cand = pot[u] + reduced(e);
            if cand < pot[v] {
                pot[v] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut tight = vec![false; n * n];
    for &(u, v, e) in &edges {
        if pot[u] + reduced(e) == pot[v] {
            tight[e] = true;
        }
    }
    let comps = cyclic_components(n, &tight);
    restrict_mask(n, &tight, &comps)
}

pub fn max_critical_edges(n: usize, mask: &[bool], weights: &[i64], nodes: &[usize], mean: Frac) -> Vec<bool> {
    let neg: Vec<i64> = weights.iter().map(|w| -w).collect();
    min_critical_edges(n, mask, &neg, nodes, mean.negated())
}
