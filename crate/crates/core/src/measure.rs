//! Stationary Markov measures, finite mixtures of them, empirical measures of
//! words, and a fixed weak* distance between cylinder-frequency vectors.
//!
//! Entropy is in nats throughout.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::observable::{word_code, Observable};
use crate::rational::to_f64;
use crate::shift::{Symbol, SymbolicSystem};

const ROW_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-10;
const WEIGHT_TOL: f64 = 1e-12;
/// Looser tolerance for edge-frequency input produced by floating-point solvers.
const EDGE_TOL: f64 = 1e-9;

/// A stationary Markov measure: a row-stochastic matrix on the allowed
/// transitions and a stationary vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    n: usize,
    p: Vec<f64>,
    pi: Vec<f64>,
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

impl MarkovMeasure {
    /// Validates `p` (row-major) against the system. Without `stationary`
    /// the stationary vector is the Cesàro limit of the lazy chain started
    /// from the uniform vector.
    pub fn new(sys: &SymbolicSystem, p: Vec<f64>, stationary: Option<Vec<f64>>) -> Result<Self> {
        sys.require_markov("Markov measures need a transition matrix")?;
        let n = sys.alphabet_size();
        if p.len() != n * n {
            return Err(Error::InvalidMeasure(format!(
                "expected {} transition probabilities, got {}",
                n * n,
                p.len()
            )));
        }
        for i in 0..n {
            let row = &p[i * n..(i + 1) * n];
            if row.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidMeasure(format!(
                    "row {i} has a negative or non-finite entry"
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(Error::InvalidMeasure(format!("row {i} sums to {s}")));
            }
            if let Some(j) = (0..n).find(|&j| row[j] > 0.0 && !sys.allows(i, j)) {
                return Err(Error::InvalidMeasure(format!(
                    "positive probability on forbidden transition {i} -> {j}"
                )));
            }
        }
        let pi = match stationary {
            Some(pi) => {
                if pi.len() != n || pi.iter().any(|&x| !(x >= 0.0)) {
                    return Err(Error::InvalidMeasure("bad stationary vector".into()));
                }
                if (pi.iter().sum::<f64>() - 1.0).abs() > ROW_TOL {
                    return Err(Error::InvalidMeasure("stationary vector does not sum to 1".into()));
                }
                pi
            }
            None => stationary_of(&p, n)?,
        };
        let m = Self { n, p, pi };
        let residual = m.stationarity_residual();
        if residual > STATIONARY_TOL {
            return Err(Error::InvalidMeasure(format!(
                "stationary vector violates pi P = pi by {residual:e}"
            )));
        }
        Ok(m)
    }

    /// Builds the measure with the given edge frequencies `x_ij` (row-major,
    /// summing to 1, equal row and column sums). Rows of zero mass get the
    /// uniform distribution over allowed successors.
    pub fn from_edge_frequencies(sys: &SymbolicSystem, x: &[f64]) -> Result<Self> {
        sys.require_markov("Markov measures need a transition matrix")?;
        let n = sys.alphabet_size();
        if x.len() != n * n {
            return Err(Error::InvalidMeasure("edge frequency table has the wrong size".into()));
        }
        if x.iter().any(|&v| !(v >= -EDGE_TOL)) {
            return Err(Error::InvalidMeasure("negative edge frequency".into()));
        }
        let x: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = x.iter().sum();
        if (total - 1.0).abs() > EDGE_TOL {
            return Err(Error::InvalidMeasure(format!("edge frequencies sum to {total}")));
        }
        let mut pi = vec![0.0; n];
        let mut col = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let v = x[i * n + j] / total;
                if v > 0.0 && !sys.allows(i, j) {
                    return Err(Error::InvalidMeasure(format!(
                        "mass on forbidden transition {i} -> {j}"
                    )));
                }
                pi[i] += v;
                col[j] += v;
            }
        }
        if let Some(i) = (0..n).find(|&i| (pi[i] - col[i]).abs() > EDGE_TOL) {
            return Err(Error::InvalidMeasure(format!(
                "edge frequencies are not shift-invariant at symbol {i}"
            )));
        }
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            if pi[i] > 0.0 {
                for j in 0..n {
                    p[i * n + j] = x[i * n + j] / total / pi[i];
                }
            } else {
                let succ: Vec<usize> = sys.successors(i).collect();
                for &j in &succ {
                    p[i * n + j] = 1.0 / succ.len() as f64;
                }
            }
        }
        // Use the column sums where they are the better-conditioned estimate.
        for i in 0..n {
            pi[i] = 0.5 * (pi[i] + col[i]);
        }
        let s: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|v| *v /= s);
        Ok(Self { n, p, pi })
    }

    /// The i.i.d. measure with the given symbol probabilities on a full shift.
    pub fn bernoulli(sys: &SymbolicSystem, probs: &[f64]) -> Result<Self> {
        let n = sys.alphabet_size();
        if probs.len() != n {
            return Err(Error::InvalidMeasure("one probability per symbol expected".into()));
        }
        let p: Vec<f64> = (0..n).flat_map(|_| probs.iter().copied()).collect();
        Self::new(sys, p, Some(probs.to_vec()))
    }

    /// Measure carried by the cyclic word `w` (its edge frequencies around the
    /// cycle). This is the periodic-orbit measure whenever no symbol repeats
    /// within `w`.
    pub fn periodic_orbit(sys: &SymbolicSystem, w: &[Symbol]) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidMeasure("empty cycle".into()));
        }
        let mut cyclic = w.to_vec();
        cyclic.push(w[0]);
        sys.check_admissible(&cyclic)?;
        let n = sys.alphabet_size();
        let mut x = vec![0.0; n * n];
        for pair in cyclic.windows(2) {
            x[pair[0] as usize * n + pair[1] as usize] += 1.0 / w.len() as f64;
        }
        Self::from_edge_frequencies(sys, &x)
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn transition_probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    /// `pi_i P_ij`, row-major.
    pub fn edge_frequencies(&self) -> Vec<f64> {
        let n = self.n;
        (0..n * n).map(|k| self.pi[k / n] * self.p[k]).collect()
    }

    pub fn entropy(&self) -> f64 {
        let n = self.n;
        -(0..n)
            .map(|i| self.pi[i] * self.p[i * n..(i + 1) * n].iter().map(|&x| xlogx(x)).sum::<f64>())
            .sum::<f64>()
    }

    /// `max_j |(pi P)_j - pi_j|`.
    pub fn stationarity_residual(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|j| ((0..n).map(|i| self.pi[i] * self.p[i * n + j]).sum::<f64>() - self.pi[j]).abs())
            .fold(0.0, f64::max)
    }

    /// Probability of the cylinder `[w]`.
    pub fn cylinder_probability(&self, w: &[Symbol]) -> f64 {
        match w.split_first() {
            None => 1.0,
            Some((&first, rest)) => {
                let mut prob = self.pi.get(first as usize).copied().unwrap_or(0.0);
                let mut prev = first as usize;
                for &s in rest {
                    if s as usize >= self.n {
                        return 0.0;
                    }
                    prob *= self.prob(prev, s as usize);
                    prev = s as usize;
                }
                prob
            }
        }
    }

    /// Samples a path of length `len` started from the stationary vector.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Vec<Symbol> {
        let first = WeightedIndex::new(&self.pi).expect("stationary vector has mass");
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return out;
        }
        let s = first.sample(rng);
        out.push(s as Symbol);
        self.continue_path(rng, s, len - 1, &mut out);
        out
    }

    /// Appends `len` further symbols of the chain started at `from`.
    pub fn continue_path<R: Rng + ?Sized>(&self, rng: &mut R, from: usize, len: usize, out: &mut Vec<Symbol>) {
        let n = self.n;
        let rows: Vec<WeightedIndex<f64>> = (0..n)
            .map(|i| WeightedIndex::new(&self.p[i * n..(i + 1) * n]).expect("rows are stochastic"))
            .collect();
        let mut cur = from;
        for _ in 0..len {
            cur = rows[cur].sample(rng);
            out.push(cur as Symbol);
        }
    }
}

fn stationary_of(p: &[f64], n: usize) -> Result<Vec<f64>> {
    // Lazy chain (I + P) / 2 is aperiodic, so its iterates from the uniform
    // vector converge to a stationary vector of P.
    let mut v = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..1_000_000 {
        for j in 0..n {
            next[j] = 0.5 * v[j] + 0.5 * (0..n).map(|i| v[i] * p[i * n + j]).sum::<f64>();
        }
        let s: f64 = next.iter().sum();
        let mut delta = 0.0f64;
        for j in 0..n {
            next[j] /= s;
            delta = delta.max((next[j] - v[j]).abs());
        }
        std::mem::swap(&mut v, &mut next);
        if delta < 1e-15 {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence {
        what: "stationary vector".into(),
        iterations: 1_000_000,
    })
}

/// A finite convex combination of stationary Markov measures.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMixtureMeasure {
    components: Vec<(f64, MarkovMeasure)>,
}

impl From<MarkovMeasure> for MarkovMixtureMeasure {
    fn from(m: MarkovMeasure) -> Self {
        Self {
            components: vec![(1.0, m)],
        }
    }
}

impl MarkovMixtureMeasure {
    pub fn new(components: Vec<(f64, MarkovMeasure)>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::BadWeights("a mixture needs at least one component".into()));
        };
        let n = first.1.alphabet_size();
        if components.iter().any(|(_, m)| m.alphabet_size() != n) {
            return Err(Error::InvalidMeasure("components live on different alphabets".into()));
        }
        check_weights(components.iter().map(|c| c.0))?;
        Ok(Self { components })
    }

    pub fn single(m: MarkovMeasure) -> Self {
        m.into()
    }

    pub fn components(&self) -> &[(f64, MarkovMeasure)] {
        &self.components
    }

    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.0).collect()
    }

    pub fn alphabet_size(&self) -> usize {
        self.components[0].1.alphabet_size()
    }

    pub fn cylinder_probability(&self, w: &[Symbol]) -> f64 {
        self.components.iter().map(|(t, m)| t * m.cylinder_probability(w)).sum()
    }

    /// Depth-`L` cylinder probabilities as an [`EmpiricalMeasure`].
    pub fn marginal(&self, depth: usize) -> Result<EmpiricalMeasure> {
        let a = self.alphabet_size();
        let size = dense_size(a, depth)?;
        let frequencies = (0..size)
            .map(|code| self.cylinder_probability(&decode(code, a, depth)))
            .collect();
        EmpiricalMeasure::new(a, depth, frequencies)
    }

    /// Edge frequencies of the mixture, row-major.
    pub fn edge_frequencies(&self) -> Vec<f64> {
        let n = self.alphabet_size();
        let mut out = vec![0.0; n * n];
        for (t, m) in &self.components {
            for (o, x) in out.iter_mut().zip(m.edge_frequencies()) {
                *o += t * x;
            }
        }
        out
    }
}

fn check_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut sum = 0.0;
    for w in weights {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::BadWeights(format!("weight {w} is not a non-negative number")));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::BadWeights(format!("weights sum to {sum}")));
    }
    Ok(())
}

/// Metric entropy, affine over mixture components.
pub fn markov_entropy(m: &MarkovMixtureMeasure) -> f64 {
    m.components.iter().map(|(t, c)| t * c.entropy()).sum()
}

/// `integral f dm` for observables of depth at most 2.
pub fn integrate(m: &MarkovMixtureMeasure, f: &Observable) -> Result<f64> {
    if f.alphabet_size() != m.alphabet_size() {
        return Err(Error::DepthMismatch(
            "observable alphabet differs from the measure's".into(),
        ));
    }
    let mut total = 0.0;
    for (t, c) in &m.components {
        total += t * integrate_markov(c, f)?;
    }
    Ok(total)
}

pub(crate) fn integrate_markov(m: &MarkovMeasure, f: &Observable) -> Result<f64> {
    let n = m.n;
    let undefined = |w: &[Symbol]| Error::InvalidMeasure(format!("observable undefined on charged word {w:?}"));
    match f.depth() {
        1 => {
            let mut s = 0.0;
            for i in 0..n {
                if m.pi[i] > 0.0 {
                    let v = f.value(&[i as Symbol]).ok_or_else(|| undefined(&[i as Symbol]))?;
                    s += m.pi[i] * to_f64(v);
                }
            }
            Ok(s)
        }
        2 => {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let x = m.pi[i] * m.p[i * n + j];
                    if x > 0.0 {
                        let w = [i as Symbol, j as Symbol];
                        s += x * to_f64(f.value(&w).ok_or_else(|| undefined(&w))?);
                    }
                }
            }
            Ok(s)
        }
        d => Err(Error::DepthMismatch(format!(
            "integration handles depth <= 2; recode the depth-{d} observable first"
        ))),
    }
}

/// Flattened mixture `sum_i t_i m_i`.
pub fn convex_combine(measures: &[MarkovMixtureMeasure], weights: &[f64]) -> Result<MarkovMixtureMeasure> {
    if measures.len() != weights.len() {
        return Err(Error::BadWeights("one weight per measure expected".into()));
    }
    check_weights(weights.iter().copied())?;
    let mut components = Vec::new();
    for (m, &t) in measures.iter().zip(weights) {
        if t == 0.0 {
            continue;
        }
        for (s, c) in &m.components {
            components.push((t * s, c.clone()));
        }
    }
    if components.is_empty() {
        return Err(Error::BadWeights("all weights are zero".into()));
    }
    MarkovMixtureMeasure::new(components)
}

/// Cylinder frequencies at a fixed depth, stored densely over all
/// `alphabet_size^depth` words (inadmissible ones carry 0).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    alphabet_size: usize,
    depth: usize,
    frequencies: Vec<f64>,
}

const MAX_DENSE: usize = 1 << 22;

fn dense_size(a: usize, depth: usize) -> Result<usize> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be positive".into()));
    }
    let mut size = 1usize;
    for _ in 0..depth {
        size = size
            .checked_mul(a)
            .filter(|&s| s <= MAX_DENSE)
            .ok_or_else(|| Error::InvalidInput(format!("depth {depth} is too large")))?;
    }
    Ok(size)
}

fn decode(mut code: usize, a: usize, depth: usize) -> Vec<Symbol> {
    let mut w = vec![0; depth];
    for slot in w.iter_mut().rev() {
        *slot = (code % a) as Symbol;
        code /= a;
    }
    w
}

impl EmpiricalMeasure {
    pub fn new(alphabet_size: usize, depth: usize, frequencies: Vec<f64>) -> Result<Self> {
        let size = dense_size(alphabet_size, depth)?;
        if frequencies.len() != size {
            return Err(Error::InvalidMeasure(format!(
                "expected {size} cylinder frequencies, got {}",
                frequencies.len()
            )));
        }
        if frequencies.iter().any(|&f| !(0.0..=1.0 + ROW_TOL).contains(&f)) {
            return Err(Error::InvalidMeasure("frequency outside [0, 1]".into()));
        }
        let s: f64 = frequencies.iter().sum();
        if (s - 1.0).abs() > ROW_TOL {
            return Err(Error::InvalidMeasure(format!("frequencies sum to {s}")));
        }
        Ok(Self {
            alphabet_size,
            depth,
            frequencies,
        })
    }

    /// Unit mass on one cylinder.
    pub fn point_mass(alphabet_size: usize, w: &[Symbol]) -> Result<Self> {
        let mut f = vec![0.0; dense_size(alphabet_size, w.len())?];
        if w.iter().any(|&s| s as usize >= alphabet_size) {
            return Err(Error::InadmissibleWord(0));
        }
        f[word_code(w, alphabet_size)] = 1.0;
        Self::new(alphabet_size, w.len(), f)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn frequency(&self, w: &[Symbol]) -> f64 {
        if w.len() != self.depth || w.iter().any(|&s| s as usize >= self.alphabet_size) {
            return 0.0;
        }
        self.frequencies[word_code(w, self.alphabet_size)]
    }

    /// Non-zero cylinders in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<Symbol>, f64)> + '_ {
        self.frequencies
            .iter()
            .enumerate()
            .filter(|(_, &f)| f > 0.0)
            .map(|(c, &f)| (decode(c, self.alphabet_size, self.depth), f))
    }

    /// Frequencies of the length-`l` prefixes.
    pub fn project(&self, l: usize) -> Result<EmpiricalMeasure> {
        if l == 0 || l > self.depth {
            return Err(Error::DepthMismatch(format!(
                "cannot project depth {} to {l}",
                self.depth
            )));
        }
        let block = dense_size(self.alphabet_size, self.depth - l + 1)? / self.alphabet_size;
        let out: Vec<f64> = self.frequencies.chunks(block).map(|c| c.iter().sum()).collect();
        Ok(EmpiricalMeasure {
            alphabet_size: self.alphabet_size,
            depth: l,
            frequencies: out,
        })
    }
}

/// Sliding-window frequencies of the `depth`-words of `w`.
pub fn empirical_measure(w: &[Symbol], alphabet_size: usize, depth: usize) -> Result<EmpiricalMeasure> {
    if w.len() < depth {
        return Err(Error::WordTooShort {
            len: w.len(),
            min: depth,
        });
    }
    if let Some(i) = w.iter().position(|&s| s as usize >= alphabet_size) {
        return Err(Error::InadmissibleWord(i));
    }
    let mut counts = vec![0u64; dense_size(alphabet_size, depth)?];
    for win in w.windows(depth) {
        counts[word_code(win, alphabet_size)] += 1;
    }
    let total = (w.len() - depth + 1) as f64;
    EmpiricalMeasure::new(
        alphabet_size,
        depth,
        counts.into_iter().map(|c| c as f64 / total).collect(),
    )
}

/// `sum_j 2^-j |p(f_j) - q(f_j)|` over cylinder indicators `f_j` of depth
/// `1..=L`, enumerated by depth and then lexicographically (inadmissible
/// cylinders included). Lower-depth frequencies are prefix projections.
pub fn weakstar_distance(p: &EmpiricalMeasure, q: &EmpiricalMeasure) -> Result<f64> {
    if p.depth != q.depth || p.alphabet_size != q.alphabet_size {
        return Err(Error::DepthMismatch(format!(
            "measures at depths {} and {} over alphabets {} and {}",
            p.depth, q.depth, p.alphabet_size, q.alphabet_size
        )));
    }
    let mut total = 0.0;
    let mut weight = 1.0;
    for l in 1..=p.depth {
        let (pl, ql) = (p.project(l)?, q.project(l)?);
        for (x, y) in pl.frequencies.iter().zip(&ql.frequencies) {
            weight *= 0.5;
            total += weight * (x - y).abs();
        }
    }
    Ok(total)
}
