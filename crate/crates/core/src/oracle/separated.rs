//! Separated sets of words with prescribed empirical statistics, and Bowen
//! balls with mistakes.
//!
//! For `eps` in `(1/2, 1)` two points are `eps`-apart at time `j` exactly
//! when their `j`-th coordinates differ, so separation and Bowen balls
//! reduce to Hamming distances between words.

use crate::error::{Error, Result};
use crate::measure::{empirical_measure, weakstar_distance, EmpiricalMeasure};
use crate::shift::{Symbol, SymbolicSystem, Word};

/// Word length cap in exact mode.
pub const MAX_EXACT_N: usize = 20;
/// Word length cap in greedy mode.
pub const MAX_GREEDY_N: usize = 24;
/// Vertex cap for the maximum-clique search.
pub const MAX_CLIQUE_VERTICES: usize = 256;

/// `g(n, eps)`: allowed number of mismatches among the first `n` times.
#[derive(Debug, Clone, PartialEq)]
pub enum MistakeFunction {
    Zero,
    Constant(u64),
    /// `floor(theta * n / ln n)` for `n >= 3`, 0 below.
    NOverLog {
        theta: f64,
    },
    /// `floor(theta * sqrt n)`.
    Sqrt {
        theta: f64,
    },
    /// `values[n - 1]`, repeating the last entry past the end.
    Table(Vec<u64>),
}

impl MistakeFunction {
    pub fn eval(&self, n: usize) -> u64 {
        match self {
            MistakeFunction::Zero => 0,
            MistakeFunction::Constant(c) => *c,
            MistakeFunction::NOverLog { theta } => {
                if n < 3 {
                    0
                } else {
                    (theta * n as f64 / (n as f64).ln()).floor() as u64
                }
            }
            MistakeFunction::Sqrt { theta } => (theta * (n as f64).sqrt()).floor() as u64,
            MistakeFunction::Table(v) => match v.len() {
                0 => 0,
                len => v[n.clamp(1, len) - 1],
            },
        }
    }

    /// Monotone on `1..=horizon`, below `n`, and with `g(n) / n`
    /// non-increasing between `horizon / 2` and `horizon`.
    pub fn check_on_horizon(&self, horizon: usize) -> Result<()> {
        if let MistakeFunction::NOverLog { theta } | MistakeFunction::Sqrt { theta } = self {
            if !(theta.is_finite() && *theta >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "mistake scale {theta} must be finite and >= 0"
                )));
            }
        }
        let mut prev = 0;
        for n in 1..=horizon {
            let g = self.eval(n);
            if g < prev {
                return Err(Error::InvalidInput(format!("mistake function decreases at n = {n}")));
            }
            prev = g;
        }
        if horizon >= 2 {
            let half = horizon / 2;
            let early = self.eval(half) as f64 / half as f64;
            let late = self.eval(horizon) as f64 / horizon as f64;
            if late > early || self.eval(horizon) as usize >= horizon {
                return Err(Error::InvalidInput(format!(
                    "mistake function is not sublinear on the horizon {horizon}"
                )));
            }
        }
        Ok(())
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.5 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (1/2, 1)")));
    }
    Ok(())
}

/// Whether `y` lies in the `(g; n, eps)`-Bowen ball around `x`.
pub fn bowen_ball_membership(x: &[Symbol], y: &[Symbol], n: usize, eps: f64, g: &MistakeFunction) -> Result<bool> {
    check_eps(eps)?;
    for w in [x, y] {
        if w.len() < n {
            return Err(Error::WordTooShort { len: w.len(), min: n });
        }
    }
    let mismatches = x[..n].iter().zip(&y[..n]).filter(|(a, b)| a != b).count() as u64;
    Ok(mismatches <= g.eval(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparatedMode {
    Exact,
    Greedy,
}

/// Ball `{ m : d(m, center) <= radius }` in the weak* distance at the depth
/// of `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureBall {
    pub center: EmpiricalMeasure,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatedCount {
    pub count: u64,
    /// False for greedy lower bounds.
    pub exact: bool,
    /// Number of words whose empirical measure lies in the ball.
    pub candidates: usize,
}

/// Largest set of admissible `n`-words with empirical measure in `ball`
/// whose pairwise Hamming distance is at least `ceil(delta n)`.
pub fn count_separated(
    sys: &SymbolicSystem,
    ball: &MeasureBall,
    delta: f64,
    n: usize,
    eps: f64,
    mode: SeparatedMode,
) -> Result<SeparatedCount> {
    check_eps(eps)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidInput(format!("delta = {delta} must lie in [0, 1]")));
    }
    let cap = match mode {
        SeparatedMode::Exact => MAX_EXACT_N,
        SeparatedMode::Greedy => MAX_GREEDY_N,
    };
    if n > cap {
        return Err(Error::ExhaustiveTooLarge(format!("n = {n} exceeds {cap}")));
    }
    let depth = ball.center.depth();
    if n < depth {
        return Err(Error::WordTooShort { len: n, min: depth });
    }
    let a = sys.alphabet_size();
    let mut words: Vec<Word> = Vec::new();
    for w in sys.admissible_words(n) {
        let m = empirical_measure(&w.0, a, depth)?;
        if weakstar_distance(&m, &ball.center)? <= ball.radius + 1e-12 {
            words.push(w);
        }
    }
    let candidates = words.len();
    let sep = (delta * n as f64 - 1e-9).ceil().max(0.0) as usize;
    if sep <= 1 {
        return Ok(SeparatedCount {
            count: candidates as u64,
            exact: true,
            candidates,
        });
    }
    let far = |u: &Word, v: &Word| u.0.iter().zip(&v.0).filter(|(a, b)| a != b).count() >= sep;
    match mode {
        SeparatedMode::Greedy => {
            let mut chosen: Vec<&Word> = Vec::new();
            for w in &words {
                if chosen.iter().all(|c| far(c, w)) {
                    chosen.push(w);
                }
            }
            Ok(SeparatedCount {
                count: chosen.len() as u64,
                exact: false,
                candidates,
            })
        }
        SeparatedMode::Exact => {
            if candidates > MAX_CLIQUE_VERTICES {
                return Err(Error::ExhaustiveTooLarge(format!(
                    "{candidates} candidate words exceed the clique cap {MAX_CLIQUE_VERTICES}"
                )));
            }
            let graph = BitGraph::new(candidates, |i, j| far(&words[i], &words[j]));
            Ok(SeparatedCount {
                count: graph.max_clique() as u64,
                exact: true,
                candidates,
            })
        }
    }
}

/// Adjacency bitsets for a small undirected graph.
struct BitGraph {
    n: usize,
    blocks: usize,
    adj: Vec<u64>,
}

impl BitGraph {
    fn new(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let blocks = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * blocks];
        for i in 0..n {
            for j in i + 1..n {
                if edge(i, j) {
                    adj[i * blocks + j / 64] |= 1 << (j % 64);
                    adj[j * blocks + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Self { n, blocks, adj }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.blocks..(v + 1) * self.blocks]
    }

    fn max_clique(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let mut cand = vec![0u64; self.blocks];
        for v in 0..self.n {
            cand[v / 64] |= 1 << (v % 64);
        }
        let mut best = 0;
        self.expand(0, cand, &mut best);
        best
    }

    /// Branch and bound with a greedy colouring bound.
    fn expand(&self, size: usize, cand: Vec<u64>, best: &mut usize) {
        let (order, colours) = self.colour(&cand);
        let mut cand = cand;
        for (&v, &c) in order.iter().zip(&colours).rev() {
            if size + c <= *best {
                return;
            }
            let next: Vec<u64> = cand.iter().zip(self.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&b| b == 0) {
                *best = (*best).max(size + 1);
            } else {
                self.expand(size + 1, next, best);
            }
            cand[v / 64] &= !(1 << (v % 64));
        }
    }

    /// Vertices of `cand` in colour-class order with running colour counts.
    fn colour(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = cand.to_vec();
        let mut order = Vec::new();
        let mut colours = Vec::new();
        let mut colour = 0;
        while uncoloured.iter().any(|&b| b != 0) {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = first_bit(&avail) {
                avail[v / 64] &= !(1 << (v % 64));
                uncoloured[v / 64] &= !(1 << (v % 64));
                for (a, r) in avail.iter_mut().zip(self.row(v)) {
                    *a &= !r;
                }
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, &b)| b != 0)
        .map(|(i, &b)| i * 64 + b.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn everything(a: usize) -> MeasureBall {
        MeasureBall {
            center: EmpiricalMeasure::new(a, 1, vec![1.0 / a as f64; a]).unwrap(),
            radius: 2.0,
        }
    }

    #[test]
    fn separated_examples() {
        let full = SymbolicSystem::full(2).unwrap();
        let all = everything(2);
        let c = count_separated(&full, &all, 0.5, 2, 0.75, SeparatedMode::Exact).unwrap();
        assert_eq!(c.count, 4);
        let c = count_separated(&full, &all, 1.0, 3, 0.75, SeparatedMode::Exact).unwrap();
        assert_eq!((c.count, c.exact), (2, true));
        let gm = SymbolicSystem::golden_mean();
        let c = count_separated(&gm, &all, 0.0, 5, 0.75, SeparatedMode::Exact).unwrap();
        assert_eq!(c.count, 13);
        // Hamming-3 code of length 5 over {0,1}: at most 4 words.
        let c = count_separated(&full, &all, 0.6, 5, 0.75, SeparatedMode::Exact).unwrap();
        assert_eq!(c.count, 4);
        let g = count_separated(&full, &all, 0.6, 5, 0.75, SeparatedMode::Greedy).unwrap();
        assert!(!g.exact && g.count <= 4 && g.count >= 1);
        assert!(matches!(
            count_separated(&full, &all, 0.5, 21, 0.75, SeparatedMode::Exact),
            Err(Error::ExhaustiveTooLarge(_))
        ));
        assert!(count_separated(&full, &all, 0.5, 3, 0.5, SeparatedMode::Exact).is_err());
    }

    #[test]
    fn clique_matches_brute_force() {
        // Pentagon plus chords: clique number 3.
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3)];
        let g = BitGraph::new(5, |i, j| edges.contains(&(i, j)) || edges.contains(&(j, i)));
        assert_eq!(g.max_clique(), 3);
        let g = BitGraph::new(130, |i, j| (i + j) % 2 == 1);
        assert_eq!(g.max_clique(), 2);
        let g = BitGraph::new(70, |_, _| true);
        assert_eq!(g.max_clique(), 70);
    }

    #[test]
    fn bowen_examples() {
        let x = [0, 0, 0];
        let y = [0, 0, 1];
        assert!(!bowen_ball_membership(&x, &y, 3, 0.75, &MistakeFunction::Zero).unwrap());
        assert!(bowen_ball_membership(&x, &y, 3, 0.75, &MistakeFunction::Constant(1)).unwrap());
        assert!(bowen_ball_membership(&x, &x, 3, 0.75, &MistakeFunction::Zero).unwrap());
        assert!(bowen_ball_membership(&x, &y, 2, 0.75, &MistakeFunction::Zero).unwrap());
        assert_eq!(
            bowen_ball_membership(&x, &y[..2], 3, 0.75, &MistakeFunction::Zero),
            Err(Error::WordTooShort { len: 2, min: 3 })
        );
    }

    #[test]
    fn mistake_families() {
        for g in [
            MistakeFunction::Zero,
            MistakeFunction::Constant(2),
            MistakeFunction::NOverLog { theta: 0.5 },
            MistakeFunction::Sqrt { theta: 1.0 },
        ] {
            g.check_on_horizon(10_000).unwrap();
        }
        assert!(MistakeFunction::Table(vec![0, 2, 1]).check_on_horizon(3).is_err());
        assert!(MistakeFunction::Table((0..100).collect())
            .check_on_horizon(100)
            .is_err());
    }

    proptest! {
        #[test]
        fn membership_monotone_in_g(
            x in proptest::collection::vec(0u16..3, 12),
            y in proptest::collection::vec(0u16..3, 12),
            n in 1usize..=12,
            small in 0u64..6,
            extra in 0u64..6,
        ) {
            let lo = MistakeFunction::Constant(small);
            let hi = MistakeFunction::Constant(small + extra);
            if bowen_ball_membership(&x, &y, n, 0.6, &lo).unwrap() {
                prop_assert!(bowen_ball_membership(&x, &y, n, 0.6, &hi).unwrap());
            }
        }
    }
}
