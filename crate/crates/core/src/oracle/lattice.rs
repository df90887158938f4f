//! Dynamic programming over (context, scaled Birkhoff sums).
//!
//! The state after reading a prefix is its last `max(k - 1, 1)` symbols and,
//! for each constraint, the integer `D * S_t f` over the `t` completed
//! windows. Cells that can no longer reach a later checkpoint window are
//! pruned, so the active box at each step is a band around the targets.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::rational::{to_f64, Rational};
use crate::shift::{Symbol, SymbolicSystem};

/// Cap on the number of cells of one DP layer.
const MAX_CELLS: usize = 1 << 26;
pub const MAX_LATTICE_CONSTRAINTS: usize = 3;

/// The average over the first `windows` windows must lie in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub windows: usize,
    pub lo: Rational,
    pub hi: Rational,
}

/// Final window `[lo, hi]` on the average of `observable`, plus optional
/// intermediate checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConstraint {
    pub observable: Observable,
    pub lo: Rational,
    pub hi: Rational,
    pub checkpoints: Vec<Checkpoint>,
}

impl LatticeConstraint {
    pub fn window(observable: Observable, lo: Rational, hi: Rational) -> Self {
        Self {
            observable,
            lo,
            hi,
            checkpoints: Vec::new(),
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<Checkpoint>) -> Self {
        self.checkpoints = checkpoints;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeQuery {
    pub n: usize,
    pub constraints: Vec<LatticeConstraint>,
    /// Words are weighted by `exp(S psi)` when present.
    pub potential: Option<Observable>,
}

impl LatticeQuery {
    pub fn new(n: usize, constraints: Vec<LatticeConstraint>) -> Self {
        Self {
            n,
            constraints,
            potential: None,
        }
    }

    pub fn with_potential(mut self, psi: Observable) -> Self {
        self.potential = Some(psi);
        self
    }
}

/// Final DP layer: exact counts keyed by (context word, scaled sums).
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    pub n: usize,
    pub windows: usize,
    pub denominators: Vec<i64>,
    pub counts: BTreeMap<(Vec<Symbol>, Vec<i64>), BigUint>,
}

impl CountTable {
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }
}

/// Final DP layer, its active box (None when empty) and the accumulated log scale.
type FinalLayer<C> = (Vec<C>, Option<Vec<(i64, i64)>>, f64);

pub(crate) trait Cell: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_from(&mut self, src: &Self, weight: f64);
    /// Floating cells are rescaled after every step to avoid overflow.
    const FLOATING: bool;
    fn magnitude(&self) -> f64;
    fn scale_by(&mut self, factor: f64);
}

impl Cell for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_from(&mut self, src: &Self, _weight: f64) {
        *self += src;
    }
    const FLOATING: bool = false;
    fn magnitude(&self) -> f64 {
        0.0
    }
    fn scale_by(&mut self, _: f64) {}
}

impl Cell for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_from(&mut self, src: &Self, weight: f64) {
        *self += src * weight;
    }
    const FLOATING: bool = true;
    fn magnitude(&self) -> f64 {
        *self
    }
    fn scale_by(&mut self, factor: f64) {
        *self *= factor;
    }
}

struct Dim {
    /// Scaled value per window code (`i64::MIN` where inadmissible).
    deltas: Vec<i64>,
    min_step: i64,
    max_step: i64,
    /// `(t, lo, hi)` scaled bounds, sorted by `t`.
    checks: Vec<(usize, i64, i64)>,
    base: i64,
    len: usize,
    stride: usize,
}

impl Dim {
    fn allowed(&self, t: usize) -> (i64, i64) {
        let t64 = t as i64;
        let mut lo = t64 * self.min_step;
        let mut hi = t64 * self.max_step;
        for &(tc, clo, chi) in self.checks.iter().filter(|c| c.0 >= t) {
            let r = (tc - t) as i64;
            lo = lo.max(clo - r * self.max_step);
            hi = hi.min(chi - r * self.min_step);
        }
        (lo, hi)
    }
}

pub(crate) struct Engine {
    a: usize,
    k: usize,
    ctx_len: usize,
    n: usize,
    windows: usize,
    dims: Vec<Dim>,
    ctx_stride: usize,
    n_ctx: usize,
    /// `(next context, window code)` per context and successor symbol.
    succ: Vec<Vec<(usize, usize)>>,
    adj: Vec<bool>,
    weights: Option<Vec<f64>>,
}

fn pow(a: usize, e: usize) -> Result<usize> {
    (0..e).try_fold(1usize, |acc, _| {
        acc.checked_mul(a)
            .filter(|&v| v <= MAX_CELLS)
            .ok_or_else(|| Error::ExhaustiveTooLarge(format!("{a}^{e} lattice contexts")))
    })
}

fn scaled_bound(d: i64, t: usize, r: Rational, up: bool) -> Result<i64> {
    let x = Rational::from_integer(d) * Rational::from_integer(t as i64) * r;
    let v = if up { x.ceil() } else { x.floor() };
    v.to_integer()
        .to_i64()
        .ok_or_else(|| Error::InvalidInput("lattice bound overflows".into()))
}

impl Engine {
    pub(crate) fn new(sys: &SymbolicSystem, query: &LatticeQuery) -> Result<Self> {
        sys.require_markov("lattice counting")?;
        if query.constraints.len() > MAX_LATTICE_CONSTRAINTS {
            return Err(Error::InvalidInput(format!(
                "at most {MAX_LATTICE_CONSTRAINTS} lattice constraints are supported"
            )));
        }
        let a = sys.alphabet_size();
        let k = query
            .constraints
            .iter()
            .map(|c| c.observable.depth())
            .chain(query.potential.as_ref().map(|p| p.depth()))
            .max()
            .unwrap_or(1)
            .max(1);
        for c in &query.constraints {
            if c.observable.alphabet_size() != a {
                return Err(Error::DepthMismatch(
                    "observable alphabet differs from the system".into(),
                ));
            }
        }
        if query.n < k {
            return Err(Error::WordTooShort { len: query.n, min: k });
        }
        let windows = query.n - k + 1;
        let ctx_len = (k - 1).max(1);
        let n_ctx = pow(a, ctx_len)?;
        let n_win = pow(a, k)?;
        let high = n_ctx / a;

        let mut dims = Vec::new();
        for c in &query.constraints {
            let f = c.observable.lift(k)?;
            let d = f.denominator();
            let deltas: Vec<i64> = (0..n_win).map(|w| f.scaled_by_code(w).unwrap_or(i64::MIN)).collect();
            let admissible = deltas.iter().copied().filter(|&v| v != i64::MIN);
            let min_step = admissible.clone().min().unwrap_or(0);
            let max_step = admissible.max().unwrap_or(0);
            let mut checks = Vec::new();
            let final_check = Checkpoint {
                windows,
                lo: c.lo,
                hi: c.hi,
            };
            for cp in c.checkpoints.iter().chain(std::iter::once(&final_check)) {
                if cp.windows == 0 || cp.windows > windows {
                    return Err(Error::BadCheckpoints(format!(
                        "checkpoint at {} windows outside 1..={windows}",
                        cp.windows
                    )));
                }
                let lo = scaled_bound(d, cp.windows, cp.lo, true)?;
                let hi = scaled_bound(d, cp.windows, cp.hi, false)?;
                if lo > hi {
                    return Err(Error::DegenerateWindow);
                }
                checks.push((cp.windows, lo, hi));
            }
            checks.sort_unstable();
            dims.push(Dim {
                deltas,
                min_step,
                max_step,
                checks,
                base: 0,
                len: 0,
                stride: 0,
            });
        }
        // Fixed layout covering the union of all active boxes.
        let first_t = if k == 1 { 1 } else { 0 };
        let mut stride = 1usize;
        for dim in dims.iter_mut().rev() {
            let (mut lo, mut hi) = (i64::MAX, i64::MIN);
            for t in first_t..=windows {
                let (l, h) = dim.allowed(t);
                if l <= h {
                    lo = lo.min(l);
                    hi = hi.max(h);
                }
            }
            if lo > hi {
                lo = 0;
                hi = 0;
            }
            dim.base = lo;
            dim.len = (hi - lo + 1) as usize;
            dim.stride = stride;
            stride = stride
                .checked_mul(dim.len)
                .filter(|&s| s.saturating_mul(n_ctx) <= MAX_CELLS)
                .ok_or_else(|| Error::ExhaustiveTooLarge("lattice layer too large".into()))?;
        }
        let ctx_stride = stride;
        stride
            .checked_mul(n_ctx)
            .filter(|&s| s <= MAX_CELLS)
            .ok_or_else(|| Error::ExhaustiveTooLarge("lattice layer too large".into()))?;

        let succ = (0..n_ctx)
            .map(|x| {
                let last = x % a;
                sys.successors(last)
                    .map(|s| {
                        let next = if ctx_len == 1 { s } else { (x % high) * a + s };
                        let win = if k == 1 { s } else { x * a + s };
                        (next, win)
                    })
                    .collect()
            })
            .collect();
        let weights = match &query.potential {
            None => None,
            Some(p) => {
                let p = p.lift(k)?;
                Some(
                    (0..n_win)
                        .map(|w| p.value(&decode(w, a, k)).map_or(0.0, |v| to_f64(v).exp()))
                        .collect(),
                )
            }
        };
        Ok(Self {
            a,
            k,
            ctx_len,
            n: query.n,
            windows,
            dims,
            ctx_stride,
            n_ctx,
            succ,
            adj: sys.adjacency().to_vec(),
            weights,
        })
    }

    pub(crate) fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    fn boxes(&self, t: usize) -> Option<Vec<(i64, i64)>> {
        self.dims
            .iter()
            .map(|d| {
                let (l, h) = d.allowed(t);
                let l = l.max(d.base);
                let h = h.min(d.base + d.len as i64 - 1);
                (l <= h).then_some((l, h))
            })
            .collect()
    }

    fn offset(&self, sums: &[i64]) -> usize {
        self.dims
            .iter()
            .zip(sums)
            .map(|(d, &s)| (s - d.base) as usize * d.stride)
            .sum()
    }

    /// Runs the DP and returns the final layer, its active box and the
    /// accumulated log scale.
    pub(crate) fn run<C: Cell>(&self) -> FinalLayer<C> {
        let size = self.ctx_stride * self.n_ctx;
        let mut cur = vec![C::zero(); size];
        let mut next = vec![C::zero(); size];
        let mut log_scale = 0.0;
        let nd = self.dims.len();

        // Initial layer: every admissible context word.
        let t0 = if self.k == 1 { 1 } else { 0 };
        let Some(mut cur_box) = self.boxes(t0) else {
            return (cur, None, 0.0);
        };
        for x in 0..self.n_ctx {
            if self.ctx_len > 1 && !self.context_admissible(x) {
                continue;
            }
            let mut sums = vec![0i64; nd];
            let mut w = 1.0;
            if self.k == 1 {
                for (s, d) in sums.iter_mut().zip(&self.dims) {
                    *s = d.deltas[x];
                }
                if let Some(ws) = &self.weights {
                    w = ws[x];
                }
            }
            if sums.iter().zip(&cur_box).all(|(&s, &(l, h))| l <= s && s <= h) {
                let idx = x * self.ctx_stride + self.offset(&sums);
                cur[idx].add_from(&C::one(), w);
            }
        }

        let mut t = t0;
        for _len in self.ctx_len..self.n {
            let Some(next_box) = self.boxes(t + 1) else {
                return (next, None, log_scale);
            };
            self.transfer(&cur, &cur_box, &mut next, &next_box);
            // Clear the source box so the buffer can be reused.
            self.for_each_row(&cur_box, |x, start, len| {
                let base = x * self.ctx_stride + start;
                cur[base..base + len].iter_mut().for_each(|c| *c = C::zero());
            });
            std::mem::swap(&mut cur, &mut next);
            cur_box = next_box;
            t += 1;
            if C::FLOATING {
                let mut m = 0f64;
                self.for_each_row(&cur_box, |x, start, len| {
                    let base = x * self.ctx_stride + start;
                    m = cur[base..base + len].iter().fold(m, |m, c| m.max(c.magnitude()));
                });
                if m > 0.0 {
                    let inv = 1.0 / m;
                    self.for_each_row(&cur_box, |x, start, len| {
                        let base = x * self.ctx_stride + start;
                        cur[base..base + len].iter_mut().for_each(|c| c.scale_by(inv));
                    });
                    log_scale += m.ln();
                }
            }
        }
        debug_assert_eq!(t, self.windows);
        (cur, Some(cur_box), log_scale)
    }

    fn context_admissible(&self, x: usize) -> bool {
        decode(x, self.a, self.ctx_len)
            .windows(2)
            .all(|p| self.adj[p[0] as usize * self.a + p[1] as usize])
    }

    /// Visits every row (run along the last dimension) of a box as
    /// `f(context, offset of the row start, row length)`.
    fn for_each_row(&self, bx: &[(i64, i64)], mut f: impl FnMut(usize, usize, usize)) {
        let nd = self.dims.len();
        for x in 0..self.n_ctx {
            if nd == 0 {
                f(x, 0, 1);
                continue;
            }
            let len = (bx[nd - 1].1 - bx[nd - 1].0 + 1) as usize;
            let mut coord: Vec<i64> = bx.iter().map(|b| b.0).collect();
            loop {
                f(x, self.offset(&coord), len);
                if !advance(&mut coord, bx) {
                    break;
                }
            }
        }
    }

    fn transfer<C: Cell>(&self, src: &[C], sb: &[(i64, i64)], dst: &mut [C], db: &[(i64, i64)]) {
        let nd = self.dims.len();
        for x in 0..self.n_ctx {
            for &(nx, win) in &self.succ[x] {
                let w = self.weights.as_ref().map_or(1.0, |ws| ws[win]);
                if nd == 0 {
                    let (i, j) = (x * self.ctx_stride, nx * self.ctx_stride);
                    if !src[i].is_zero() {
                        dst[j].add_from(&src[i], w);
                    }
                    continue;
                }
                let deltas: Vec<i64> = self.dims.iter().map(|d| d.deltas[win]).collect();
                if deltas.contains(&i64::MIN) {
                    continue;
                }
                // Rows along the last dimension, clipped to the target box.
                let (sl, sh) = sb[nd - 1];
                let dl = deltas[nd - 1];
                let lo = sl.max(db[nd - 1].0 - dl);
                let hi = sh.min(db[nd - 1].1 - dl);
                if lo > hi {
                    continue;
                }
                let mut coord: Vec<i64> = sb.iter().map(|b| b.0).collect();
                loop {
                    let inside = (0..nd - 1).all(|i| {
                        let y = coord[i] + deltas[i];
                        db[i].0 <= y && y <= db[i].1
                    });
                    if inside {
                        coord[nd - 1] = lo;
                        let s0 = x * self.ctx_stride + self.offset(&coord);
                        let shifted: Vec<i64> = coord.iter().zip(&deltas).map(|(c, d)| c + d).collect();
                        let d0 = nx * self.ctx_stride + self.offset(&shifted);
                        let len = (hi - lo + 1) as usize;
                        for j in 0..len {
                            let v = &src[s0 + j];
                            if !v.is_zero() {
                                dst[d0 + j].add_from(v, w);
                            }
                        }
                    }
                    if !advance(&mut coord, sb) {
                        break;
                    }
                }
            }
        }
    }
}

/// Odometer step over all coordinates but the last; false when exhausted.
fn advance(coord: &mut [i64], bx: &[(i64, i64)]) -> bool {
    let mut i = coord.len() - 1;
    while i > 0 {
        i -= 1;
        coord[i] += 1;
        if coord[i] <= bx[i].1 {
            return true;
        }
        coord[i] = bx[i].0;
    }
    false
}

fn decode(mut code: usize, a: usize, len: usize) -> Vec<Symbol> {
    let mut w = vec![0; len];
    for i in (0..len).rev() {
        w[i] = (code % a) as Symbol;
        code /= a;
    }
    w
}

/// Exact count of admissible `n`-words meeting every constraint.
pub fn count_exact(sys: &SymbolicSystem, query: &LatticeQuery) -> Result<BigUint> {
    Ok(count_table(sys, query)?.total())
}

/// Exact final DP layer.
pub fn count_table(sys: &SymbolicSystem, query: &LatticeQuery) -> Result<CountTable> {
    let engine = Engine::new(sys, query)?;
    if engine.is_weighted() {
        return Err(Error::InvalidInput("exact counts take no potential".into()));
    }
    let (layer, bx, _) = engine.run::<BigUint>();
    let mut counts = BTreeMap::new();
    if let Some(bx) = bx {
        engine.for_each_row(&bx, |x, start, len| {
            for j in 0..len {
                let c = &layer[x * engine.ctx_stride + start + j];
                if !Zero::is_zero(c) {
                    let sums = engine.sums_at(start + j);
                    counts.insert((decode(x, engine.a, engine.ctx_len), sums), c.clone());
                }
            }
        });
    }
    Ok(CountTable {
        n: query.n,
        windows: engine.windows,
        denominators: query.constraints.iter().map(|c| c.observable.denominator()).collect(),
        counts,
    })
}

impl Engine {
    fn sums_at(&self, mut off: usize) -> Vec<i64> {
        let mut sums = vec![0; self.dims.len()];
        for (i, d) in self.dims.iter().enumerate() {
            sums[i] = d.base + (off / d.stride) as i64;
            off %= d.stride;
        }
        sums
    }
}

/// `ln` of the (weighted) count in floating point with per-step
/// renormalization; `-inf` when no word qualifies.
pub fn log_count(sys: &SymbolicSystem, query: &LatticeQuery) -> Result<f64> {
    let engine = Engine::new(sys, query)?;
    let (layer, bx, scale) = engine.run::<f64>();
    let Some(bx) = bx else {
        return Ok(f64::NEG_INFINITY);
    };
    let mut total = 0.0;
    engine.for_each_row(&bx, |x, start, len| {
        let base = x * engine.ctx_stride + start;
        total += layer[base..base + len].iter().sum::<f64>();
    });
    Ok(total.ln() + scale)
}

/// Natural log of a big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    if Zero::is_zero(x) {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}
