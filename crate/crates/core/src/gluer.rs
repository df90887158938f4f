//! Explicit orbit words whose Birkhoff averages oscillate between prescribed
//! values.
//!
//! Blocks sampled from target measures are concatenated with shortest
//! connectors. Each block is long compared with everything before it, so
//! the running average at a block end sits close to that block's target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::{
    empirical_measure, integrate, weakstar_distance, EmpiricalMeasure, MarkovMeasure, MarkovMixtureMeasure,
};
use crate::observable::{birkhoff_stats_with_burn_in, Observable};
use crate::rational::{to_f64, Rational};
use crate::shift::{connector_word, Symbol, SymbolicSystem, Word};
use crate::thermo::constrained_value;

pub const DEFAULT_GROWTH_RATIO: i64 = 4;
/// Candidates drawn per block; the one closest to the target is kept.
pub const BLOCK_CANDIDATES: usize = 8;
/// Ratio of the last two blocks to everything before them, when the length
/// allows.
pub const FINALE_RATIO: f64 = 99.0;
pub const MERGE_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct GluingSchedule {
    pub targets: Vec<MarkovMixtureMeasure>,
    pub block_lengths: Vec<usize>,
    /// Target index for each block.
    pub assignment: Vec<usize>,
    pub growth_ratio: Rational,
    pub seed: u64,
}

impl GluingSchedule {
    /// Checks `N_{k+1} >= growth_ratio * (N_1 + ... + N_k)`.
    pub fn new(
        targets: Vec<MarkovMixtureMeasure>,
        block_lengths: Vec<usize>,
        assignment: Vec<usize>,
        growth_ratio: Rational,
        seed: u64,
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidInput("gluing needs at least one target".into()));
        }
        if growth_ratio <= Rational::from_integer(1) {
            return Err(Error::InvalidInput(format!(
                "growth ratio {growth_ratio} must exceed 1"
            )));
        }
        if block_lengths.is_empty() || block_lengths.len() != assignment.len() {
            return Err(Error::InvalidInput("one target index per block is required".into()));
        }
        if let Some(&i) = assignment.iter().find(|&&i| i >= targets.len()) {
            return Err(Error::InvalidInput(format!("block assigned to missing target {i}")));
        }
        if block_lengths[0] == 0 {
            return Err(Error::InvalidInput("blocks must be non-empty".into()));
        }
        let mut total = 0i64;
        for (k, &len) in block_lengths.iter().enumerate() {
            if k > 0 && Rational::from_integer(len as i64) < growth_ratio * total {
                return Err(Error::InvalidInput(format!(
                    "block {k} of length {len} is shorter than {growth_ratio} times the {total} symbols before it"
                )));
            }
            total += len as i64;
        }
        let a = targets[0].alphabet_size();
        if targets.iter().any(|t| t.alphabet_size() != a) {
            return Err(Error::InvalidInput("targets live on different alphabets".into()));
        }
        Ok(Self {
            targets,
            block_lengths,
            assignment,
            growth_ratio,
            seed,
        })
    }

    /// Schedule of total length `total`, alternating targets.
    ///
    /// Blocks grow by exactly `growth_ratio` from length 1 while there is
    /// room for two closing blocks of ratio at least [`FINALE_RATIO`]; the
    /// closing pair then splits the rest evenly in the geometric sense. If
    /// `total` is too small for that, blocks grow geometrically and the last
    /// one absorbs the remainder.
    pub fn plan(targets: Vec<MarkovMixtureMeasure>, growth_ratio: Rational, total: usize, seed: u64) -> Result<Self> {
        if total == 0 {
            return Err(Error::InvalidInput("total length must be positive".into()));
        }
        let r = to_f64(growth_ratio);
        let mut blocks = vec![1usize];
        let mut sum = 1usize;
        let next_len = |sum: usize| (growth_ratio * Rational::from_integer(sum as i64)).ceil().to_integer() as usize;
        let room = |s: usize| (s as f64) * (1.0 + FINALE_RATIO).powi(2) <= total as f64;
        while room(sum + next_len(sum)) {
            let len = next_len(sum);
            blocks.push(len);
            sum += len;
        }
        let x = (total as f64 / sum as f64).sqrt() - 1.0;
        if x >= r && total > sum {
            let mid = ((x * sum as f64).round() as usize).max(next_len(sum));
            if total >= sum + mid + next_len(sum + mid) {
                blocks.push(mid);
                sum += mid;
                blocks.push(total - sum);
                sum = total;
            }
        }
        while sum < total {
            let len = next_len(sum);
            if sum + len <= total {
                blocks.push(len);
                sum += len;
            } else {
                *blocks.last_mut().expect("non-empty") += total - sum;
                sum = total;
            }
        }
        let m = targets.len().max(1);
        let assignment = (0..blocks.len()).map(|k| k % m).collect();
        Self::new(targets, blocks, assignment, growth_ratio, seed)
    }

    /// Schedule alternating between the equilibria at the ends of the level
    /// set `{liminf = c, limsup = d}` of `f`.
    pub fn for_level_set(
        sys: &SymbolicSystem,
        f: &Observable,
        c: Rational,
        d: Rational,
        growth_ratio: Rational,
        total: usize,
        seed: u64,
    ) -> Result<Self> {
        let zero = Observable::zero(sys)?;
        let mut targets = vec![constrained_value(sys, &[(f.clone(), c)], &zero)?.equilibrium];
        if d != c {
            targets.push(constrained_value(sys, &[(f.clone(), d)], &zero)?.equilibrium);
        }
        Self::plan(targets, growth_ratio, total, seed)
    }

    pub fn total_length(&self) -> usize {
        self.block_lengths.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluedOrbit {
    pub word: Word,
    /// Word length at the end of each block.
    pub block_ends: Vec<usize>,
    pub block_targets: Vec<usize>,
}

/// Concatenates sampled blocks into an admissible word of length `total`.
///
/// The last block is cut or extended so that the word has exactly `total`
/// symbols. The generator is ChaCha8 seeded with the schedule's seed, so the
/// output is a function of `(sys, schedule, total)`.
pub fn glue_orbit(sys: &SymbolicSystem, schedule: &GluingSchedule, total: usize) -> Result<GluedOrbit> {
    sys.require_markov("gluing needs a transition matrix")?;
    if schedule.targets[0].alphabet_size() != sys.alphabet_size() {
        return Err(Error::InvalidInput(
            "targets and system have different alphabets".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
    let marginals: Vec<EmpiricalMeasure> = schedule.targets.iter().map(|t| t.marginal(2)).collect::<Result<_>>()?;
    let mut lengths = Vec::new();
    let mut acc = 0;
    for &len in &schedule.block_lengths {
        if acc >= total {
            break;
        }
        let len = len.min(total - acc);
        lengths.push(len);
        acc += len;
    }
    if acc < total {
        *lengths.last_mut().expect("schedules are non-empty") += total - acc;
    }
    let mut word: Vec<Symbol> = Vec::with_capacity(total);
    let mut block_ends = Vec::with_capacity(lengths.len());
    let mut block_targets = Vec::with_capacity(lengths.len());
    for (k, &len) in lengths.iter().enumerate() {
        let ti = schedule.assignment[k];
        let target = &schedule.targets[ti];
        let prev = word.last().copied();
        let mut best: Option<(f64, Vec<Symbol>)> = None;
        for _ in 0..BLOCK_CANDIDATES {
            let cand = sample_block(sys, target, prev, len, &mut rng)?;
            let dist = if len >= 2 {
                weakstar_distance(&empirical_measure(&cand, sys.alphabet_size(), 2)?, &marginals[ti])?
            } else {
                0.0
            };
            if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                best = Some((dist, cand));
            }
        }
        word.extend(best.expect("at least one candidate").1);
        block_ends.push(word.len());
        block_targets.push(ti);
    }
    debug_assert!(sys.is_admissible(&word));
    Ok(GluedOrbit {
        word: Word(word),
        block_ends,
        block_targets,
    })
}

/// One block of length `len` following `prev`; mixture components get
/// consecutive sub-blocks in proportion to their weights.
fn sample_block<R: Rng>(
    sys: &SymbolicSystem,
    target: &MarkovMixtureMeasure,
    prev: Option<Symbol>,
    len: usize,
    rng: &mut R,
) -> Result<Vec<Symbol>> {
    let comps = target.components();
    let mut out = Vec::with_capacity(len);
    let mut used = 0;
    for (i, (w, m)) in comps.iter().enumerate() {
        let part = if i + 1 == comps.len() {
            len - used
        } else {
            ((w * len as f64).round() as usize).min(len - used)
        };
        if part == 0 {
            continue;
        }
        let last = out.last().copied().or(prev);
        sample_segment(sys, m, last, part, rng, &mut out)?;
        used += part;
    }
    Ok(out)
}

fn sample_segment<R: Rng>(
    sys: &SymbolicSystem,
    m: &MarkovMeasure,
    prev: Option<Symbol>,
    len: usize,
    rng: &mut R,
    out: &mut Vec<Symbol>,
) -> Result<()> {
    let Some(prev) = prev else {
        out.extend(m.sample(rng, len));
        return Ok(());
    };
    let start = m.sample(rng, 1)[0];
    let conn = connector_word(sys, prev, start)?;
    if conn.0.len() + 1 > len {
        m.continue_path(rng, prev as usize, len, out);
        return Ok(());
    }
    let rest = len - conn.0.len() - 1;
    out.extend(conn.0);
    out.push(start);
    m.continue_path(rng, start as usize, rest, out);
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillationReport {
    pub liminf: f64,
    pub limsup: f64,
    /// Smallest checkpoint counted in the tail.
    pub tail_start: usize,
    pub checkpoints_used: usize,
    pub pass: bool,
}

/// Checkpoints growing geometrically by 2% from 1 to `len`.
pub fn default_checkpoints(len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = 1usize;
    while t < len {
        out.push(t);
        t = (t + 1).max((t as f64 * 1.02).ceil() as usize);
    }
    if len > 0 {
        out.push(len);
    }
    out
}

/// Tail minimum and maximum of the running averages of `f` at `checkpoints`
/// (prefix lengths of `w`), counting only checkpoints at or after
/// `sqrt(len)`. Passes when they are within `tol` of `c` and `d`.
pub fn verify_oscillation(
    w: &[Symbol],
    f: &Observable,
    c: Rational,
    d: Rational,
    tol: f64,
    checkpoints: &[usize],
) -> Result<OscillationReport> {
    let k = f.depth();
    if w.len() < k {
        return Err(Error::WordTooShort { len: w.len(), min: k });
    }
    let horizon = w.len() - k + 1;
    let tail_start = (horizon as f64).sqrt().ceil() as usize;
    let mut times: Vec<usize> = checkpoints
        .iter()
        .filter(|&&p| p >= k)
        .map(|&p| p - k + 1)
        .filter(|&t| t >= tail_start && t <= horizon)
        .collect();
    times.dedup();
    if times.len() < 2 {
        return Err(Error::HorizonTooShort(format!(
            "{} checkpoints after time {tail_start}; need at least 2",
            times.len()
        )));
    }
    let stats = birkhoff_stats_with_burn_in(w, f, &times, 0.0)?;
    let (liminf, limsup) = (stats.liminf_estimate, stats.limsup_estimate);
    let pass = (liminf - to_f64(c)).abs() <= tol && (limsup - to_f64(d)).abs() <= tol;
    Ok(OscillationReport {
        liminf,
        limsup,
        tail_start: times[0],
        checkpoints_used: times.len(),
        pass,
    })
}

/// Block-end deviation bound `|c - d| / (1 + N_k / S_{k-1})` for each block
/// after the first: how far the running average can sit from the block
/// target when every block hits its target exactly.
pub fn block_deviation_bounds(schedule: &GluingSchedule, spread: f64) -> Vec<f64> {
    let mut sum = 0usize;
    schedule
        .block_lengths
        .iter()
        .map(|&len| {
            let b = if sum == 0 {
                spread
            } else {
                spread * sum as f64 / (sum + len) as f64
            };
            sum += len;
            b
        })
        .collect()
}

/// Integral of `f` under each schedule target.
pub fn target_integrals(schedule: &GluingSchedule, f: &Observable) -> Result<Vec<f64>> {
    schedule.targets.iter().map(|t| integrate(t, f)).collect()
}

/// Empirical measures of the prefixes of `w` at `sample_times`, merged into
/// clusters of weak* radius [`MERGE_RADIUS`]; returns one representative
/// (the first member) per cluster.
pub fn estimate_limit_set(
    w: &[Symbol],
    alphabet_size: usize,
    depth: usize,
    sample_times: &[usize],
) -> Result<Vec<EmpiricalMeasure>> {
    let mut reps: Vec<EmpiricalMeasure> = Vec::new();
    for &t in sample_times {
        if t < depth || t > w.len() {
            return Err(Error::BadCheckpoints(format!(
                "sample time {t} outside {depth}..={}",
                w.len()
            )));
        }
        let m = empirical_measure(&w[..t], alphabet_size, depth)?;
        let mut merged = false;
        for r in &reps {
            if weakstar_distance(r, &m)? <= MERGE_RADIUS {
                merged = true;
                break;
            }
        }
        if !merged {
            reps.push(m);
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn plan_shapes() {
        let full = SymbolicSystem::full(2).unwrap();
        let t = || MarkovMeasure::bernoulli(&full, &[0.5, 0.5]).unwrap().into();
        let s = GluingSchedule::plan(vec![t(), t()], r(4, 1), 1_000_000, 1).unwrap();
        assert_eq!(s.block_lengths, vec![1, 4, 20, 4975, 995_000]);
        assert_eq!(s.assignment, vec![0, 1, 0, 1, 0]);
        for total in [1, 2, 5, 6, 30, 99, 1000, 12_345] {
            let s = GluingSchedule::plan(vec![t(), t()], r(4, 1), total, 1).unwrap();
            assert_eq!(s.total_length(), total);
        }
        assert!(GluingSchedule::new(vec![t()], vec![1, 3], vec![0, 0], r(4, 1), 0).is_err());
        assert!(GluingSchedule::new(vec![t()], vec![1, 4], vec![0, 0], r(4, 1), 0).is_ok());
    }

    #[test]
    fn oscillates_between_fixed_points() {
        let full = SymbolicSystem::full(2).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let s = GluingSchedule::for_level_set(&full, &ones, r(0, 1), r(1, 1), r(4, 1), 100_000, 7).unwrap();
        let g = glue_orbit(&full, &s, 100_000).unwrap();
        assert_eq!(g.word.0.len(), 100_000);
        let rep = verify_oscillation(&g.word.0, &ones, r(0, 1), r(1, 1), 0.02, &g.block_ends).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(glue_orbit(&full, &s, 100_000).unwrap(), g);
    }

    #[test]
    fn constant_words() {
        let full = SymbolicSystem::full(2).unwrap();
        let ones = Observable::symbol_indicator(&full, 1).unwrap();
        let w = vec![0; 10_000];
        let cp = default_checkpoints(w.len());
        assert!(verify_oscillation(&w, &ones, r(0, 1), r(0, 1), 0.01, &cp).unwrap().pass);
        assert!(!verify_oscillation(&w, &ones, r(0, 1), r(1, 1), 0.01, &cp).unwrap().pass);
        assert!(matches!(
            verify_oscillation(&w, &ones, r(0, 1), r(0, 1), 0.01, &[10_000]),
            Err(Error::HorizonTooShort(_))
        ));
    }

    #[test]
    fn limit_sets() {
        let w: Vec<Symbol> = (0..20_000).map(|i| (i % 2) as Symbol).collect();
        let times: Vec<usize> = (1..=20).map(|k| k * 1000).collect();
        let reps = estimate_limit_set(&w, 2, 1, &times).unwrap();
        assert_eq!(reps.len(), 1);
        assert!((reps[0].frequencies()[0] - 0.5).abs() < 1e-3);
    }
}
