//! Locally constant observables with rational values, and Birkhoff averaging
//! along finite orbit words.
//!
//! A depth-`k` observable assigns a value to every admissible `k`-word. On a
//! finite word of length `n` its Birkhoff average uses the `n - k + 1` full
//! windows; the difference from averaging over `n` orbit points vanishes as
//! `n` grows.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm, to_f64, Rational};
use crate::shift::{Recoding, Symbol, SymbolicSystem, Word};

/// Cap on `alphabet_size^depth`, the size of the dense value table.
const MAX_TABLE: usize = 1 << 22;

#[derive(Clone, PartialEq, Eq)]
pub struct Observable {
    alphabet_size: usize,
    depth: usize,
    values: Vec<Option<Rational>>,
    denominator: i64,
    scaled: Vec<Option<i64>>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.entries().map(|(w, v)| format!("{w}:{v}")).collect();
        f.debug_struct("Observable")
            .field("depth", &self.depth)
            .field("values", &entries)
            .finish()
    }
}

pub(crate) fn word_code(w: &[Symbol], alphabet_size: usize) -> usize {
    w.iter().fold(0, |acc, &s| acc * alphabet_size + s as usize)
}

fn table_size(alphabet_size: usize, depth: usize) -> Result<usize> {
    let mut size = 1usize;
    for _ in 0..depth {
        size = size
            .checked_mul(alphabet_size)
            .filter(|&s| s <= MAX_TABLE)
            .ok_or_else(|| Error::InvalidInput(format!("observable depth {depth} is too large")))?;
    }
    Ok(size)
}

impl Observable {
    /// Builds an observable from `(word, value)` entries; admissible words not
    /// listed get the value 0.
    pub fn from_entries<I, W>(sys: &SymbolicSystem, depth: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (W, Rational)>,
        W: AsRef<[Symbol]>,
    {
        if depth == 0 {
            return Err(Error::InvalidInput("observable depth must be positive".into()));
        }
        let a = sys.alphabet_size();
        let mut values = vec![None; table_size(a, depth)?];
        for w in sys.admissible_words(depth) {
            values[word_code(&w, a)] = Some(Rational::zero());
        }
        for (w, v) in entries {
            let w = w.as_ref();
            if w.len() != depth {
                return Err(Error::DepthMismatch(format!(
                    "entry of length {} in a depth-{depth} observable",
                    w.len()
                )));
            }
            sys.check_admissible(w)?;
            values[word_code(w, a)] = Some(v);
        }
        Self::from_table(a, depth, values)
    }

    pub fn from_fn(sys: &SymbolicSystem, depth: usize, f: impl Fn(&[Symbol]) -> Rational) -> Result<Self> {
        let entries: Vec<_> = sys
            .admissible_words(depth)
            .into_iter()
            .map(|w| {
                let v = f(&w);
                (w, v)
            })
            .collect();
        Self::from_entries(sys, depth, entries)
    }

    fn from_table(alphabet_size: usize, depth: usize, values: Vec<Option<Rational>>) -> Result<Self> {
        let mut denominator = 1i64;
        for v in values.iter().flatten() {
            denominator = lcm(denominator, *v.denom())?;
        }
        let scaled = values
            .iter()
            .map(|v| v.map(|v| (v * denominator).to_integer()))
            .collect();
        Ok(Self {
            alphabet_size,
            depth,
            values,
            denominator,
            scaled,
        })
    }

    /// Depth-1 indicator of a single symbol.
    pub fn symbol_indicator(sys: &SymbolicSystem, s: Symbol) -> Result<Self> {
        Self::word_indicator(sys, &[s])
    }

    /// Indicator of the cylinder of `w`, as a depth-`|w|` observable.
    pub fn word_indicator(sys: &SymbolicSystem, w: &[Symbol]) -> Result<Self> {
        Self::from_entries(sys, w.len(), [(w, Rational::from_integer(1))])
    }

    pub fn constant(sys: &SymbolicSystem, c: Rational) -> Result<Self> {
        Self::from_fn(sys, 1, |_| c)
    }

    pub fn zero(sys: &SymbolicSystem) -> Result<Self> {
        Self::constant(sys, Rational::zero())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Common denominator `D` of all values.
    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn value(&self, w: &[Symbol]) -> Option<Rational> {
        if w.len() != self.depth || w.iter().any(|&s| s as usize >= self.alphabet_size) {
            return None;
        }
        self.values[word_code(w, self.alphabet_size)]
    }

    /// `D * value`, an integer.
    pub fn scaled_value(&self, w: &[Symbol]) -> Option<i64> {
        if w.len() != self.depth || w.iter().any(|&s| s as usize >= self.alphabet_size) {
            return None;
        }
        self.scaled[word_code(w, self.alphabet_size)]
    }

    pub(crate) fn scaled_by_code(&self, code: usize) -> Option<i64> {
        self.scaled[code]
    }

    /// Admissible words with their values, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Word, Rational)> + '_ {
        let a = self.alphabet_size;
        let k = self.depth;
        self.values.iter().enumerate().filter_map(move |(code, v)| {
            v.map(|v| {
                let mut w = vec![0; k];
                let mut c = code;
                for slot in w.iter_mut().rev() {
                    *slot = (c % a) as Symbol;
                    c /= a;
                }
                (Word(w), v)
            })
        })
    }

    pub fn min_value(&self) -> Rational {
        self.values
            .iter()
            .flatten()
            .copied()
            .min()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_value(&self) -> Rational {
        self.values
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_abs(&self) -> Rational {
        self.values
            .iter()
            .flatten()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_zero())
    }

    fn same_space(&self, other: &Observable) -> Result<()> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::DepthMismatch("observables live on different alphabets".into()));
        }
        Ok(())
    }

    /// The same function viewed at a larger depth, reading the last
    /// `self.depth` symbols of each window.
    pub fn lift(&self, depth: usize) -> Result<Observable> {
        if depth < self.depth {
            return Err(Error::DepthMismatch(format!(
                "cannot lower depth {} to {depth}",
                self.depth
            )));
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        let a = self.alphabet_size;
        let size = table_size(a, depth)?;
        let modulus = table_size(a, self.depth)?;
        let extra = depth - self.depth;
        let values = (0..size)
            .map(|code| {
                // Prefix windows must themselves be admissible for the lifted
                // word to be; approximate by requiring every depth-k subwindow.
                let mut ok = true;
                let mut c = code;
                for _ in 0..=extra {
                    if self.values[c % modulus].is_none() {
                        ok = false;
                        break;
                    }
                    c /= a;
                }
                if ok {
                    self.values[code % modulus]
                } else {
                    None
                }
            })
            .collect();
        Observable::from_table(a, depth, values)
    }

    fn combine(&self, other: &Observable, f: impl Fn(Rational, Rational) -> Rational) -> Result<Observable> {
        self.same_space(other)?;
        let depth = self.depth.max(other.depth);
        let (x, y) = (self.lift(depth)?, other.lift(depth)?);
        let values = x
            .values
            .iter()
            .zip(&y.values)
            .map(|(u, v)| match (u, v) {
                (Some(u), Some(v)) => Some(f(*u, *v)),
                _ => None,
            })
            .collect();
        Observable::from_table(self.alphabet_size, depth, values)
    }

    pub fn add(&self, other: &Observable) -> Result<Observable> {
        self.combine(other, |u, v| u + v)
    }

    pub fn sub(&self, other: &Observable) -> Result<Observable> {
        self.combine(other, |u, v| u - v)
    }

    pub fn scale(&self, c: Rational) -> Result<Observable> {
        let values = self.values.iter().map(|v| v.map(|v| v * c)).collect();
        Observable::from_table(self.alphabet_size, self.depth, values)
    }

    /// Values on transitions `i -> j` of a Markov system, row-major: `f(ij)`
    /// for depth 2 and `f(j)` for depth 1. `None` marks forbidden transitions.
    pub fn edge_values(&self, sys: &SymbolicSystem) -> Result<Vec<Option<Rational>>> {
        sys.require_markov("edge values need a transition matrix")?;
        let n = sys.alphabet_size();
        if n != self.alphabet_size {
            return Err(Error::DepthMismatch("observable alphabet differs from system".into()));
        }
        let mut out = vec![None; n * n];
        for i in 0..n {
            for j in sys.successors(i) {
                out[i * n + j] = match self.depth {
                    1 => self.values[j],
                    2 => self.values[i * n + j],
                    d => {
                        return Err(Error::DepthMismatch(format!(
                            "depth {d} observable needs higher-block recoding first"
                        )))
                    }
                };
            }
        }
        Ok(out)
    }

    /// Floating-point edge values; forbidden transitions are `NaN`.
    pub fn edge_values_f64(&self, sys: &SymbolicSystem) -> Result<Vec<f64>> {
        Ok(self
            .edge_values(sys)?
            .into_iter()
            .map(|v| v.map(to_f64).unwrap_or(f64::NAN))
            .collect())
    }

    /// Transfers a depth-`k` observable (`k <= block + 1`) to a depth-2
    /// observable on the recoded system: the edge `u -> v` carries `f` of the
    /// last `k` symbols of `u` followed by the last symbol of `v`.
    pub fn recode(&self, recoding: &Recoding) -> Result<Observable> {
        let block = recoding.block_len();
        if self.depth > block + 1 {
            return Err(Error::DepthMismatch(format!(
                "depth {} exceeds recoding block length + 1 = {}",
                self.depth,
                block + 1
            )));
        }
        let sys = &recoding.system;
        let mut entries = Vec::new();
        for (u, word_u) in recoding.dictionary.iter().enumerate() {
            for v in sys.successors(u) {
                let mut joined = word_u.0.clone();
                joined.push(*recoding.dictionary[v].last().expect("non-empty block"));
                let window = &joined[joined.len() - self.depth..];
                let value = self
                    .value(window)
                    .ok_or_else(|| Error::InvalidInput("observable undefined on a recoded window".into()))?;
                entries.push((vec![u as Symbol, v as Symbol], value));
            }
        }
        Observable::from_entries(sys, 2, entries)
    }
}

/// Scaled prefix sums `D * S_t` for `t = 0 ..= n - k + 1` windows.
pub fn prefix_sums(w: &[Symbol], f: &Observable) -> Result<Vec<i64>> {
    let k = f.depth;
    if w.len() < k {
        return Err(Error::WordTooShort { len: w.len(), min: k });
    }
    let a = f.alphabet_size;
    let modulus = table_size(a, k)?;
    let high = modulus / a;
    let mut sums = Vec::with_capacity(w.len() - k + 2);
    sums.push(0i64);
    let mut code = 0usize;
    let mut acc = 0i64;
    for (i, &s) in w.iter().enumerate() {
        if s as usize >= a {
            return Err(Error::InadmissibleWord(i));
        }
        code = (code % high.max(1)) * a + s as usize;
        if k == 1 {
            code = s as usize;
        }
        if i + 1 >= k {
            let v = f.scaled[code].ok_or(Error::InadmissibleWord(i))?;
            acc = acc
                .checked_add(v)
                .ok_or_else(|| Error::InvalidInput("Birkhoff sum overflows 64 bits".into()))?;
            sums.push(acc);
        }
    }
    Ok(sums)
}

/// Exact Birkhoff average over all full windows of `w`.
pub fn birkhoff_average(w: &[Symbol], f: &Observable) -> Result<Rational> {
    let sums = prefix_sums(w, f)?;
    let windows = (sums.len() - 1) as i64;
    Ok(Rational::new(*sums.last().expect("non-empty"), f.denominator * windows))
}

/// Running Birkhoff averages at checkpoint times, with liminf/limsup estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffStats {
    pub checkpoints: Vec<usize>,
    pub averages: Vec<f64>,
    pub liminf_estimate: f64,
    pub limsup_estimate: f64,
    /// Number of leading checkpoints excluded from the estimates.
    pub burn_in: usize,
}

pub const DEFAULT_BURN_IN: f64 = 0.1;

/// Averages over the first `t` windows for each checkpoint `t`; the
/// estimates are the min and max over checkpoints after the first 10%.
pub fn birkhoff_stats(w: &[Symbol], f: &Observable, checkpoints: &[usize]) -> Result<BirkhoffStats> {
    birkhoff_stats_with_burn_in(w, f, checkpoints, DEFAULT_BURN_IN)
}

pub fn birkhoff_stats_with_burn_in(
    w: &[Symbol],
    f: &Observable,
    checkpoints: &[usize],
    burn_in_fraction: f64,
) -> Result<BirkhoffStats> {
    if !(0.0..1.0).contains(&burn_in_fraction) {
        return Err(Error::BadCheckpoints("burn-in fraction must lie in [0, 1)".into()));
    }
    let sums = prefix_sums(w, f)?;
    let horizon = sums.len() - 1;
    if checkpoints.is_empty() {
        return Err(Error::BadCheckpoints("no checkpoints".into()));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::BadCheckpoints(
            "checkpoints must be positive and strictly increasing".into(),
        ));
    }
    if *checkpoints.last().expect("non-empty") > horizon {
        return Err(Error::BadCheckpoints(format!(
            "checkpoint beyond the {horizon} available windows"
        )));
    }
    let d = f.denominator as f64;
    let averages: Vec<f64> = checkpoints.iter().map(|&t| sums[t] as f64 / (d * t as f64)).collect();
    let burn_in = ((checkpoints.len() as f64 * burn_in_fraction).floor() as usize).min(checkpoints.len() - 1);
    let tail = &averages[burn_in..];
    let liminf_estimate = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let limsup_estimate = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(BirkhoffStats {
        checkpoints: checkpoints.to_vec(),
        averages,
        liminf_estimate,
        limsup_estimate,
        burn_in,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn full2() -> SymbolicSystem {
        SymbolicSystem::full(2).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::from_digits(s).unwrap()
    }

    #[test]
    fn average_examples() {
        let sys = full2();
        let ones = Observable::symbol_indicator(&sys, 1).unwrap();
        assert_eq!(birkhoff_average(&w("0101"), &ones).unwrap(), Rational::new(1, 2));
        assert_eq!(birkhoff_average(&w("0000"), &ones).unwrap(), Rational::zero());
        let pair = Observable::word_indicator(&sys, &[1, 1]).unwrap();
        assert_eq!(birkhoff_average(&w("0110"), &pair).unwrap(), Rational::new(1, 3));
        assert!(matches!(
            birkhoff_average(&w("0"), &pair),
            Err(Error::WordTooShort { .. })
        ));
    }

    #[test]
    fn inadmissible_window_is_rejected() {
        let gm = SymbolicSystem::golden_mean();
        let pair = Observable::word_indicator(&gm, &[0, 1]).unwrap();
        assert!(matches!(
            birkhoff_average(&w("0110"), &pair),
            Err(Error::InadmissibleWord(_))
        ));
    }

    #[test]
    fn stats_examples() {
        let sys = full2();
        let ones = Observable::symbol_indicator(&sys, 1).unwrap();
        let periodic = Word((0..1000).map(|i| (i % 2) as Symbol).collect());
        let cps: Vec<usize> = (1..=10).map(|i| i * 100).collect();
        let st = birkhoff_stats(&periodic, &ones, &cps).unwrap();
        assert!((st.liminf_estimate - 0.5).abs() <= 0.01);
        assert!((st.limsup_estimate - 0.5).abs() <= 0.01);
        assert_eq!(st.burn_in, 1);

        let zeros = Word(vec![0; 1000]);
        let st = birkhoff_stats(&zeros, &ones, &cps).unwrap();
        assert_eq!((st.liminf_estimate, st.limsup_estimate), (0.0, 0.0));

        assert!(matches!(
            birkhoff_stats(&zeros, &ones, &[10, 5]),
            Err(Error::BadCheckpoints(_))
        ));
        assert!(matches!(
            birkhoff_stats(&zeros, &ones, &[1001]),
            Err(Error::BadCheckpoints(_))
        ));
        assert!(matches!(
            birkhoff_stats(&zeros, &ones, &[]),
            Err(Error::BadCheckpoints(_))
        ));
    }

    #[test]
    fn arithmetic_and_lifting() {
        let sys = full2();
        let ones = Observable::symbol_indicator(&sys, 1).unwrap();
        let roof = Observable::constant(&sys, Rational::from_integer(1))
            .unwrap()
            .add(&ones)
            .unwrap();
        assert_eq!(roof.value(&[1]), Some(Rational::from_integer(2)));
        let lifted = ones.lift(2).unwrap();
        assert_eq!(lifted.value(&[1, 0]), Some(Rational::zero()));
        assert_eq!(lifted.value(&[0, 1]), Some(Rational::from_integer(1)));
        let third = ones.scale(Rational::new(1, 3)).unwrap();
        assert_eq!(third.denominator(), 3);
        assert_eq!(third.scaled_value(&[1]), Some(1));
    }

    #[test]
    fn edge_value_conventions() {
        let gm = SymbolicSystem::golden_mean();
        let ones = Observable::symbol_indicator(&gm, 1).unwrap();
        let e = ones.edge_values(&gm).unwrap();
        assert_eq!(
            e,
            vec![
                Some(Rational::zero()),
                Some(Rational::from_integer(1)),
                Some(Rational::zero()),
                None
            ]
        );
    }

    #[test]
    fn recoded_observable_preserves_sums() {
        let gm = SymbolicSystem::golden_mean();
        let r = crate::shift::higher_block_recode(&gm, 3).unwrap();
        let f = Observable::word_indicator(&gm, &[0, 1, 0]).unwrap();
        let g = f.recode(&r).unwrap();
        let word = w("0100100101");
        let coded = r.recode_word(&word).unwrap();
        assert_eq!(
            prefix_sums(&word, &f).unwrap().last(),
            prefix_sums(&coded, &g).unwrap().last()
        );
    }

    proptest! {
        #[test]
        fn average_is_bounded_and_homogeneous(bits in proptest::collection::vec(0u16..2, 3..60), c in 1i64..7) {
            let sys = full2();
            let f = Observable::from_entries(&sys, 2, [
                (vec![0u16, 1], Rational::new(3, 2)),
                (vec![1u16, 1], Rational::new(-2, 5)),
            ]).unwrap();
            let avg = birkhoff_average(&bits, &f).unwrap();
            prop_assert!(avg >= f.min_value() && avg <= f.max_value());
            let scaled = f.scale(Rational::from_integer(c)).unwrap();
            prop_assert_eq!(birkhoff_average(&bits, &scaled).unwrap(), avg * c);
        }

        #[test]
        fn shift_relation(bits in proptest::collection::vec(0u16..2, 4..60)) {
            // |S_n(w) - S_{n-1}(Tw)| <= max |f|
            let sys = full2();
            let f = Observable::from_entries(&sys, 2, [
                (vec![1u16, 0], Rational::new(5, 3)),
                (vec![0u16, 0], Rational::new(-1, 2)),
            ]).unwrap();
            let s_n = *prefix_sums(&bits, &f).unwrap().last().unwrap();
            let s_tail = *prefix_sums(&bits[1..], &f).unwrap().last().unwrap();
            let diff = Rational::new((s_n - s_tail).abs(), f.denominator());
            prop_assert!(diff <= f.max_abs());
        }
    }
}
