//! Symbolic phase spaces: full shifts, mixing subshifts of finite type and
//! beta-shifts, together with words, admissibility, higher-block recoding and
//! the constructive specification gap.
//!
//! Metric convention: two sequences are at distance `2^{-i}` where `i` is the
//! first coordinate at which they differ. For `eps` in `(1/2, 1)` the points
//! `T^j x` and `T^j y` are more than `eps` apart exactly when `x_j != y_j`, so
//! every `eps`-parameterized notion in this crate reduces to coordinate
//! disagreement.

pub mod beta;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A symbol of the alphabet `{0, .., alphabet_size - 1}`.
pub type Symbol = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Full,
    Sft,
    Beta,
}

/// On-disk description of a system, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSystem {
    pub kind: SystemKind,
    pub alphabet_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<Vec<[Symbol; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_expansion: Option<Vec<Symbol>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion_depth: Option<usize>,
}

/// A validated one-sided symbolic system.
///
/// Full shifts and SFTs carry a primitive 0/1 transition matrix. Beta-shifts
/// carry the quasi-greedy expansion of 1 truncated to `expansion_depth`; all
/// word operations on them are bounded by that depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSystem {
    kind: SystemKind,
    alphabet_size: usize,
    allowed: Vec<bool>,
    beta_expansion: Vec<Symbol>,
}

impl SymbolicSystem {
    pub fn full(alphabet_size: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        check_alphabet_bound(alphabet_size)?;
        Ok(Self {
            kind: SystemKind::Full,
            alphabet_size,
            allowed: vec![true; alphabet_size * alphabet_size],
            beta_expansion: Vec::new(),
        })
    }

    /// A subshift of finite type given by its allowed transitions. Rejects
    /// systems whose transition matrix is not primitive.
    pub fn sft(alphabet_size: usize, transitions: &[(Symbol, Symbol)]) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        check_alphabet_bound(alphabet_size)?;
        let mut allowed = vec![false; alphabet_size * alphabet_size];
        for &(a, b) in transitions {
            let (a, b) = (a as usize, b as usize);
            if a >= alphabet_size || b >= alphabet_size {
                return Err(Error::InvalidInput(format!(
                    "transition ({a}, {b}) outside alphabet of size {alphabet_size}"
                )));
            }
            allowed[a * alphabet_size + b] = true;
        }
        let sys = Self {
            kind: SystemKind::Sft,
            alphabet_size,
            allowed,
            beta_expansion: Vec::new(),
        };
        for s in 0..alphabet_size {
            if !(0..alphabet_size).any(|t| sys.allows(s, t)) {
                return Err(Error::NonPrimitive(format!("symbol {s} has no outgoing transition")));
            }
            if !(0..alphabet_size).any(|t| sys.allows(t, s)) {
                return Err(Error::NonPrimitive(format!("symbol {s} has no incoming transition")));
            }
        }
        if primitivity_exponent(&sys.allowed, alphabet_size).is_none() {
            return Err(Error::NonPrimitive(
                "no power of the transition matrix up to alphabet_size^2 is positive".into(),
            ));
        }
        Ok(sys)
    }

    /// The golden mean shift: binary sequences without two consecutive 1s.
    pub fn golden_mean() -> Self {
        Self::sft(2, &[(0, 0), (0, 1), (1, 0)]).expect("golden mean shift is primitive")
    }

    /// A beta-shift given by the truncated quasi-greedy expansion of 1. The
    /// expansion length is the truncation depth.
    pub fn beta(expansion: Vec<Symbol>) -> Result<Self> {
        if expansion.is_empty() {
            return Err(Error::BadBetaExpansion("expansion is empty".into()));
        }
        let alphabet_size = expansion[0] as usize + 1;
        for (i, &s) in expansion.iter().enumerate() {
            if s as usize >= alphabet_size {
                return Err(Error::BadBetaExpansion(format!(
                    "digit {s} at position {i} exceeds the leading digit"
                )));
            }
        }
        if alphabet_size < 2 {
            return Err(Error::BadBetaExpansion("leading digit must be at least 1".into()));
        }
        for k in 1..expansion.len() {
            let tail = &expansion[k..];
            if tail > &expansion[..tail.len()] {
                return Err(Error::BadBetaExpansion(format!(
                    "shift by {k} is lexicographically larger than the expansion"
                )));
            }
        }
        Ok(Self {
            kind: SystemKind::Beta,
            alphabet_size,
            allowed: Vec::new(),
            beta_expansion: expansion,
        })
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn is_markov(&self) -> bool {
        self.kind != SystemKind::Beta
    }

    pub fn beta_expansion(&self) -> &[Symbol] {
        &self.beta_expansion
    }

    /// Truncation depth of a beta-shift (0 for Markov systems).
    pub fn expansion_depth(&self) -> usize {
        self.beta_expansion.len()
    }

    /// Whether `a -> b` is an allowed transition. Always false for beta-shifts,
    /// whose admissibility is not a two-symbol rule.
    #[inline]
    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.kind != SystemKind::Beta && self.allowed[a * self.alphabet_size + b]
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.alphabet_size).filter(move |&b| self.allows(a, b))
    }

    pub fn edge_count(&self) -> usize {
        self.allowed.iter().filter(|&&x| x).count()
    }

    /// Row-major 0/1 adjacency (empty for beta-shifts).
    pub fn adjacency(&self) -> &[bool] {
        &self.allowed
    }

    pub fn transitions(&self) -> Vec<(Symbol, Symbol)> {
        let n = self.alphabet_size;
        (0..n * n)
            .filter(|&k| self.allowed.get(k).copied().unwrap_or(false))
            .map(|k| ((k / n) as Symbol, (k % n) as Symbol))
            .collect()
    }

    pub(crate) fn require_markov(&self, what: &'static str) -> Result<()> {
        if self.is_markov() {
            Ok(())
        } else {
            Err(Error::UnsupportedSystem(what))
        }
    }

    /// Checks admissibility; returns the first offending position on failure.
    pub fn check_admissible(&self, w: &[Symbol]) -> Result<()> {
        if let Some(i) = w.iter().position(|&s| s as usize >= self.alphabet_size) {
            return Err(Error::InadmissibleWord(i));
        }
        match self.kind {
            SystemKind::Full => Ok(()),
            SystemKind::Sft => match w.windows(2).position(|p| !self.allows(p[0] as usize, p[1] as usize)) {
                Some(i) => Err(Error::InadmissibleWord(i + 1)),
                None => Ok(()),
            },
            SystemKind::Beta => {
                if w.len() > self.expansion_depth() {
                    return Err(Error::WordTooLong {
                        len: w.len(),
                        max: self.expansion_depth(),
                    });
                }
                match first_parry_violation(&self.beta_expansion, w) {
                    Some(i) => Err(Error::InadmissibleWord(i)),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn is_admissible(&self, w: &[Symbol]) -> bool {
        self.check_admissible(w).is_ok()
    }

    /// All admissible words of length `n` in lexicographic order.
    pub fn admissible_words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.extend_words(n, &mut cur, &mut out);
        out
    }

    fn extend_words(&self, n: usize, cur: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(Word(cur.clone()));
            return;
        }
        for s in 0..self.alphabet_size as Symbol {
            cur.push(s);
            let ok = match self.kind {
                SystemKind::Full => true,
                SystemKind::Sft => cur.len() < 2 || self.allows(cur[cur.len() - 2] as usize, s as usize),
                // A prefix of an admissible word is admissible, so checking
                // every prefix is exact.
                SystemKind::Beta => first_parry_violation(&self.beta_expansion, cur).is_none(),
            };
            if ok {
                self.extend_words(n, cur, out);
            }
            cur.pop();
        }
    }

    pub fn to_raw(&self) -> RawSystem {
        match self.kind {
            SystemKind::Full => RawSystem {
                kind: SystemKind::Full,
                alphabet_size: self.alphabet_size,
                transitions: None,
                beta_expansion: None,
                expansion_depth: None,
            },
            SystemKind::Sft => RawSystem {
                kind: SystemKind::Sft,
                alphabet_size: self.alphabet_size,
                transitions: Some(self.transitions().into_iter().map(|(a, b)| [a, b]).collect()),
                beta_expansion: None,
                expansion_depth: None,
            },
            SystemKind::Beta => RawSystem {
                kind: SystemKind::Beta,
                alphabet_size: self.alphabet_size,
                transitions: None,
                beta_expansion: Some(self.beta_expansion.clone()),
                expansion_depth: Some(self.expansion_depth()),
            },
        }
    }
}

fn check_alphabet_bound(n: usize) -> Result<()> {
    if n > Symbol::MAX as usize {
        return Err(Error::InvalidInput(format!("alphabet of size {n} is too large")));
    }
    Ok(())
}

/// Position of the first suffix of `w` that is lexicographically larger than
/// the expansion prefix of the same length.
fn first_parry_violation(expansion: &[Symbol], w: &[Symbol]) -> Option<usize> {
    // Scanning end positions keeps the reported index at the symbol that
    // completes the violation.
    for end in 1..=w.len() {
        for start in 0..end {
            let suffix = &w[start..end];
            let prefix = &expansion[..suffix.len().min(expansion.len())];
            if suffix.len() <= expansion.len() && suffix > prefix {
                return Some(end - 1);
            }
        }
    }
    None
}

/// Validates a raw description into a system.
pub fn validate_system(raw: &RawSystem) -> Result<SymbolicSystem> {
    match raw.kind {
        SystemKind::Full => SymbolicSystem::full(raw.alphabet_size),
        SystemKind::Sft => {
            let transitions = raw
                .transitions
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("sft system requires a transitions list".into()))?;
            let pairs: Vec<_> = transitions.iter().map(|p| (p[0], p[1])).collect();
            SymbolicSystem::sft(raw.alphabet_size, &pairs)
        }
        SystemKind::Beta => {
            if raw.alphabet_size == 0 {
                return Err(Error::EmptyAlphabet);
            }
            let expansion = raw
                .beta_expansion
                .clone()
                .ok_or_else(|| Error::BadBetaExpansion("beta system requires beta_expansion".into()))?;
            if let Some(depth) = raw.expansion_depth {
                if depth != expansion.len() {
                    return Err(Error::BadBetaExpansion(format!(
                        "expansion has {} digits but expansion_depth is {depth}",
                        expansion.len()
                    )));
                }
            }
            let sys = SymbolicSystem::beta(expansion)?;
            if sys.alphabet_size != raw.alphabet_size {
                return Err(Error::BadBetaExpansion(format!(
                    "leading digit implies alphabet size {}, file says {}",
                    sys.alphabet_size, raw.alphabet_size
                )));
            }
            Ok(sys)
        }
    }
}

/// Smallest `k <= n^2` with `A^k` entrywise positive, if any.
fn primitivity_exponent(allowed: &[bool], n: usize) -> Option<usize> {
    let words = n.div_ceil(64);
    let to_bits = |row: &[bool]| {
        let mut bits = vec![0u64; words];
        for (j, &x) in row.iter().enumerate() {
            if x {
                bits[j / 64] |= 1 << (j % 64);
            }
        }
        bits
    };
    let base: Vec<Vec<u64>> = (0..n).map(|i| to_bits(&allowed[i * n..(i + 1) * n])).collect();
    let full = |row: &[u64]| (0..n).all(|j| row[j / 64] >> (j % 64) & 1 == 1);
    let mut power = base.clone();
    for k in 1..=n * n {
        if power.iter().all(|r| full(r)) {
            return Some(k);
        }
        // row_i(A^{k+1}) = OR over j in row_i(A^k) of row_j(A)
        power = power
            .iter()
            .map(|row| {
                let mut next = vec![0u64; words];
                for j in 0..n {
                    if row[j / 64] >> (j % 64) & 1 == 1 {
                        for (dst, src) in next.iter_mut().zip(&base[j]) {
                            *dst |= *src;
                        }
                    }
                }
                next
            })
            .collect();
    }
    None
}

/// A finite word over the alphabet of some system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a string of decimal digits, e.g. `"0101"`.
    pub fn from_digits(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as Symbol)
                    .ok_or_else(|| Error::Parse(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl AsRef<[Symbol]> for Word {
    fn as_ref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))?;
        }
        Ok(())
    }
}

/// The specification gap of a mixing SFT: the least `m` with `A^m > 0`.
/// For mixing SFTs it does not depend on `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TransitionGap(pub usize);

impl TransitionGap {
    pub fn m(self) -> usize {
        self.0
    }
}

pub fn transition_gap(sys: &SymbolicSystem) -> Result<TransitionGap> {
    sys.require_markov("transition gap needs a transition matrix")?;
    let m = primitivity_exponent(&sys.allowed, sys.alphabet_size).expect("validated systems are primitive");
    Ok(TransitionGap(m))
}

/// Lexicographically smallest among the shortest words `w` with
/// `from . w . to` admissible. Its length is below the transition gap.
pub fn connector_word(sys: &SymbolicSystem, from: Symbol, to: Symbol) -> Result<Word> {
    sys.require_markov("connectors need a transition matrix")?;
    let n = sys.alphabet_size;
    let (from, to) = (from as usize, to as usize);
    if from >= n || to >= n {
        return Err(Error::InvalidInput("connector endpoint outside alphabet".into()));
    }
    // dist[v] = fewest edges from v to `to` (0 at `to` itself)
    let mut dist = vec![usize::MAX; n];
    dist[to] = 0;
    let mut queue = VecDeque::from([to]);
    while let Some(v) = queue.pop_front() {
        for u in 0..n {
            if sys.allows(u, v) && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    // At least one edge must leave `from`.
    let edges = 1 + sys
        .successors(from)
        .map(|s| dist[s])
        .min()
        .expect("primitive systems have successors");
    let mut word = Vec::with_capacity(edges - 1);
    let mut cur = from;
    for remaining in (1..edges).rev() {
        let next = sys
            .successors(cur)
            .find(|&s| dist[s] == remaining)
            .expect("a shortest path exists");
        word.push(next as Symbol);
        cur = next;
    }
    debug_assert!(sys.allows(cur, to));
    Ok(Word(word))
}

/// Result of higher-block recoding: the recoded system and the dictionary
/// mapping each new symbol to its `(k-1)`-word.
#[derive(Debug, Clone)]
pub struct Recoding {
    pub system: SymbolicSystem,
    pub dictionary: Vec<Word>,
    block: usize,
    index: HashMap<Vec<Symbol>, Symbol>,
}

impl Recoding {
    /// Length of the blocks that became symbols (`k - 1`).
    pub fn block_len(&self) -> usize {
        self.block
    }

    pub fn symbol_of(&self, block: &[Symbol]) -> Option<Symbol> {
        self.index.get(block).copied()
    }

    /// Recodes a word of length `n >= k - 1` into its `n - k + 2` overlapping blocks.
    pub fn recode_word(&self, w: &[Symbol]) -> Result<Word> {
        if w.len() < self.block {
            return Err(Error::WordTooShort {
                len: w.len(),
                min: self.block,
            });
        }
        w.windows(self.block)
            .enumerate()
            .map(|(i, b)| self.symbol_of(b).ok_or(Error::InadmissibleWord(i)))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Inverse of [`Recoding::recode_word`].
    pub fn decode_word(&self, w: &[Symbol]) -> Word {
        let mut out = Vec::new();
        if let Some(&first) = w.first() {
            out.extend_from_slice(&self.dictionary[first as usize]);
            for &s in &w[1..] {
                out.push(*self.dictionary[s as usize].last().expect("non-empty block"));
            }
        }
        Word(out)
    }
}

/// The `k`-block presentation: symbols are admissible `(k-1)`-words and
/// `u -> v` is allowed when the two words overlap in `k-2` symbols.
pub fn higher_block_recode(sys: &SymbolicSystem, k: usize) -> Result<Recoding> {
    sys.require_markov("recoding needs a transition matrix")?;
    if k < 2 {
        return Err(Error::InvalidInput("recoding needs k >= 2".into()));
    }
    let block = k - 1;
    let dictionary = sys.admissible_words(block);
    let index: HashMap<Vec<Symbol>, Symbol> = dictionary
        .iter()
        .enumerate()
        .map(|(i, w)| (w.0.clone(), i as Symbol))
        .collect();
    let mut transitions = Vec::new();
    for (i, u) in dictionary.iter().enumerate() {
        for last in sys.successors(*u.last().expect("block >= 1") as usize) {
            let mut next = u[1..].to_vec();
            next.push(last as Symbol);
            if let Some(&j) = index.get(&next) {
                transitions.push((i as Symbol, j));
            }
        }
    }
    let system = SymbolicSystem::sft(dictionary.len(), &transitions)?;
    Ok(Recoding {
        system,
        dictionary,
        block,
        index,
    })
}

/// Parry criterion: every suffix of `w` is lexicographically at most the
/// expansion prefix of the same length.
pub fn beta_admissible(sys: &SymbolicSystem, w: &[Symbol]) -> Result<bool> {
    if sys.kind() != SystemKind::Beta {
        return Err(Error::UnsupportedSystem("beta admissibility needs a beta-shift"));
    }
    if w.len() > sys.expansion_depth() {
        return Err(Error::WordTooLong {
            len: w.len(),
            max: sys.expansion_depth(),
        });
    }
    if w.iter().any(|&s| s as usize >= sys.alphabet_size) {
        return Ok(false);
    }
    Ok(first_parry_violation(&sys.beta_expansion, w).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_beta(depth: usize) -> SymbolicSystem {
        SymbolicSystem::beta((0..depth).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect()).unwrap()
    }

    #[test]
    fn validates_basic_systems() {
        assert!(SymbolicSystem::full(2).is_ok());
        assert!(SymbolicSystem::sft(2, &[(0, 0), (0, 1), (1, 0)]).is_ok());
        assert!(matches!(
            SymbolicSystem::sft(2, &[(0, 1), (1, 0)]),
            Err(Error::NonPrimitive(_))
        ));
        assert_eq!(SymbolicSystem::full(0), Err(Error::EmptyAlphabet));
        assert!(matches!(SymbolicSystem::sft(2, &[(0, 0)]), Err(Error::NonPrimitive(_))));
    }

    #[test]
    fn raw_validation_round_trip() {
        let gm = SymbolicSystem::golden_mean();
        assert_eq!(validate_system(&gm.to_raw()).unwrap(), gm);
        let beta = golden_beta(8);
        assert_eq!(validate_system(&beta.to_raw()).unwrap(), beta);
        let bad = RawSystem {
            kind: SystemKind::Beta,
            alphabet_size: 2,
            transitions: None,
            beta_expansion: Some(vec![1, 0, 1, 1]),
            expansion_depth: Some(4),
        };
        assert!(matches!(validate_system(&bad), Err(Error::BadBetaExpansion(_))));
        let depth_mismatch = RawSystem {
            expansion_depth: Some(3),
            beta_expansion: Some(vec![1, 0, 1, 0]),
            ..bad
        };
        assert!(matches!(
            validate_system(&depth_mismatch),
            Err(Error::BadBetaExpansion(_))
        ));
    }

    #[test]
    fn gaps() {
        assert_eq!(transition_gap(&SymbolicSystem::full(2).unwrap()).unwrap().m(), 1);
        assert_eq!(transition_gap(&SymbolicSystem::golden_mean()).unwrap().m(), 2);
        assert!(transition_gap(&golden_beta(4)).is_err());
    }

    #[test]
    fn connectors() {
        let full = SymbolicSystem::full(2);
        assert_eq!(connector_word(&full.unwrap(), 1, 1).unwrap(), Word::empty());
        let gm = SymbolicSystem::golden_mean();
        assert_eq!(connector_word(&gm, 1, 1).unwrap(), Word::from_digits("0").unwrap());
        assert_eq!(connector_word(&gm, 0, 1).unwrap(), Word::empty());
    }

    #[test]
    fn recoding_examples() {
        let full = SymbolicSystem::full(2).unwrap();
        let r = higher_block_recode(&full, 2).unwrap();
        assert_eq!(r.system.alphabet_size(), 2);
        assert_eq!(r.system.edge_count(), 4);

        let gm = SymbolicSystem::golden_mean();
        let r = higher_block_recode(&gm, 3).unwrap();
        let dict: Vec<String> = r.dictionary.iter().map(|w| w.to_string()).collect();
        assert_eq!(dict, ["00", "01", "10"]);
        assert_eq!(r.system.edge_count(), 5);

        let r = higher_block_recode(&full, 3).unwrap();
        assert_eq!(r.system.alphabet_size(), 4);
    }

    #[test]
    fn recode_and_decode_are_inverse() {
        let gm = SymbolicSystem::golden_mean();
        let r = higher_block_recode(&gm, 3).unwrap();
        let w = Word::from_digits("0100101").unwrap();
        let coded = r.recode_word(&w).unwrap();
        assert_eq!(coded.len(), w.len() - 1);
        assert!(r.system.is_admissible(&coded));
        assert_eq!(r.decode_word(&coded), w);
    }

    #[test]
    fn parry_examples() {
        let b = golden_beta(10);
        assert!(!beta_admissible(&b, &[1, 1]).unwrap());
        assert!(beta_admissible(&b, &[0, 1, 0, 1]).unwrap());
        assert!(beta_admissible(&b, &[]).unwrap());
        assert!(matches!(beta_admissible(&b, &[0; 11]), Err(Error::WordTooLong { .. })));
    }

    #[test]
    fn admissible_word_listing_matches_filter() {
        let gm = SymbolicSystem::golden_mean();
        let listed = gm.admissible_words(4);
        let strings: Vec<String> = listed.iter().map(|w| w.to_string()).collect();
        assert_eq!(
            strings,
            ["0000", "0001", "0010", "0100", "0101", "1000", "1001", "1010"]
        );
    }

    #[test]
    fn word_display_and_parse() {
        let w = Word::from_digits("0110").unwrap();
        assert_eq!(w.to_string(), "0110");
        assert_eq!(Word::new(vec![12, 3]).to_string(), "12.3");
        assert!(Word::from_digits("01x").is_err());
    }
}
