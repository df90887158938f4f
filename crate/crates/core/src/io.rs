//! TOML file formats for systems, observables, measures and gluing
//! schedules, and a plain-text format for words.
//!
//! ```toml
//! # system
//! kind = "sft"
//! alphabet_size = 2
//! transitions = [[0, 0], [0, 1], [1, 0]]
//!
//! # observable (unlisted admissible words are 0)
//! depth = 1
//! [[values]]
//! word = [1]
//! num = 1
//! den = 1
//!
//! # measure
//! [[components]]
//! weight = 1.0
//! transitions = [0.5, 0.5, 1.0, 0.0]
//!
//! # schedule (target paths relative to this file)
//! targets = ["low.toml", "high.toml"]
//! growth_ratio = "4"
//! seed = 1
//! length = 1000000
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluer::GluingSchedule;
use crate::measure::{MarkovMeasure, MarkovMixtureMeasure};
use crate::observable::Observable;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::shift::{validate_system, RawSystem, Symbol, SymbolicSystem, Word};

fn parse_toml<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Parse(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_system(text: &str) -> Result<SymbolicSystem> {
    validate_system(&parse_toml::<RawSystem>(text, "system file")?)
}

pub fn system_to_string(sys: &SymbolicSystem) -> Result<String> {
    to_toml(&sys.to_raw())
}

pub fn load_system(path: &Path) -> Result<SymbolicSystem> {
    parse_system(&read(path)?)
}

pub fn save_system(path: &Path, sys: &SymbolicSystem) -> Result<()> {
    write(path, &system_to_string(sys)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct ObservableFile {
    depth: usize,
    #[serde(default)]
    values: Vec<ValueEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ValueEntry {
    word: Vec<Symbol>,
    num: i64,
    #[serde(default = "one")]
    den: i64,
}

fn one() -> i64 {
    1
}

pub fn parse_observable(text: &str, sys: &SymbolicSystem) -> Result<Observable> {
    let file: ObservableFile = parse_toml(text, "observable file")?;
    let entries = file
        .values
        .into_iter()
        .map(|v| {
            if v.den == 0 {
                return Err(Error::Parse(format!("zero denominator for word {:?}", v.word)));
            }
            Ok((v.word, Rational::new(v.num, v.den)))
        })
        .collect::<Result<Vec<_>>>()?;
    Observable::from_entries(sys, file.depth, entries)
}

/// Lists every admissible word, zeros included.
pub fn observable_to_string(f: &Observable) -> Result<String> {
    let values = f
        .entries()
        .map(|(w, v)| ValueEntry {
            word: w.0,
            num: *v.numer(),
            den: *v.denom(),
        })
        .collect();
    to_toml(&ObservableFile {
        depth: f.depth(),
        values,
    })
}

pub fn load_observable(path: &Path, sys: &SymbolicSystem) -> Result<Observable> {
    parse_observable(&read(path)?, sys)
}

pub fn save_observable(path: &Path, f: &Observable) -> Result<()> {
    write(path, &observable_to_string(f)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct MeasureFile {
    components: Vec<ComponentEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComponentEntry {
    weight: f64,
    transitions: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stationary: Option<Vec<f64>>,
}

pub fn parse_measure(text: &str, sys: &SymbolicSystem) -> Result<MarkovMixtureMeasure> {
    let file: MeasureFile = parse_toml(text, "measure file")?;
    if file.components.is_empty() {
        return Err(Error::InvalidMeasure("measure file lists no components".into()));
    }
    let components = file
        .components
        .into_iter()
        .map(|c| Ok((c.weight, MarkovMeasure::new(sys, c.transitions, c.stationary)?)))
        .collect::<Result<Vec<_>>>()?;
    MarkovMixtureMeasure::new(components)
}

/// Writes stationary vectors too, so loading reproduces the measure exactly.
pub fn measure_to_string(m: &MarkovMixtureMeasure) -> Result<String> {
    let components = m
        .components()
        .iter()
        .map(|(w, c)| ComponentEntry {
            weight: *w,
            transitions: c.transition_probabilities().to_vec(),
            stationary: Some(c.stationary().to_vec()),
        })
        .collect();
    to_toml(&MeasureFile { components })
}

pub fn load_measure(path: &Path, sys: &SymbolicSystem) -> Result<MarkovMixtureMeasure> {
    parse_measure(&read(path)?, sys)
}

pub fn save_measure(path: &Path, m: &MarkovMixtureMeasure) -> Result<()> {
    write(path, &measure_to_string(m)?)
}

/// Contents of a schedule file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub targets: Vec<PathBuf>,
    pub growth_ratio: String,
    pub seed: u64,
    pub length: usize,
}

impl ScheduleFile {
    pub fn growth_ratio(&self) -> Result<Rational> {
        parse_rational(&self.growth_ratio)
    }
}

pub fn parse_schedule(text: &str) -> Result<ScheduleFile> {
    let file: ScheduleFile = parse_toml(text, "schedule file")?;
    file.growth_ratio()?;
    Ok(file)
}

/// Loads a schedule file and its target measures and plans the blocks.
pub fn load_schedule(path: &Path, sys: &SymbolicSystem) -> Result<(ScheduleFile, GluingSchedule)> {
    let file = parse_schedule(&read(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let targets = file
        .targets
        .iter()
        .map(|t| load_measure(&dir.join(t), sys))
        .collect::<Result<Vec<_>>>()?;
    let schedule = GluingSchedule::plan(targets, file.growth_ratio()?, file.length, file.seed)?;
    Ok((file, schedule))
}

pub fn schedule_to_string(file: &ScheduleFile) -> Result<String> {
    to_toml(file)
}

pub fn save_schedule(path: &Path, file: &ScheduleFile) -> Result<()> {
    write(path, &schedule_to_string(file)?)
}

/// Formats a rational for a schedule file.
pub fn ratio_string(r: Rational) -> String {
    format_rational(r)
}

/// A word with optional block boundaries, as stored in word files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFile {
    pub word: Word,
    pub block_ends: Vec<usize>,
}

const SYMBOLS_PER_LINE: usize = 64;

/// Whitespace-separated symbols; `#` starts a comment, and a comment of the
/// form `# block_ends: 1 5 25` records block boundaries.
pub fn parse_word(text: &str) -> Result<WordFile> {
    let mut symbols = Vec::new();
    let mut block_ends = Vec::new();
    for line in text.lines() {
        let (data, comment) = match line.find('#') {
            Some(i) => (&line[..i], Some(&line[i + 1..])),
            None => (line, None),
        };
        for tok in data.split_whitespace() {
            symbols.push(
                tok.parse::<Symbol>()
                    .map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))?,
            );
        }
        if let Some(rest) = comment.and_then(|c| c.trim().strip_prefix("block_ends:")) {
            for tok in rest.split_whitespace() {
                block_ends.push(
                    tok.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad block end {tok:?}")))?,
                );
            }
        }
    }
    Ok(WordFile {
        word: Word(symbols),
        block_ends,
    })
}

pub fn word_to_string(w: &WordFile) -> String {
    let mut out = String::new();
    if !w.block_ends.is_empty() {
        out.push_str("# block_ends:");
        for e in &w.block_ends {
            out.push(' ');
            out.push_str(&e.to_string());
        }
        out.push('\n');
    }
    for chunk in w.word.0.chunks(SYMBOLS_PER_LINE) {
        let line: Vec<String> = chunk.iter().map(|s| s.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_word(path: &Path) -> Result<WordFile> {
    parse_word(&read(path)?)
}

pub fn save_word(path: &Path, w: &WordFile) -> Result<()> {
    write(path, &word_to_string(w))
}
