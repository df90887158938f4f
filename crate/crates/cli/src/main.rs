//! `levelset`: level-set spectra, counting oracles and orbit gluing from the
//! command line.
//!
//! Results go to stdout as CSV (or to `--out`); `--record` adds a TOML run
//! record. Exit status 2 means bad input, 3 means a numerical method failed
//! to converge.

mod record;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use levelset_core::gluer::default_checkpoints;
use levelset_core::io::{self, ScheduleFile, WordFile};
use levelset_core::oracle::{growth_rate, MeasureBall, SeparatedMode};
use levelset_core::rational::{parse_grid, to_f64};
use levelset_core::{
    average_range, count_level_words, count_separated, count_words, equilibrium_state, format_rational, glue_orbit,
    joint_level_value, level_set_value, markov_entropy, parse_rational, pressure, reg_irreg_value, spectrum_curve,
    suspension_level_value, verify_oscillation, EmpiricalMeasure, Error, GluingSchedule, LevelSetQuery,
    MarkovMixtureMeasure, Observable, Rational, RoofFunction, SpectrumResult, SymbolicSystem,
};

use record::RunRecord;
use table::{num, nums, Table};

const THREADS_VAR: &str = "LEVELSET_THREADS";

#[derive(Parser)]
#[command(
    name = "levelset",
    version,
    about = "Level sets of Birkhoff averages on symbolic systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// System file (TOML).
    #[arg(long)]
    system: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a TOML run record here.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Include wall time in the run record.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum curve alpha -> sup { h(mu) + int psi : int f = alpha } on a grid.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        obs: PathBuf,
        /// Weighting potential; zero when absent.
        #[arg(long)]
        potential: Option<PathBuf>,
        /// `start:stop:step`, inclusive, exact decimals or fractions.
        #[arg(long)]
        grid: String,
    },
    /// Value of the level set {liminf = c, limsup = d}.
    Level {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        obs: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        potential: Option<PathBuf>,
        /// Directory for the endpoint equilibrium measures.
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Level set with extra observables pinned to exact averages.
    Joint {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        obs: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        /// `FILE=VALUE`, repeatable.
        #[arg(long = "pin", required = true)]
        pins: Vec<String>,
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Points regular for phi1 and irregular for phi2.
    Regirr {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi1: PathBuf,
        #[arg(long)]
        phi2: PathBuf,
        /// Prescribed average of phi1; free when absent.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        potential: Option<PathBuf>,
    },
    /// Topological pressure and equilibrium state of a potential.
    Pressure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: PathBuf,
        /// Write the equilibrium state here.
        #[arg(long)]
        equilibrium: Option<PathBuf>,
    },
    /// Level-set entropy for the suspension flow under a roof function.
    Suspend {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        obs: PathBuf,
        #[arg(long)]
        roof: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
    },
    /// Build a long admissible word whose averages oscillate between targets.
    Glue {
        #[command(flatten)]
        common: Common,
        /// Schedule file; otherwise the schedule comes from --obs, --c, --d.
        #[arg(long, conflicts_with_all = ["obs", "c", "d"])]
        schedule: Option<PathBuf>,
        #[arg(long, requires_all = ["c", "d"])]
        obs: Option<PathBuf>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        d: Option<String>,
        #[arg(long, default_value = "4")]
        ratio: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        length: usize,
        /// Output word file.
        #[arg(long)]
        word: PathBuf,
        /// Also write the schedule (and its target measures next to it).
        #[arg(long)]
        save_schedule: Option<PathBuf>,
    },
    /// Check the oscillation of running averages along a word.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        obs: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Exact word counts: all words, level words, or separated sets.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Count words with average of this observable in [lo, hi].
        #[arg(long, requires_all = ["lo", "hi"])]
        obs: Option<PathBuf>,
        #[arg(long)]
        lo: Option<String>,
        #[arg(long)]
        hi: Option<String>,
        /// Separated-set mode: centre frequencies, comma separated, of a
        /// depth-`center_depth` empirical measure.
        #[arg(long, conflicts_with = "obs", requires_all = ["radius", "eps"])]
        center: Option<String>,
        #[arg(long, default_value_t = 1)]
        center_depth: usize,
        #[arg(long)]
        radius: Option<f64>,
        /// Allowed disagreement fraction.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long)]
        eps: Option<f64>,
        /// Greedy lower bound instead of the exact clique search.
        #[arg(long)]
        greedy: bool,
    },
    /// Exact range of achievable averages.
    Range {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        obs: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Level { .. } => "level",
            Command::Joint { .. } => "joint",
            Command::Regirr { .. } => "regirr",
            Command::Pressure { .. } => "pressure",
            Command::Suspend { .. } => "suspend",
            Command::Glue { .. } => "glue",
            Command::Verify { .. } => "verify",
            Command::Count { .. } => "count",
            Command::Range { .. } => "range",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Spectrum { common, .. }
            | Command::Level { common, .. }
            | Command::Joint { common, .. }
            | Command::Regirr { common, .. }
            | Command::Pressure { common, .. }
            | Command::Suspend { common, .. }
            | Command::Glue { common, .. }
            | Command::Verify { common, .. }
            | Command::Count { common, .. }
            | Command::Range { common, .. } => common,
        }
    }
}

/// Loads inputs and records their digests.
struct Ctx {
    sys: SymbolicSystem,
    rec: RunRecord,
}

impl Ctx {
    fn new(command: &str, common: &Common) -> Result<Self> {
        let mut rec = RunRecord::new(command);
        rec.input(&common.system)?;
        let sys = io::load_system(&common.system)?;
        Ok(Self { sys, rec })
    }

    fn observable(&mut self, path: &Path) -> Result<Observable> {
        self.rec.input(path)?;
        Ok(io::load_observable(path, &self.sys)?)
    }

    fn potential(&mut self, path: Option<&Path>) -> Result<Observable> {
        match path {
            Some(p) => self.observable(p),
            None => Ok(Observable::zero(&self.sys)?),
        }
    }

    fn rational(&mut self, key: &str, s: &str) -> Result<Rational> {
        let r = parse_rational(s)?;
        self.rec.param(key, format_rational(r));
        Ok(r)
    }
}

fn level_table(c: Rational, d: Rational, res: &SpectrumResult) -> Table {
    let mut t = Table::new(&[
        "c",
        "d",
        "empty",
        "value",
        "value_c",
        "value_d",
        "q_c",
        "q_d",
        "converged",
    ]);
    let (vc, vd) = res.endpoint_values.map(|(a, b)| (num(a), num(b))).unwrap_or_default();
    let q = |i: usize| res.certificates.get(i).map(|c| nums(&c.q)).unwrap_or_default();
    let q_d = if res.certificates.len() > 1 { q(1) } else { q(0) };
    t.push(vec![
        format_rational(c),
        format_rational(d),
        res.empty.to_string(),
        res.value.map(num).unwrap_or_default(),
        vc,
        vd,
        q(0),
        q_d,
        (res.empty || res.converged()).to_string(),
    ]);
    t
}

fn save_certificates(dir: Option<&Path>, res: &SpectrumResult) -> Result<()> {
    let Some(dir) = dir else { return Ok(()) };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let names = ["endpoint_c.toml", "endpoint_d.toml"];
    for (cert, name) in res.certificates.iter().zip(names) {
        io::save_measure(&dir.join(name), &cert.equilibrium)?;
    }
    Ok(())
}

fn run(command: &Command) -> Result<(Table, RunRecord)> {
    let common = command.common();
    let mut ctx = Ctx::new(command.name(), common)?;
    let table = match command {
        Command::Spectrum {
            obs, potential, grid, ..
        } => {
            let f = ctx.observable(obs)?;
            let psi = ctx.potential(potential.as_deref())?;
            ctx.rec.param("grid", grid);
            let grid = parse_grid(grid)?;
            let points = spectrum_curve(&ctx.sys, &f, &psi, &grid)?;
            let mut t = Table::new(&["alpha", "value", "q_star", "converged"]);
            for p in points {
                t.push(vec![
                    format_rational(p.alpha),
                    num(p.value),
                    num(p.q_star),
                    p.converged.to_string(),
                ]);
            }
            t
        }
        Command::Level {
            obs,
            c,
            d,
            potential,
            certificates,
            ..
        } => {
            let f = ctx.observable(obs)?;
            let psi = ctx.potential(potential.as_deref())?;
            let (c, d) = (ctx.rational("c", c)?, ctx.rational("d", d)?);
            let res = level_set_value(&ctx.sys, &LevelSetQuery::new(f, c, d, psi))?;
            save_certificates(certificates.as_deref(), &res)?;
            level_table(c, d, &res)
        }
        Command::Joint {
            obs,
            c,
            d,
            pins,
            potential,
            certificates,
            ..
        } => {
            let f = ctx.observable(obs)?;
            let psi = ctx.potential(potential.as_deref())?;
            let (c, d) = (ctx.rational("c", c)?, ctx.rational("d", d)?);
            let mut pinned = Vec::new();
            for (i, pin) in pins.iter().enumerate() {
                let (file, value) = pin
                    .rsplit_once('=')
                    .ok_or_else(|| Error::InvalidInput(format!("pin {pin:?} is not FILE=VALUE")))?;
                let g = ctx.observable(Path::new(file))?;
                pinned.push((g, ctx.rational(&format!("pin{i}"), value)?));
            }
            let res = joint_level_value(&ctx.sys, &LevelSetQuery::new(f, c, d, psi).with_pinned(pinned))?;
            save_certificates(certificates.as_deref(), &res)?;
            level_table(c, d, &res)
        }
        Command::Regirr {
            phi1,
            phi2,
            a,
            potential,
            ..
        } => {
            let p1 = ctx.observable(phi1)?;
            let p2 = ctx.observable(phi2)?;
            let psi = ctx.potential(potential.as_deref())?;
            let a = a.as_deref().map(|a| ctx.rational("a", a)).transpose()?;
            let res = reg_irreg_value(&ctx.sys, &p1, &p2, &psi, a)?;
            let mut t = Table::new(&["a", "empty", "value", "converged"]);
            t.push(vec![
                a.map(format_rational).unwrap_or_default(),
                res.empty.to_string(),
                res.value.map(num).unwrap_or_default(),
                (res.empty || res.converged()).to_string(),
            ]);
            t
        }
        Command::Pressure {
            potential, equilibrium, ..
        } => {
            let psi = ctx.observable(potential)?;
            let p = pressure(&ctx.sys, &psi)?;
            let m = MarkovMixtureMeasure::single(equilibrium_state(&ctx.sys, &psi)?);
            if let Some(path) = equilibrium {
                io::save_measure(path, &m)?;
            }
            let mut t = Table::new(&["pressure", "equilibrium_entropy"]);
            t.push(vec![num(p), num(markov_entropy(&m))]);
            t
        }
        Command::Suspend { obs, roof, c, d, .. } => {
            let f = ctx.observable(obs)?;
            let roof = RoofFunction::new(ctx.observable(roof)?)?;
            let (c, d) = (ctx.rational("c", c)?, ctx.rational("d", d)?);
            let res = suspension_level_value(&ctx.sys, &f, &roof, c, d)?;
            level_table(c, d, &res)
        }
        Command::Glue {
            schedule,
            obs,
            c,
            d,
            ratio,
            seed,
            length,
            word,
            save_schedule,
            ..
        } => {
            let (plan, length) = match schedule {
                Some(path) => {
                    ctx.rec.input(path)?;
                    let (file, plan) = io::load_schedule(path, &ctx.sys)?;
                    (plan, file.length)
                }
                None => {
                    let f = obs
                        .as_deref()
                        .ok_or_else(|| Error::InvalidInput("glue needs --schedule or --obs/--c/--d".into()))?;
                    let f = ctx.observable(f)?;
                    let (c, d) = (
                        ctx.rational("c", c.as_deref().unwrap())?,
                        ctx.rational("d", d.as_deref().unwrap())?,
                    );
                    let ratio = ctx.rational("ratio", ratio)?;
                    ctx.rec.param("length", length);
                    (
                        GluingSchedule::for_level_set(&ctx.sys, &f, c, d, ratio, *length, *seed)?,
                        *length,
                    )
                }
            };
            ctx.rec.seed = Some(plan.seed);
            if let Some(path) = save_schedule {
                write_schedule(path, &plan, length)?;
            }
            let orbit = glue_orbit(&ctx.sys, &plan, length)?;
            let file = WordFile {
                word: orbit.word,
                block_ends: orbit.block_ends,
            };
            io::save_word(word, &file)?;
            let mut t = Table::new(&["length", "blocks", "seed", "word"]);
            t.push(vec![
                file.word.0.len().to_string(),
                file.block_ends.len().to_string(),
                plan.seed.to_string(),
                word.display().to_string(),
            ]);
            t
        }
        Command::Verify {
            obs, word, c, d, tol, ..
        } => {
            let f = ctx.observable(obs)?;
            ctx.rec.input(word)?;
            let w = io::load_word(word)?;
            ctx.sys.check_admissible(&w.word.0)?;
            let (c, d) = (ctx.rational("c", c)?, ctx.rational("d", d)?);
            ctx.rec.param("tol", tol);
            let checkpoints = if w.block_ends.is_empty() {
                default_checkpoints(w.word.0.len())
            } else {
                w.block_ends.clone()
            };
            let rep = verify_oscillation(&w.word.0, &f, c, d, *tol, &checkpoints)?;
            let mut t = Table::new(&["liminf", "limsup", "tail_start", "checkpoints", "pass"]);
            t.push(vec![
                num(rep.liminf),
                num(rep.limsup),
                rep.tail_start.to_string(),
                rep.checkpoints_used.to_string(),
                rep.pass.to_string(),
            ]);
            t
        }
        Command::Count {
            n,
            obs,
            lo,
            hi,
            center,
            center_depth,
            radius,
            delta,
            eps,
            greedy,
            ..
        } => {
            ctx.rec.param("n", n);
            if let Some(center) = center {
                let freqs = center
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse(format!("centre {center:?}: {e}")))?;
                let ball = MeasureBall {
                    center: EmpiricalMeasure::new(ctx.sys.alphabet_size(), *center_depth, freqs)?,
                    radius: radius.unwrap(),
                };
                for (k, v) in [("center", center.clone()), ("radius", ball.radius.to_string())] {
                    ctx.rec.param(k, v);
                }
                ctx.rec.param("delta", delta);
                ctx.rec.param("eps", eps.unwrap());
                let mode = if *greedy {
                    SeparatedMode::Greedy
                } else {
                    SeparatedMode::Exact
                };
                let res = count_separated(&ctx.sys, &ball, *delta, *n, eps.unwrap(), mode)?;
                let mut t = Table::new(&["n", "count", "exact", "candidates"]);
                t.push(vec![
                    n.to_string(),
                    res.count.to_string(),
                    res.exact.to_string(),
                    res.candidates.to_string(),
                ]);
                t
            } else {
                let count = match obs {
                    Some(path) => {
                        let f = ctx.observable(path)?;
                        let lo = ctx.rational("lo", lo.as_deref().unwrap())?;
                        let hi = ctx.rational("hi", hi.as_deref().unwrap())?;
                        count_level_words(&ctx.sys, &f, lo, hi, *n)?
                    }
                    None => count_words(&ctx.sys, *n)?,
                };
                let mut t = Table::new(&["n", "count", "growth_rate"]);
                t.push(vec![n.to_string(), count.to_string(), num(growth_rate(&count, *n))]);
                t
            }
        }
        Command::Range { obs, .. } => {
            let f = ctx.observable(obs)?;
            let r = average_range(&ctx.sys, &f)?;
            let mut t = Table::new(&["lo", "hi", "lo_float", "hi_float"]);
            t.push(vec![
                format_rational(r.lo),
                format_rational(r.hi),
                num(to_f64(r.lo)),
                num(to_f64(r.hi)),
            ]);
            t
        }
    };
    ctx.rec.set_results(&table);
    Ok((table, ctx.rec))
}

/// Writes a schedule file with its targets as `<stem>.target<i>.toml`.
fn write_schedule(path: &Path, plan: &GluingSchedule, length: usize) -> Result<()> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("schedule path {} has no file name", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut targets = Vec::new();
    for (i, m) in plan.targets.iter().enumerate() {
        let name = PathBuf::from(format!("{stem}.target{i}.toml"));
        io::save_measure(&dir.join(&name), m)?;
        targets.push(name);
    }
    let file = ScheduleFile {
        targets,
        growth_ratio: io::ratio_string(plan.growth_ratio),
        seed: plan.seed,
        length,
    };
    Ok(io::save_schedule(path, &file)?)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{THREADS_VAR}={value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = configure_threads().and_then(|()| {
        let (table, mut rec) = run(&cli.command)?;
        let common = cli.command.common();
        let csv = table.to_csv();
        match &common.out {
            Some(path) => std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{csv}"),
        }
        if let Some(path) = &common.record {
            if common.timing {
                rec.wall_time_seconds = Some(start.elapsed().as_secs_f64());
            }
            rec.save(path)?;
        }
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("levelset: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_failures_exit_with_three() {
        let e = anyhow::Error::new(Error::NoConvergence {
            what: "dual".into(),
            iterations: 200,
        });
        assert_eq!(exit_code(&e), 3);
        let e = anyhow::Error::new(Error::BisectionBracketFailure { lo: 0.0, hi: 1.0 });
        assert_eq!(exit_code(&e.context("flow root")), 3);
        assert_eq!(exit_code(&anyhow::Error::new(Error::InvalidInput("x".into()))), 2);
        assert_eq!(exit_code(&anyhow!("plain")), 2);
    }
}
