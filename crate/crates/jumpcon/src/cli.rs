//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use jumpcon_core::field::{Field, PrimeField, Rationals};
use jumpcon_core::monad::DEFAULT_CEILING;

use crate::format::{FieldSpec, MonadFile, CSV_HEADER};
use crate::run::{self, Settings};

pub const CEILING_VAR: &str = "JC_TRUNCATION_CEILING";

#[derive(Debug, Parser)]
#[command(name = "jumpcon", version, about = "Jumping conics of rank-2 bundles on the projective plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate and validate a random self-dual monad.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
        #[command(flatten)]
        common: Common,
    },
    /// Run every check of the jumping-conic correspondence on a monad file.
    #[command(name = "verify-theorem1")]
    Verify {
        monad: PathBuf,
        /// Must agree with the file when given.
        #[arg(long)]
        field: Option<FieldSpec>,
        /// Conics sampled on each side.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate restriction data on sampled conics. `--out x.csv` writes CSV.
    Sample {
        monad: PathBuf,
        #[arg(long)]
        field: Option<FieldSpec>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Sample conics on `Pf = 0` (prime fields only).
        #[arg(long)]
        on_pfaffian: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random lines used by the validity checks.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How a run ended, mapped onto the exit status.
#[derive(Debug)]
pub enum Outcome {
    Pass,
    /// A mathematical check failed; carries the invariant's name.
    Failed(String),
}

#[derive(Debug)]
pub enum CliError {
    Input(anyhow::Error),
    Math(anyhow::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Input(e)
    }
}

pub fn ceiling_from(var: Option<&str>) -> anyhow::Result<i32> {
    match var {
        None => Ok(DEFAULT_CEILING),
        Some(s) => {
            let c: i32 = s.trim().parse().with_context(|| format!("{CEILING_VAR}={s:?} is not an integer"))?;
            if c < 2 {
                bail!("{CEILING_VAR} must be at least 2");
            }
            Ok(c)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn resolve_field(file: &MonadFile, flag: Option<FieldSpec>) -> anyhow::Result<FieldSpec> {
    let spec = file.field_spec()?;
    match flag {
        Some(f) if f != spec => Err(anyhow!("--field {f} does not match the monad file's field {spec}")),
        _ => Ok(spec),
    }
}

/// Calls `$body` with `$f` bound to the concrete field of `$spec`.
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = &Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = &PrimeField::new(p as u64).map_err(|e| CliError::Input(e.into()))?;
                $body
            }
        }
    };
}

pub fn execute(cli: Cli, ceiling: i32) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Gen { n, field, common } => {
            if n == 0 {
                return Err(CliError::Input(anyhow!("--n must be at least 1")));
            }
            let s = settings(&common, 0, false, ceiling);
            with_field!(field, |f| {
                let file = run::gen(f, n, &s).map_err(|e| CliError::Math(e.into()))?;
                emit(common.out.as_deref(), &pretty(&file))?;
                Ok(Outcome::Pass)
            })
        }
        Command::Verify { monad, field, count, common } => {
            let file = MonadFile::read(&monad)?;
            let spec = resolve_field(&file, field)?;
            let s = settings(&common, count, false, ceiling);
            with_field!(spec, |f| verify(f, &file, &s, common.out.as_deref()))
        }
        Command::Sample { monad, field, count, on_pfaffian, common } => {
            let file = MonadFile::read(&monad)?;
            let spec = resolve_field(&file, field)?;
            if on_pfaffian && spec == FieldSpec::Rationals {
                return Err(CliError::Input(anyhow!("--on-pfaffian needs a prime field")));
            }
            let s = settings(&common, count, on_pfaffian, ceiling);
            with_field!(spec, |f| sample(f, &file, &s, common.out.as_deref()))
        }
    }
}

fn settings(c: &Common, count: usize, on_pfaffian: bool, ceiling: i32) -> Settings {
    Settings { seed: c.seed, trials: c.trials, count, ceiling, on_pfaffian }
}

fn verify<F: Field>(f: &F, file: &MonadFile, s: &Settings, out: Option<&Path>) -> Result<Outcome, CliError> {
    let m = file.monad(f)?;
    let report = run::verify_theorem1(f, &m, s);
    emit(out, &pretty(&report))?;
    Ok(match report.first_failure {
        Some(name) => Outcome::Failed(name),
        None => Outcome::Pass,
    })
}

fn sample<F: Field>(f: &F, file: &MonadFile, s: &Settings, out: Option<&Path>) -> Result<Outcome, CliError> {
    let m = file.monad(f)?;
    let p = run::pipeline(f, &m, s.ceiling).map_err(|e| CliError::Math(e.into()))?;
    let rows = run::sample(f, &m, &p, s, s.on_pfaffian).map_err(|e| CliError::Math(e.into()))?;
    let csv = out.is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    let text = if csv {
        let mut t = String::from(CSV_HEADER);
        t.push('\n');
        for r in &rows {
            t.push_str(&r.csv());
            t.push('\n');
        }
        t
    } else {
        pretty(&rows)
    };
    emit(out, &text)?;
    Ok(Outcome::Pass)
}
