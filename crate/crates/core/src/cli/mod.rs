//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 bad input or internal error, 2 precision cap exhausted,
//! 3 routes disagree or a check fails.

pub mod routes;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contfrac::{verify_tail_identities, IdentityReport, Word};
use crate::error::{Error, Result};
use crate::hyperquad::{verify_rule_table, RuleReport};
use crate::solvers::Family;
use crate::words::{self, WordFamily, WordJson};
use crate::{Fp, Poly};
use routes::{engine_route, first_mismatch, inject_fault, series_route, word_route, Mismatch, Target};

pub const DEFAULT_RNG_SEED: u64 = 0x4851_4346;

#[derive(Debug, Parser)]
#[command(name = "hqcf", version, about = "Continued fractions of hyperquadratic power series over F_p((1/T))")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand the series and print its certified quotients.
    Expand(SeriesArgs),
    /// Print the quotients predicted by the word generators.
    Predict(SeriesArgs),
    /// Compare series expansion, transition engine and word generators.
    Verify(VerifyArgs),
    /// Check every row of the rule table against the generic step.
    Rules(SuiteArgs),
    /// Check the tail-transform identities.
    Identities(IdentityArgs),
    /// Print one of the words Γ_k, Λ_k, Ω_k, Ω_k(P).
    Words(WordArgs),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub t: u32,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum)]
    pub family: Family,
    /// Number of quotients.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// `P` for the general family, e.g. "T^2+T".
    #[arg(long)]
    pub poly: Option<String>,
    /// Comma-separated seed letters for the mahlergen family.
    #[arg(long, alias = "letters")]
    pub seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Corrupt letter i of the word route.
    #[arg(long, value_name = "I")]
    pub inject_fault: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RngArgs {
    #[arg(long, default_value_t = DEFAULT_RNG_SEED)]
    pub rng_seed: u64,
    /// Draw a fresh seed instead.
    #[arg(long)]
    pub random: bool,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[command(flatten)]
    pub rng: RngArgs,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(long)]
    pub p: u64,
    /// Accepted for symmetry; the identities do not involve r.
    #[arg(long, default_value_t = 1)]
    pub t: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[command(flatten)]
    pub rng: RngArgs,
}

#[derive(Debug, Args)]
pub struct WordArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum)]
    pub family: WordFamily,
    #[arg(long)]
    pub k: usize,
    /// `P` for omega-p.
    #[arg(long)]
    pub poly: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout().lock();
    match execute(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionCap { .. } => 2,
        _ => 1,
    }
}

/// Runs a parsed command, writing the report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn std::io::Write) -> Result<i32> {
    let json = cli.output == Output::Json;
    let (text, code) = match &cli.command {
        Command::Expand(a) => expand(a, json)?,
        Command::Predict(a) => predict(a, json)?,
        Command::Verify(a) => verify(a, json)?,
        Command::Rules(a) => rules(a, json)?,
        Command::Identities(a) => identities(a, json)?,
        Command::Words(a) => word_cmd(a, json)?,
    };
    writeln!(out, "{text}").map_err(|e| Error::Config(format!("cannot write output: {e}")))?;
    Ok(code)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn session(fa: &FieldArgs) -> Result<(Fp, u64)> {
    let f = Fp::new(fa.p)?;
    let r = f.frobenius_power(fa.t)?;
    Ok((f, r))
}

fn target(a: &SeriesArgs) -> Result<Target> {
    let (field, r) = session(&a.field)?;
    let poly = a.poly.as_deref().map(|s| Poly::parse(field, s)).transpose()?;
    let seed = a.seed.as_deref().map(|s| Word::parse_list(field, s)).transpose()?;
    let t = Target {
        family: a.family,
        field,
        r,
        poly,
        seed,
    };
    t.validate()?;
    Ok(t)
}

fn rng(a: &RngArgs) -> ChaCha8Rng {
    let seed = if a.random { rand::random() } else { a.rng_seed };
    if a.random {
        eprintln!("rng seed {seed}");
    }
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Serialize)]
struct QuotientsJson<'a> {
    family: Family,
    p: u32,
    t: u32,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    certified: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prec: Option<i64>,
    letters: &'a [String],
}

fn expand(a: &SeriesArgs, json: bool) -> Result<(String, i32)> {
    let t = target(a)?;
    let run = series_route(&t, a.n)?;
    let letters = run.word.to_strings();
    let text = if json {
        to_json(&QuotientsJson {
            family: a.family,
            p: t.field.p(),
            t: a.field.t,
            n: a.n,
            certified: Some(run.certified),
            prec: Some(run.prec),
            letters: &letters,
        })
    } else {
        format!(
            "{}\n{} quotients certified at precision {}",
            letters.join(", "),
            run.certified,
            run.prec
        )
    };
    Ok((text, 0))
}

fn predict(a: &SeriesArgs, json: bool) -> Result<(String, i32)> {
    let t = target(a)?;
    let letters = word_route(&t, a.n)?.to_strings();
    let text = if json {
        to_json(&QuotientsJson {
            family: a.family,
            p: t.field.p(),
            t: a.field.t,
            n: a.n,
            certified: None,
            prec: None,
            letters: &letters,
        })
    } else {
        letters.join(", ")
    };
    Ok((text, 0))
}

#[derive(Serialize)]
struct VerifyJson {
    family: Family,
    p: u32,
    t: u32,
    n: usize,
    agree: bool,
    prec: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mismatch: Option<Mismatch>,
}

fn verify(a: &VerifyArgs, json: bool) -> Result<(String, i32)> {
    let s = &a.series;
    let t = target(s)?;
    let n = s.n;
    let (series, engine, word) = std::thread::scope(|sc| {
        let h_series = sc.spawn(|| series_route(&t, n));
        let h_engine = sc.spawn(|| engine_route(&t, n));
        let word = word_route(&t, n);
        (
            h_series.join().expect("series route panicked"),
            h_engine.join().expect("engine route panicked"),
            word,
        )
    });
    let series = series?;
    let engine = engine?;
    let mut word = word?;
    if let Some(i) = a.inject_fault {
        word = inject_fault(&word, i);
    }
    let mismatch = first_mismatch(&series.word, &engine, &word);
    let code = if mismatch.is_some() { 3 } else { 0 };
    let text = if json {
        to_json(&VerifyJson {
            family: s.family,
            p: t.field.p(),
            t: s.field.t,
            n,
            agree: mismatch.is_none(),
            prec: series.prec,
            mismatch,
        })
    } else {
        match mismatch {
            None => format!("all three routes agree on {n} quotients (series precision {})", series.prec),
            Some(m) => {
                let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "(missing)".into());
                format!(
                    "mismatch at index {}\n  series: {}\n  engine: {}\n  word:   {}",
                    m.index,
                    show(&m.series),
                    show(&m.engine),
                    show(&m.word)
                )
            }
        }
    };
    Ok((text, code))
}

fn rules(a: &SuiteArgs, json: bool) -> Result<(String, i32)> {
    let (f, r) = session(&a.field)?;
    if r <= 2 {
        return Err(Error::RGreaterThanTwoRequired(r));
    }
    let reports = verify_rule_table(f, r, a.trials, &mut rng(&a.rng));
    let ok = reports.iter().filter(|x| x.passes == x.trials).count();
    let text = if json {
        to_json(&reports)
    } else {
        let mut lines: Vec<String> = reports.iter().map(rule_line).collect();
        lines.push(format!("{ok}/{} rows pass", reports.len()));
        lines.join("\n")
    };
    Ok((text, if ok == reports.len() { 0 } else { 3 }))
}

fn rule_line(x: &RuleReport) -> String {
    let mut s = format!("{:<16} {}/{}", x.rule, x.passes, x.trials);
    if let Some(fail) = &x.first_failure {
        s.push_str(&format!("  first failure: {fail}"));
    }
    s
}

fn identities(a: &IdentityArgs, json: bool) -> Result<(String, i32)> {
    let f = Fp::new(a.p)?;
    f.frobenius_power(a.t)?;
    let reports = verify_tail_identities(f, a.trials, &mut rng(&a.rng));
    let ok = reports.iter().filter(|x| x.passes == x.trials).count();
    let text = if json {
        to_json(&reports)
    } else {
        let mut lines: Vec<String> = reports.iter().map(identity_line).collect();
        lines.push(format!("{ok}/{} identities pass", reports.len()));
        lines.join("\n")
    };
    Ok((text, if ok == reports.len() { 0 } else { 3 }))
}

fn identity_line(x: &IdentityReport) -> String {
    let mut s = format!("{:<24} {}/{}", x.identity, x.passes, x.trials);
    if let Some(fail) = &x.first_failure {
        s.push_str(&format!("  first failure: {fail}"));
    }
    s
}

fn word_cmd(a: &WordArgs, json: bool) -> Result<(String, i32)> {
    let (f, r) = session(&a.field)?;
    let w = match a.family {
        WordFamily::Gamma => words::gamma(f, r, a.k)?,
        WordFamily::Lambda => words::lambda_word(f, r, a.k)?,
        WordFamily::Omega => words::omega(f, r, a.k)?,
        WordFamily::OmegaP => {
            let src = a
                .poly
                .as_deref()
                .ok_or_else(|| Error::Config("omega-p needs --poly".into()))?;
            words::omega_p(f, r, &Poly::parse(f, src)?, a.k)?
        }
    };
    let letters = w.to_strings();
    let text = if json {
        to_json(&WordJson {
            family: a.family,
            k: a.k,
            p: f.p(),
            t: a.field.t,
            letters,
        })
    } else {
        letters.join(", ")
    };
    Ok((text, 0))
}
