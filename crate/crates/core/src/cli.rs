//! Command-line front end. The `blockdim` binary only forwards its
//! arguments to [`run`].
//!
//! Exit codes: 0 success, 1 a verification or reproduction check failed,
//! 2 usage error (bad flags, unreadable input, out-of-range parameters).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::addition::{add_prefixes, subadditivity_report, write_subadditivity_csv};
use crate::bitseq::{block_counts, read_bits, write_bits, Word};
use crate::bounds::{check_schedule, convergence_lane, fmt_sig, interleave, verify_sandwich, write_csv, write_jsonl, ConvergenceRow};
use crate::entropy::{block_entropy_h, conditional_entropy_last, empirical_distribution};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, rat, to_f64, Rational};
use crate::generators::{counterexample_walk, golden_slope, GeneratorSpec, WalkStart};
use crate::markov::{
    counterexample_chain, exact_beta, exact_gamma, stationary_distribution, snake_lower_bound, word_frequencies,
    LabeledMarkovChain,
};
use crate::rauzy::{beta_ell, gamma_ell};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "BLOCKDIM_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "blockdim", version, about = "Prediction complexity and block entropy of binary sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a reference sequence and its `.meta` sidecar
    Generate(GenerateArgs),
    /// Tabulate β, γ, h and conditional entropy over prefixes
    Analyze(AnalyzeArgs),
    /// Exact analysis of a labeled Markov chain
    Markov(MarkovArgs),
    /// Check 2γ ≤ H(X_ℓ | context) ≤ η(γ) and its β mirror
    Verify(VerifyArgs),
    /// Add two sequences as binary fractions (mod 1)
    Add(AddArgs),
    /// Recompute the four-state chain constants and a seeded walk
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Champernowne,
    Sturmian,
    Bernoulli,
    Markov,
    Sharp,
    Counterexample,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub kind: Kind,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rotation slope (sturmian); defaults to (√5−1)/2
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    /// Exact fraction p/q (bernoulli: P(0); sharp: target γ)
    #[arg(long)]
    pub alpha: Option<String>,
    /// Exact fraction p/q (sharp)
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Chain file (markov); defaults to the bundled four-state chain
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Start state index or `stationary` (markov)
    #[arg(long, default_value = "0")]
    pub start: String,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    /// Context lengths: `A..B` (inclusive) or a comma list
    #[arg(long, default_value = "1..8")]
    pub ell: String,
    /// Prefix lengths as a comma list; defaults to the whole input
    #[arg(long, conflicts_with = "geometric")]
    pub n: Option<String>,
    /// Geometric prefix schedule `START:FACTOR`, ending at the input length
    #[arg(long)]
    pub geometric: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Add exact p/q columns for β and γ (csv)
    #[arg(long)]
    pub exact: bool,
    /// Recompute every row by rescanning each prefix and compare
    #[arg(long)]
    pub cross_check: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MarkovArgs {
    /// Chain file; defaults to the bundled four-state chain
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub ell_max: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "1..6")]
    pub ell: String,
}

#[derive(Debug, Args)]
pub struct AddArgs {
    pub x: PathBuf,
    pub y: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also print a subadditivity CSV for these context lengths
    #[arg(long)]
    pub report: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Skip the Monte Carlo walk
    #[arg(long)]
    pub exact_only: bool,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub length: usize,
}

/// Parses `A..B` (inclusive) or `a,b,c`.
pub fn parse_ell_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParameter(format!("bad ℓ range {s:?}"));
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    Ok(out)
}

/// Prefix lengths from either a comma list or `START:FACTOR`.
pub fn parse_schedule(list: Option<&str>, geometric: Option<&str>, len: usize) -> Result<Vec<usize>> {
    let bad = |s: &str| Error::InvalidParameter(format!("bad prefix schedule {s:?}"));
    match (list, geometric) {
        (Some(s), _) => s.split(',').map(|t| t.trim().parse().map_err(|_| bad(s))).collect(),
        (None, Some(g)) => {
            let (a, f) = g.split_once(':').ok_or_else(|| bad(g))?;
            let start: usize = a.trim().parse().map_err(|_| bad(g))?;
            let factor: f64 = f.trim().parse().map_err(|_| bad(g))?;
            if start == 0 || factor.is_nan() || factor <= 1.0 {
                return Err(bad(g));
            }
            let mut out = Vec::new();
            let mut n = start as f64;
            while (n.round() as usize) < len {
                let v = n.round() as usize;
                if out.last() != Some(&v) {
                    out.push(v);
                }
                n *= factor;
            }
            out.push(len);
            Ok(out)
        }
        (None, None) => Ok(vec![len]),
    }
}

fn parse_fraction(name: &str, s: Option<&str>) -> Result<Rational> {
    let s = s.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required")))?;
    parse_rational(s).ok_or_else(|| Error::InvalidParameter(format!("--{name} must be an exact fraction p/q, got {s:?}")))
}

fn load_chain(path: Option<&PathBuf>) -> Result<(LabeledMarkovChain, String)> {
    match path {
        Some(p) => Ok((LabeledMarkovChain::read(p)?, p.display().to_string())),
        None => Ok((counterexample_chain(), "bundled:counterexample".into())),
    }
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Markov(a) => cmd_markov(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Add(a) => cmd_add(&a, out, err),
        Command::Reproduce(a) => cmd_reproduce(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let n = a.length;
    let spec = match a.kind {
        Kind::Champernowne => GeneratorSpec::Champernowne { n },
        Kind::Sturmian => GeneratorSpec::Sturmian {
            theta: a.theta.unwrap_or_else(golden_slope),
            rho: a.rho,
            n,
        },
        Kind::Bernoulli => GeneratorSpec::Bernoulli {
            alpha: parse_fraction("alpha", a.alpha.as_deref())?,
            n,
            seed: a.seed,
        },
        Kind::Markov => {
            let (chain, source) = load_chain(a.chain.as_ref())?;
            let start = match a.start.as_str() {
                "stationary" => WalkStart::Stationary,
                s => WalkStart::State(
                    s.parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad start state {s:?}")))?,
                ),
            };
            GeneratorSpec::Markov {
                chain,
                source,
                n,
                seed: a.seed,
                start,
            }
        }
        Kind::Sharp => GeneratorSpec::Sharp {
            alpha: parse_fraction("alpha", a.alpha.as_deref())?,
            epsilon: parse_fraction("epsilon", a.epsilon.as_deref())?,
            n,
            seed: a.seed,
        },
        Kind::Counterexample => GeneratorSpec::Counterexample { n, seed: a.seed },
    };
    let generated = spec.generate()?;
    let meta = generated.write(&a.output)?;
    writeln!(out, "wrote {} symbols to {} ({})", n, a.output.display(), meta.display())?;
    Ok(EXIT_OK)
}

fn naive_row(x: &Word, n: usize, ell: usize) -> Result<ConvergenceRow> {
    let prefix = x.slice(0, n);
    Ok(ConvergenceRow {
        n,
        ell,
        beta: beta_ell(&prefix, ell)?,
        gamma: gamma_ell(&prefix, ell)?,
        h: block_entropy_h(&prefix, ell)?,
        hc: conditional_entropy_last(&empirical_distribution(&prefix, ell)?),
    })
}

/// Streaming table, one worker per ℓ lane; rows come back ordered by `n`
/// then `ℓ` however the lanes were scheduled.
pub fn analyze_rows(x: &Word, ells: &[usize], ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    use rayon::prelude::*;
    check_schedule(x, ells, ns)?;
    let lanes: Vec<Vec<ConvergenceRow>> = thread_pool().install(|| {
        ells.par_iter()
            .map(|&ell| convergence_lane(x, ell, ns))
            .collect::<Result<_>>()
    })?;
    Ok(interleave(lanes, ns.len()))
}

pub fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let x = read_bits(&a.input)?;
    let ells = parse_ell_range(&a.ell)?;
    let ns = parse_schedule(a.n.as_deref(), a.geometric.as_deref(), x.len())?;
    let rows = analyze_rows(&x, &ells, &ns)?;
    let mut code = EXIT_OK;
    if a.cross_check {
        for r in &rows {
            let naive = naive_row(&x, r.n, r.ell)?;
            let same = naive.beta == r.beta
                && naive.gamma == r.gamma
                && (naive.h - r.h).abs() <= 1e-12
                && (naive.hc - r.hc).abs() <= 1e-12;
            if !same {
                code = EXIT_FAILED;
            }
        }
    }
    let mut sink: Box<dyn Write + '_> = match &a.output {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(&mut *out),
    };
    match a.format {
        Format::Csv => write_csv(&rows, a.exact, &mut sink)?,
        Format::Jsonl => write_jsonl(&rows, &mut sink)?,
    }
    sink.flush()?;
    Ok(code)
}

pub fn cmd_markov(a: &MarkovArgs, out: &mut dyn Write) -> Result<i32> {
    let (chain, source) = load_chain(a.chain.as_ref())?;
    let pi = stationary_distribution(&chain)?;
    let bound = snake_lower_bound(&chain, &pi);
    writeln!(out, "chain {source}")?;
    writeln!(out, "states {}", chain.states())?;
    let pis: Vec<String> = pi.as_slice().iter().map(|p| p.to_string()).collect();
    writeln!(out, "pi {}", pis.join(" "))?;
    writeln!(out, "snake_bound {} {}", bound, fmt_sig(to_f64(&bound)))?;
    writeln!(out, "ell,beta,gamma,beta_decimal,gamma_decimal")?;
    for ell in 1..=a.ell_max {
        let b = exact_beta(&chain, &pi, ell)?;
        let g = exact_gamma(&chain, &pi, ell)?;
        writeln!(out, "{ell},{b},{g},{},{}", fmt_sig(to_f64(&b)), fmt_sig(to_f64(&g)))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let x = read_bits(&a.input)?;
    let ells = parse_ell_range(&a.ell)?;
    writeln!(out, "ell,gamma,hc,eta_gamma,beta,hc_beta,eta_beta,status")?;
    let mut code = EXIT_OK;
    for ell in ells {
        let r = verify_sandwich(&x, ell)?;
        let status = if r.holds() { "ok" } else { "VIOLATION" };
        if !r.holds() {
            code = EXIT_FAILED;
        }
        writeln!(
            out,
            "{ell},{},{},{},{},{},{},{status}",
            fmt_sig(to_f64(&r.gamma)),
            fmt_sig(r.hc),
            fmt_sig(r.eta_gamma),
            fmt_sig(to_f64(&r.beta)),
            fmt_sig(r.hc_beta),
            fmt_sig(r.eta_beta),
        )?;
    }
    Ok(code)
}

pub fn cmd_add(a: &AddArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let x = read_bits(&a.x)?;
    let y = read_bits(&a.y)?;
    let s = add_prefixes(&x, &y)?;
    write_bits(&a.output, &s.sum)?;
    writeln!(
        err,
        "overflow={} uncertainty_span={}",
        s.overflow, s.uncertainty_span
    )?;
    if let Some(spec) = &a.report {
        let rows = subadditivity_report(&x, &y, &parse_ell_range(spec)?)?;
        write_subadditivity_csv(&rows, &mut *out)?;
    }
    Ok(EXIT_OK)
}

/// One line of the reproduction table.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Absolute tolerance on the empirical `β₆` of a 10⁶-step walk.
pub const WALK_BETA_TOLERANCE: f64 = 0.01;
/// Slack below the snake bound allowed for the empirical `γ₆`.
pub const WALK_GAMMA_SLACK: f64 = 0.01;
/// Absolute tolerance on each length-7 word frequency.
pub const WALK_FREQUENCY_TOLERANCE: f64 = 0.002;

/// Exact constants of the bundled chain, then (unless `exact_only`) a
/// seeded walk compared against them.
pub fn reproduce_checks(seed: u64, length: usize, exact_only: bool) -> Result<Vec<Check>> {
    let chain = counterexample_chain();
    let pi = stationary_distribution(&chain)?;
    let mut checks = Vec::new();

    let expected_pi = [rat(5, 24), rat(1, 4), rat(7, 24), rat(1, 4)];
    let shown: Vec<String> = pi.as_slice().iter().map(|p| p.to_string()).collect();
    checks.push(Check::new(
        "stationary distribution = [5/24, 1/4, 7/24, 1/4]",
        pi.as_slice() == expected_pi,
        shown.join(" "),
    ));

    let bound = snake_lower_bound(&chain, &pi);
    checks.push(Check::new("snake lower bound = 11/24", bound == rat(11, 24), bound.to_string()));

    let beta6 = exact_beta(&chain, &pi, 6)?;
    checks.push(Check::new("exact beta_6 = 9503/20736", beta6 == rat(9503, 20736), beta6.to_string()));

    let gammas: Vec<Rational> = (1..=6).map(|l| exact_gamma(&chain, &pi, l)).collect::<Result<_>>()?;
    let separated = beta6 < rat(11, 24) && gammas.iter().all(|g| *g >= rat(11, 24));
    let shown: Vec<String> = gammas.iter().map(|g| g.to_string()).collect();
    checks.push(Check::new(
        "beta_6 < 11/24 <= gamma_l for l = 1..6",
        separated,
        format!("gamma = {}", shown.join(" ")),
    ));

    if !exact_only {
        let walk = counterexample_walk(length, seed);
        let b = beta_ell(&walk, 6)?.to_f64();
        let exact_b = to_f64(&beta6);
        checks.push(Check::new(
            "walk beta_6 within 0.01 of 9503/20736",
            (b - exact_b).abs() <= WALK_BETA_TOLERANCE,
            format!("{} (seed {seed}, n {length})", fmt_sig(b)),
        ));
        let g = gamma_ell(&walk, 6)?.to_f64();
        checks.push(Check::new(
            "walk gamma_6 >= 11/24 - 0.01",
            g >= 11.0 / 24.0 - WALK_GAMMA_SLACK,
            fmt_sig(g),
        ));
        let freqs = word_frequencies(&chain, &pi, 7)?;
        let counts = block_counts(&walk, 7)?;
        let worst = (0..freqs.len())
            .map(|u| (counts.get(u as u64) as f64 / counts.total() as f64 - to_f64(&freqs[u])).abs())
            .fold(0.0, f64::max);
        checks.push(Check::new(
            "walk 7-word frequencies within 0.002 of cylinder measure",
            worst <= WALK_FREQUENCY_TOLERANCE,
            format!("max deviation {}", fmt_sig(worst)),
        ));
    }
    Ok(checks)
}

pub fn cmd_reproduce(a: &ReproduceArgs, out: &mut dyn Write) -> Result<i32> {
    let checks = reproduce_checks(a.seed, a.length, a.exact_only)?;
    for c in &checks {
        writeln!(out, "{}  {}  [{}]", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_FAILED })
}
