//! `weakflip`: build, evaluate and search small binary codes for the erasure channel.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use weakflip::bec_exact::{error_probability, oracle_error_probability, Channel, TieBreak};
use weakflip::distances::distance_profile;
use weakflip::formats::{codebook_to_text, parse_code, CodeFile};
use weakflip::reports::{self, distance_table, sweep, sweep_csv, table_csv, Family, SUITES};
use weakflip::search::{
    exhaustive_linear_search, exhaustive_search, permuted_concatenation_search,
    punctured_linear_search, simulated_annealing, Restrict, SearchConfig,
};

#[derive(Parser, Debug)]
#[command(name = "weakflip", version, about = "Small binary block codes on the binary erasure channel")]
struct Cli {
    /// Number of codewords.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Blocklength: `7`, a list `8,10,12`, or an inclusive range `2..40`.
    #[arg(long, global = true)]
    n: Option<String>,
    /// Erasure probability.
    #[arg(long, global = true, default_value_t = 0.3)]
    delta: f64,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code from a named family and print its distance profile.
    Construct {
        /// One of the family names listed by `--help`.
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Family::NAMES))]
        family: String,
        /// Hadamard matrix order.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Exact error probability of a code file.
    Evaluate {
        code: PathBuf,
        /// Also run the brute-force decoder (n <= 14).
        #[arg(long)]
        oracle: bool,
    },
    /// Exact error probability and bounds over a range of blocklengths.
    Sweep {
        #[arg(long, default_value = "optimal",
              value_parser = clap::builder::PossibleValuesParser::new(Family::NAMES))]
        family: String,
    },
    /// Minimum r-wise distances of searched weak flip codes against linear codes (M = 8 or 16).
    Table {
        #[command(flatten)]
        schedule: Schedule,
    },
    /// Run one search procedure and print its report.
    Search {
        #[arg(value_enum)]
        method: Method,
        /// Linear dimension for `linear`, `concatenation` and `punctured-linear`.
        #[arg(long)]
        k: Option<usize>,
        /// Number of concatenated blocks.
        #[arg(long)]
        kappa: Option<usize>,
        #[command(flatten)]
        schedule: Schedule,
    },
    /// Run a named self-check suite, or `all`.
    Verify {
        #[arg(value_parser = suite_names())]
        suite: String,
    },
}

fn suite_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(SUITES.iter().copied().chain(["all"]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exhaustive,
    ExhaustiveWeak,
    Linear,
    Annealing,
    Concatenation,
    PuncturedLinear,
}

#[derive(Args, Debug)]
struct Schedule {
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_freeze: Option<f64>,
    /// Moves per temperature level (default 200 n).
    #[arg(long)]
    moves: Option<usize>,
    /// Trials of the concatenation search.
    #[arg(long)]
    iterations: Option<usize>,
}

impl Schedule {
    fn config(&self, seed: u64) -> SearchConfig {
        let d = SearchConfig::with_seed(seed);
        SearchConfig {
            seed,
            t_start: self.t_start.unwrap_or(d.t_start),
            t_freeze: self.t_freeze.unwrap_or(d.t_freeze),
            alpha: self.alpha.unwrap_or(d.alpha),
            moves_per_temp: self.moves.or(d.moves_per_temp),
            max_iterations: self.iterations.unwrap_or(d.max_iterations),
            restarts: self.restarts.unwrap_or(d.restarts),
        }
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<weakflip::Error> for Failure {
    fn from(e: weakflip::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// `7`, `8,10,12`, `2..40` (inclusive) or a mix of those.
fn parse_ns(spec: &str) -> CliResult<Vec<usize>> {
    let num = |s: &str| {
        s.trim().parse::<usize>().map_err(|_| Failure::Usage(format!("bad blocklength `{s}`")))
    };
    let mut out = Vec::new();
    for part in spec.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return usage(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    Ok(out)
}

impl Cli {
    fn ns(&self) -> CliResult<Vec<usize>> {
        match &self.n {
            Some(s) => parse_ns(s),
            None => usage("--n is required"),
        }
    }

    fn single_n(&self) -> CliResult<usize> {
        match self.ns()?.as_slice() {
            [n] => Ok(*n),
            _ => usage("--n must be a single blocklength here"),
        }
    }

    fn m(&self) -> CliResult<usize> {
        self.m.ok_or_else(|| Failure::Usage("--m is required".into()))
    }

    fn channel(&self) -> CliResult<Channel> {
        Ok(Channel::new(self.delta)?)
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => write(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn construct(cli: &Cli, name: &str, order: Option<usize>) -> CliResult<()> {
    let family: Family = name.parse()?;
    let n = match &cli.n {
        Some(_) => Some(cli.single_n()?),
        None => None,
    };
    let m = cli.m.or_else(|| implied_m(name));
    let code = family.build(m, n, order)?.with_rows();
    let t = code.type_vector()?;
    let profile = distance_profile(&t);
    match &cli.out {
        Some(path) => {
            write(path, &code.to_json())?;
            write(&path.with_extension("txt"), &codebook_to_text(&code.codebook()?))?;
            println!("profile {profile}");
        }
        None => {
            println!("{}", code.to_json());
            eprintln!("profile {profile}");
        }
    }
    Ok(())
}

/// `optimal-m4`, `gfwf-m8` and friends carry M in their name.
fn implied_m(family: &str) -> Option<usize> {
    family.rsplit_once("-m")?.1.parse().ok()
}

fn evaluate(cli: &Cli, path: &Path, oracle: bool) -> CliResult<()> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let code: CodeFile = parse_code(&text)?;
    let ch = cli.channel()?;
    let t = code.type_vector()?;
    let exact = error_probability(&t, ch);
    let oracle = if oracle { Some(oracle_error_probability(&code.codebook()?, ch, TieBreak::LowestIndex)?) } else { None };
    if cli.format == Some(Format::Json) {
        let value = serde_json::json!({
            "m": t.m(),
            "n": t.n(),
            "delta": ch.delta(),
            "p_error": exact.p_error,
            "profile": distance_profile(&t),
            "oracle": oracle.as_ref().map(|o| serde_json::json!({
                "p_error": o.p_error,
                "lambda": o.per_message,
                "abs_diff": (o.p_error - exact.p_error).abs(),
            })),
        });
        return cli.emit(&json(&value));
    }
    let mut s = format!("m = {}\nn = {}\ndelta = {}\np_error = {}\n", t.m(), t.n(), ch.delta(), exact.p_error);
    if let Some(o) = oracle {
        s.push_str(&format!("oracle_p_error = {}\n", o.p_error));
        for (i, l) in o.per_message.unwrap_or_default().iter().enumerate() {
            s.push_str(&format!("lambda_{} = {l}\n", i + 1));
        }
        s.push_str(&format!("abs_diff = {:e}\n", (o.p_error - exact.p_error).abs()));
    }
    cli.emit(&s)
}

fn run_sweep(cli: &Cli, family: &str) -> CliResult<()> {
    let family: Family = family.parse()?;
    let m = cli.m()?;
    let ch = cli.channel()?;
    let ns = cli.ns()?;
    let rows = sweep(m, ch, &ns, family)?;
    match cli.format {
        Some(Format::Json) => cli.emit(&json(&rows)),
        _ => cli.emit(&sweep_csv(m, ch, family, &rows)),
    }
}

fn run_table(cli: &Cli, schedule: &Schedule) -> CliResult<()> {
    let m = cli.m()?;
    let ch = cli.channel()?;
    let cfg = schedule.config(cli.seed);
    let rows = distance_table(m, &cli.ns()?, ch, &cfg)?;
    match cli.format {
        Some(Format::Json) => cli.emit(&json(&rows)),
        _ => cli.emit(&table_csv(m, ch, &cfg, &rows)),
    }
}

fn run_search(cli: &Cli, method: Method, k: Option<usize>, kappa: Option<usize>, schedule: &Schedule) -> CliResult<()> {
    let ch = cli.channel()?;
    let cfg = schedule.config(cli.seed);
    let k_or_m = || -> CliResult<usize> {
        match (k, cli.m) {
            (Some(k), _) => Ok(k),
            (None, Some(m)) if m.is_power_of_two() => Ok(m.trailing_zeros() as usize),
            _ => usage("--k (or a power-of-two --m) is required"),
        }
    };
    let report = match method {
        Method::Exhaustive => exhaustive_search(cli.m()?, cli.single_n()?, ch, Restrict::All)?,
        Method::ExhaustiveWeak => exhaustive_search(cli.m()?, cli.single_n()?, ch, Restrict::WeakFlip)?,
        Method::Linear => exhaustive_linear_search(k_or_m()?, cli.single_n()?, ch)?,
        Method::Annealing => simulated_annealing(cli.m()?, cli.single_n()?, ch, &cfg)?,
        Method::PuncturedLinear => punctured_linear_search(k_or_m()?, cli.single_n()?, ch, &cfg)?,
        Method::Concatenation => {
            let k = k_or_m()?;
            let kappa = match (kappa, &cli.n) {
                (Some(kappa), _) => kappa,
                (None, Some(_)) => {
                    let n = cli.single_n()?;
                    let block = (1usize << k) - 1;
                    if n % block != 0 {
                        return usage(format!("n = {n} is not a multiple of {block}"));
                    }
                    n / block
                }
                (None, None) => return usage("--kappa or --n is required"),
            };
            permuted_concatenation_search(k, kappa, ch, &cfg)?
        }
    };
    eprintln!("profile {}", report.profile);
    cli.emit(&format!("{}\n", report.to_json()))
}

fn run_verify(cli: &Cli, suite: &str) -> CliResult<()> {
    let suites: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut text = String::new();
    let mut all = Vec::new();
    let mut ok = true;
    for s in suites {
        let report = reports::verify(s)?;
        ok &= report.passed();
        text.push_str(&report.text());
        all.push(report);
    }
    match cli.format {
        Some(Format::Json) => cli.emit(&json(&all))?,
        _ => cli.emit(&text)?,
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Construct { family, order } => construct(cli, family, *order),
        Command::Evaluate { code, oracle } => evaluate(cli, code, *oracle),
        Command::Sweep { family } => run_sweep(cli, family),
        Command::Table { schedule } => run_table(cli, schedule),
        Command::Search { method, k, kappa, schedule } => run_search(cli, *method, *k, *kappa, schedule),
        Command::Verify { suite } => run_verify(cli, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
