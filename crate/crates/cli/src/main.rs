//! `trireflect`: word lengths, λ₁ and exhaustive checks for three-reflection
//! presentations of dihedral groups.

mod render;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use trireflect_core::metrics::{check_sqrt_bound, lambda1, lambda1_cross_checked};
use trireflect_core::survey::DEFAULT_SCAN_MAX;
use trireflect_core::wordlength::{default_l_max, lengths};
use trireflect_core::{
    scan_stabilizers, survey_lambda, verify, w_prime_sequence, Claim, Engine, Error, GeneratingSet,
    VerifyOptions,
};

use render::{Format, Render};

/// Directory used for reports when `--out` is not given.
const OUT_DIR_ENV: &str = "TRIREFLECT_OUT_DIR";

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "trireflect", version)]
#[command(
    about = "Word lengths and the lambda-1 stability metric for dihedral groups under three-reflection generating sets"
)]
struct Cli {
    /// Output format (default depends on the command)
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap on worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Sumset,
    Bfs,
    Both,
}

impl EngineArg {
    /// The engine whose table is reported.
    fn primary(self) -> Engine {
        match self {
            EngineArg::Bfs => Engine::Bfs,
            EngineArg::Sumset | EngineArg::Both => Engine::Sumset,
        }
    }
}

/// Inclusive range `lo..hi`, `lo..=hi` or a single `n`.
#[derive(Debug, Clone, Copy)]
struct NRange {
    lo: usize,
    hi: usize,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad bound '{x}' in range '{s}'"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty range '{s}'"));
        }
        Ok(NRange { lo, hi })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Word length of every element of D_n
    Lengths {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_enum, default_value = "sumset")]
        engine: EngineArg,
        /// Emit the level sets W'_0..W'_L instead (non-generating sets allowed)
        #[arg(long)]
        levels: bool,
        /// Depth for --levels (default n + 1)
        #[arg(long)]
        l_max: Option<usize>,
    },
    /// lambda_1 for one generating set
    Lambda1 {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_enum, default_value = "sumset")]
        engine: EngineArg,
    },
    /// Check one stated bound or identity over a range of n
    Verify {
        /// cauchy-davenport | kneser | growth | prime-growth | lambda-bound |
        /// prime-lambda-bound | sharpness | sqrt
        #[arg(long)]
        claim: Claim,
        #[arg(long)]
        n_range: Option<NRange>,
        #[arg(long, value_enum, default_value = "sumset")]
        engine: EngineArg,
        /// Seed for the randomized checks
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Search all canonical sets for level sets with a proper nontrivial stabilizer
    Scan {
        #[arg(long)]
        n_range: Option<NRange>,
        /// JSON-lines checkpoint to resume from and append to
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// lambda_1 for every canonical generating set
    Survey {
        #[arg(long, default_value = "3..100")]
        n_range: NRange,
        #[arg(long, value_enum, default_value = "sumset")]
        engine: EngineArg,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Word-length bound for the {f, r f, r^isqrt(n) f} presentation
    Sqrt {
        #[arg(long, conflicts_with = "n_range")]
        n: Option<usize>,
        #[arg(long)]
        n_range: Option<NRange>,
        #[arg(long, value_enum, default_value = "sumset")]
        engine: EngineArg,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Lengths { .. } => "lengths",
            Command::Lambda1 { .. } => "lambda1",
            Command::Verify { .. } => "verify",
            Command::Scan { .. } => "scan",
            Command::Survey { .. } => "survey",
            Command::Sqrt { .. } => "sqrt",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Survey { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Why a run did not succeed.
enum Failure {
    /// Exit 1: a check failed or a counterexample was found.
    Verification(String),
    /// Exit 2: bad flags or inputs.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::NotGenerating { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Verification(e.to_string()),
        }
    }
}

struct Output {
    body: String,
    /// False when the report records a failed check.
    ok: bool,
    note: Option<String>,
}

fn report(r: &impl Render, format: Format, ok: bool) -> Output {
    Output {
        body: r.render(format),
        ok,
        note: None,
    }
}

fn execute(command: &Command, format: Format) -> Result<Output, Failure> {
    match command {
        Command::Lengths {
            n,
            a,
            b,
            engine,
            levels,
            l_max,
        } => {
            let set = GeneratingSet::from_signed(*n, *a, *b)?;
            if *levels {
                let seq = w_prime_sequence(&set, l_max.unwrap_or_else(|| default_l_max(*n)));
                return Ok(report(&seq, format, true));
            }
            let table = lengths(&set, engine.primary())?;
            let mut out = report(&table, format, true);
            if *engine == EngineArg::Both {
                let oracle = lengths(&set, Engine::Bfs)?;
                if !table.same_lengths(&oracle) {
                    out.ok = false;
                    out.note = Some(format!("engines disagree on {set}"));
                }
            }
            Ok(out)
        }
        Command::Lambda1 { n, a, b, engine } => {
            let set = GeneratingSet::from_signed(*n, *a, *b)?;
            let r = match engine {
                EngineArg::Both => lambda1_cross_checked(&set)?,
                other => lambda1(&set, other.primary())?,
            };
            let ok = r.engines_agree != Some(false);
            let mut out = report(&r, format, ok);
            if !ok {
                out.note = Some(format!("engines disagree on {set}"));
            }
            Ok(out)
        }
        Command::Verify {
            claim,
            n_range,
            engine,
            seed,
        } => {
            let (lo, hi) = n_range
                .map(|r| (r.lo, r.hi))
                .unwrap_or_else(|| claim.default_range());
            let r = verify(
                *claim,
                &VerifyOptions {
                    n_min: lo,
                    n_max: hi,
                    engine: engine.primary(),
                    seed: *seed,
                },
            )?;
            let mut out = report(&r, format, r.passed);
            if !r.passed {
                out.note = Some(format!(
                    "{claim}: {} of {} cases failed",
                    r.failure_count, r.cases_checked
                ));
            }
            Ok(out)
        }
        Command::Scan {
            n_range,
            checkpoint,
        } => {
            let range = n_range.unwrap_or(NRange {
                lo: 3,
                hi: DEFAULT_SCAN_MAX,
            });
            let r = scan_stabilizers(range.lo, range.hi, checkpoint.as_deref())?;
            let mut out = report(&r, format, r.confirmed);
            if !r.confirmed {
                out.note = Some(format!(
                    "{} counterexamples, {} rejected candidates",
                    r.counterexamples.len(),
                    r.rejected.len()
                ));
            }
            Ok(out)
        }
        Command::Survey {
            n_range,
            engine,
            checkpoint,
        } => {
            let rows = survey_lambda(
                n_range.lo,
                n_range.hi,
                engine.primary(),
                checkpoint.as_deref(),
            )?;
            Ok(report(&rows, format, true))
        }
        Command::Sqrt { n, n_range, engine } => {
            let range = match (n, n_range) {
                (Some(n), _) => NRange { lo: *n, hi: *n },
                (None, Some(r)) => *r,
                (None, None) => return Err(Failure::Usage("sqrt needs --n or --n-range".into())),
            };
            let rows = (range.lo..=range.hi)
                .map(|n| check_sqrt_bound(n, engine.primary()))
                .collect::<Result<Vec<_>, _>>()?;
            let ok = rows.iter().all(|r| r.holds);
            Ok(report(&rows, format, ok))
        }
    }
}

fn destination(cli: &Cli, format: Format) -> Option<PathBuf> {
    cli.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| {
            PathBuf::from(dir).join(format!("{}.{}", cli.command.name(), format.extension()))
        })
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot size thread pool: {e}")))?;
    }
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let out = execute(&cli.command, format)?;
    match destination(cli, format) {
        Some(path) => std::fs::write(&path, &out.body)
            .map_err(|e| Failure::Verification(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", out.body),
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("{} finished in {:.2?}", cli.command.name(), start.elapsed());
    match result {
        Ok(out) => {
            if let Some(note) = out.note {
                eprintln!("{note}");
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
