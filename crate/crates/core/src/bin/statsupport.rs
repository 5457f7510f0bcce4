use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use statsupport::acceptance::{accept, lottery_demo, AcceptanceConfig};
use statsupport::census::{self, enumerate_models, CensusOptions, DEFAULT_GUARD, GUARD_ENV};
use statsupport::model::holds;
use statsupport::rational::Rational;
use statsupport::support::{self, EngineConfig, Mode, SizeFraction, SizeRange, Status, SupportVerdict};
use statsupport::syntax::{parse_kb_file, parse_sentence, KnowledgeBase};
use statsupport::theorems::run_theorems;
use statsupport::Error;

/// Exact degree-of-support inference over statistical knowledge bases.
///
/// Machine output is JSON on stdout, one document per line; diagnostics go
/// to stderr. Exit codes: 0 success, 1 no defined verdict where one was
/// required, 2 usage, parse or I/O error, 3 size guard exceeded.
#[derive(Parser)]
#[command(name = "statsupport", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads for counting (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Work limit per census; exceeding it is an error, never an approximation.
    #[arg(long, global = true, env = GUARD_ENV, default_value_t = DEFAULT_GUARD)]
    guard: u128,

    /// Smallest domain size considered.
    #[arg(long, global = true, default_value_t = 2)]
    min_size: usize,

    /// Largest domain size considered.
    #[arg(long, global = true, default_value_t = 6)]
    max_size: usize,

    /// auto: resolver for ground atoms matched by statistical premises,
    /// enumeration otherwise.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_mode)]
    mode: Mode,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Parse a knowledge base and print its signature.
    Check { kb: PathBuf },
    /// Dump the premise models at one domain size as JSON lines.
    Models {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        size: usize,
        /// Print model counts instead of models.
        #[arg(long)]
        count_only: bool,
        /// Dump every interpretation, not only premise models.
        #[arg(long, conflicts_with = "count_only")]
        all: bool,
        /// Query whose models are also counted with --count-only.
        #[arg(long)]
        query: Option<String>,
    },
    /// Degree of support for one query.
    Support {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        query: String,
        /// Exit 1 unless the verdict is defined.
        #[arg(long)]
        require_defined: bool,
    },
    /// Accept the candidates whose lower support exceeds 1 - delta.
    Accept {
        #[arg(long)]
        kb: PathBuf,
        /// File of candidate sentences, each ending in `.`.
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        delta: Rational,
    },
    /// List the maximal consistent subsets.
    Mcs {
        #[arg(long)]
        kb: PathBuf,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// Run the bundled rule fixtures; exit 0 iff all pass.
    Theorems,
}

#[derive(Subcommand)]
enum Demo {
    /// Lottery with a coin toss: the coin is accepted, no ticket is.
    Lottery {
        #[arg(long, default_value_t = 3)]
        tickets: usize,
        #[arg(long, default_value = "3/5")]
        delta: Rational,
    },
}

enum Failure {
    Usage(String),
    Engine(Error),
    Undefined,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn load(path: &FsPath) -> Result<KnowledgeBase, Failure> {
    let kb = parse_kb_file(path).map_err(Error::Parse)?;
    for w in kb.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(kb)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn interval_text(v: &SupportVerdict) -> String {
    v.interval.as_ref().map_or_else(|| "-".into(), ToString::to_string)
}

fn print_verdict(v: &SupportVerdict) {
    let status = format!("{:?}", v.status).to_lowercase();
    let path = format!("{:?}", v.path).to_lowercase();
    println!("{status} {} via {path}, sizes {}..{}", interval_text(v), v.size_range.min(), v.size_range.max());
    if let Some(e) = &v.envelope {
        println!("envelope {e}");
    }
    for (n, f) in &v.per_size {
        match f {
            SizeFraction::Fraction(r) => println!("  n={n:<3} {r}"),
            SizeFraction::NoPremiseModels => println!("  n={n:<3} no premise models"),
        }
    }
    for e in v.mcs_breakdown.iter().flatten() {
        let iv = e.interval.as_ref().map_or_else(|| "-".into(), ToString::to_string);
        println!("  subset {} {:?}: {:?} {iv}", e.id, e.members, e.status);
    }
}

#[derive(Serialize)]
struct McsOutput {
    size_range: SizeRange,
    subsets: Vec<McsItem>,
}

#[derive(Serialize)]
struct McsItem {
    id: usize,
    members: Vec<usize>,
    sentences: Vec<String>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let mut census = CensusOptions::default().with_guard(g.guard);
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        census = census.with_threads(t);
    }
    let engine = EngineConfig {
        sizes: SizeRange::new(g.min_size, g.max_size)?,
        mode: g.mode,
        census,
    };
    let table = g.format == Format::Table;

    match cli.command {
        Command::Check { kb } => {
            let kb = load(&kb)?;
            let sig = kb.signature(&[]).map_err(Error::from)?;
            let noun = if kb.len() == 1 { "sentence" } else { "sentences" };
            println!("{} {noun}; {sig}", kb.len());
        }
        Command::Models { kb, size, count_only, all, query } => {
            let kb = load(&kb)?;
            let query = query.map(|q| parse_sentence(&q)).transpose().map_err(Error::from)?;
            if count_only {
                emit(&census::census(&kb, query.as_ref(), size, &census)?);
                return Ok(());
            }
            let extra: Vec<_> = query.into_iter().collect();
            let sig = kb.signature(&extra).map_err(Error::from)?;
            for m in enumerate_models(&sig, size, census.guard)? {
                let mut keep = true;
                if !all {
                    for s in kb.sentences() {
                        if !holds(&m, s)? {
                            keep = false;
                            break;
                        }
                    }
                }
                if keep {
                    emit(&m.dump());
                }
            }
        }
        Command::Support { kb, query, require_defined } => {
            let kb = load(&kb)?;
            let query = parse_sentence(&query).map_err(Error::from)?;
            let v = support::support(&kb, &query, &engine)?;
            if table {
                print_verdict(&v);
            } else {
                emit(&v);
            }
            if require_defined && v.status != Status::Defined {
                return Err(Failure::Undefined);
            }
        }
        Command::Accept { kb, candidates, delta } => {
            let kb = load(&kb)?;
            let candidates = load(&candidates)?.sentences().to_vec();
            let config = AcceptanceConfig::new(delta, engine)?;
            let set = accept(&kb, &candidates, &config);
            if table {
                for a in &set.accepted {
                    println!("accept  {}  {}", a.sentence, interval_text(&a.verdict));
                }
                for r in &set.rejected {
                    println!("reject  {}  {}", r.sentence, r.reason);
                }
            } else {
                emit(&set);
            }
        }
        Command::Mcs { kb } => {
            let kb = load(&kb)?;
            let subsets = support::maximal_consistent_subsets(&kb, &engine)?;
            let out = McsOutput {
                size_range: engine.sizes,
                subsets: subsets
                    .into_iter()
                    .enumerate()
                    .map(|(id, members)| McsItem {
                        id,
                        sentences: members.iter().map(|&i| kb.sentences()[i].to_string()).collect(),
                        members,
                    })
                    .collect(),
            };
            if table {
                for s in &out.subsets {
                    println!("{}: {}", s.id, s.sentences.join(". "));
                }
            } else {
                emit(&out);
            }
        }
        Command::Demo { demo: Demo::Lottery { tickets, delta } } => {
            let config = AcceptanceConfig::new(delta, engine)?;
            let report = lottery_demo(tickets, &config)?;
            if table {
                println!("{report}");
            } else {
                eprintln!("{report}");
                emit(&report);
            }
        }
        Command::Theorems => {
            let report = run_theorems(&census);
            if table {
                println!("{report}");
            } else {
                emit(&report);
            }
            if !report.all_passed() {
                return Err(Failure::Undefined);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Undefined) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::GuardExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
