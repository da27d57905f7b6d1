use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rxlearn::cli::{
    cmd_eval, cmd_export, cmd_synth, cmd_train, tokenizer_config, write_eval_report, CliError, EmbeddingSource,
    RunConfig, Strategy,
};
use rxlearn::corpus::TokenizerMode;

#[derive(Parser)]
#[command(name = "rxlearn", version, about = "Learn regular-expression text classifiers")]
struct Cli {
    /// Log more (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn one classifier per class.
    Train(Box<TrainArgs>),
    /// Score trained classifiers on a labeled corpus.
    Eval(EvalArgs),
    /// Print the decoded patterns of a classifier file.
    Export { classifier: PathBuf },
    /// Generate a synthetic labeled corpus.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; `.jsonl` selects JSONL, anything else TSV.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct TokenizerArgs {
    #[arg(long, value_parser = parse_tokenizer)]
    tokenizer: Option<TokenizerMode>,
    /// File with one stop word per line.
    #[arg(long)]
    stop_words: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// TOML file with defaults for every option; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    test_corpus: Option<PathBuf>,
    /// Target class; repeat for several. Default: every class.
    #[arg(long = "class")]
    classes: Vec<String>,
    /// Embedding file, or `fallback` for vectors built from the corpus.
    #[arg(long)]
    embeddings: Option<String>,
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Elite pool capacity.
    #[arg(long)]
    pool: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Rules per classifier.
    #[arg(long)]
    rules: Option<usize>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    td_f: Option<f64>,
    #[arg(long)]
    n_w: Option<usize>,
    #[arg(long)]
    td_s: Option<f64>,
    /// Rounds without improvement before stopping; 0 disables.
    #[arg(long)]
    stall_limit: Option<usize>,
    #[arg(long)]
    complexity_cap: Option<usize>,
    /// Keep matched negatives in the working set of psaw-i.
    #[arg(long)]
    keep_negatives: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tokenizer: TokenizerArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// Classifier files or directories holding them.
    #[arg(required = true)]
    classifiers: Vec<PathBuf>,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    /// Also write eval_report.txt and eval_report.json here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    tokenizer: TokenizerArgs,
}

fn parse_tokenizer(s: &str) -> Result<TokenizerMode, String> {
    match s {
        "whitespace" => Ok(TokenizerMode::Whitespace),
        "per-character" => Ok(TokenizerMode::PerCharacter),
        _ => Err(format!("unknown tokenizer `{s}` (expected whitespace or per-character)")),
    }
}

fn run_config(args: TrainArgs) -> Result<RunConfig, CliError> {
    let mut c = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let a = &mut c.anneal;
    macro_rules! set {
        ($($flag:expr => $field:expr),* $(,)?) => {
            $(if let Some(v) = $flag { $field = v; })*
        };
    }
    set! {
        args.seed => a.seed,
        args.beta => a.beta,
        args.pool => a.pool_capacity,
        args.iterations => a.total_iterations,
        args.rules => a.rules_per_solution,
        args.t_start => a.t_start,
        args.t_end => a.t_end,
        args.td_f => a.td_f,
        args.n_w => a.n_w,
        args.td_s => a.td_s,
        args.stall_limit => a.stall_limit,
        args.complexity_cap => a.complexity_cap,
        args.workers => a.workers,
        args.strategy => c.strategy,
        args.out => c.out,
        args.tokenizer.tokenizer => c.tokenizer,
    }
    if args.keep_negatives {
        c.anneal.filter_negatives = false;
    }
    if args.corpus.is_some() {
        c.corpus = args.corpus;
    }
    if args.test_corpus.is_some() {
        c.test_corpus = args.test_corpus;
    }
    if !args.classes.is_empty() {
        c.classes = args.classes;
    }
    if let Some(e) = args.embeddings {
        c.embeddings = EmbeddingSource::from(e);
    }
    if args.tokenizer.stop_words.is_some() {
        c.stop_words = args.tokenizer.stop_words;
    }
    Ok(c)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Train(args) => {
            let config = run_config(*args)?;
            let report = cmd_train(&config)?;
            print!("{}", report.to_text());
            Ok(())
        }
        Command::Eval(args) => {
            let tokenizer =
                tokenizer_config(args.tokenizer.tokenizer.unwrap_or_default(), args.tokenizer.stop_words.as_deref())?;
            let report = cmd_eval(&args.classifiers, &args.corpus, args.beta, &tokenizer)?;
            if let Some(out) = &args.out {
                write_eval_report(&report, out)?;
            }
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.to_text());
            }
            Ok(())
        }
        Command::Export { classifier } => {
            print!("{}", cmd_export(&classifier)?);
            Ok(())
        }
        Command::Synth { spec, seed, out } => {
            let n = cmd_synth(&spec, seed, &out)?;
            eprintln!("wrote {n} documents to {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rxlearn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
