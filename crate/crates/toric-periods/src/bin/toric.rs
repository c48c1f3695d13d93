use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use toric_periods::cli::{emit_corpus, run, run_batch, Command, Options, Outcome, CORPUS_PRIMES, DEFAULT_SEARCH_BOUND};

#[derive(Parser)]
#[command(name = "toric", version, about = "Local and global toric period dichotomies from JSON task descriptions")]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,
    #[command(flatten)]
    flags: Flags,
    /// JSON array of {command, payload, options} tasks.
    #[arg(long, global = true)]
    batch: Option<PathBuf>,
}

#[derive(Args)]
struct Flags {
    /// p-adic working digits, overriding the field descriptors.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// |L(1/2)| at or below this counts as zero.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BOUND)]
    search_bound: u64,
    /// Evaluate missing central L-values numerically.
    #[arg(long, global = true)]
    enable_lvalue: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Payload file; standard input when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hermitian classes, embedding classes and the class of a given lambda.
    Classify,
    /// A Tate epsilon factor or the epsilon sign vector of an instance.
    Epsilon,
    /// dim Hom for one (E, lambda, V) and characters.
    LocalDichotomy,
    /// The sum of dim Hom over all V and embedding classes.
    SumCheck,
    /// lambda with prescribed local symbols (lambda, d)_v.
    FindLambda,
    /// The global period decision.
    GlobalDecide,
    /// Write a deterministic corpus of local instances.
    EmitCorpus {
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 2)]
        per_setting: usize,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<i128>>,
    },
}

fn read_input(path: &Option<PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn emit(out: Outcome) -> ExitCode {
    let text = serde_json::to_string_pretty(&out.body).expect("json");
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(out.exit_code as u8)
}

fn input_error(message: String) -> ExitCode {
    emit(Outcome { body: json!({"error_kind": "InputError", "message": message}), exit_code: 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let f = &cli.flags;
    let options = Options {
        precision: f.precision,
        tolerance: f.tolerance,
        search_bound: f.search_bound,
        enable_lvalue: f.enable_lvalue,
        seed: f.seed,
    };
    let command = match cli.command {
        Some(Cmd::EmitCorpus { output, per_setting, primes }) => {
            let primes = primes.unwrap_or_else(|| CORPUS_PRIMES.to_vec());
            return match emit_corpus(&output, f.seed, &primes, per_setting) {
                Ok(m) => emit(Outcome {
                    body: json!({"directory": output.display().to_string(), "count": m.len(), "seed": f.seed}),
                    exit_code: 0,
                }),
                Err(e) => emit(Outcome { body: json!({"error_kind": e.kind(), "message": e.to_string()}), exit_code: 1 }),
            };
        }
        Some(Cmd::Classify) => Some(Command::Classify),
        Some(Cmd::Epsilon) => Some(Command::Epsilon),
        Some(Cmd::LocalDichotomy) => Some(Command::LocalDichotomy),
        Some(Cmd::SumCheck) => Some(Command::SumCheck),
        Some(Cmd::FindLambda) => Some(Command::FindLambda),
        Some(Cmd::GlobalDecide) => Some(Command::GlobalDecide),
        None => None,
    };
    match (command, &cli.batch) {
        (None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(text) => emit(run_batch(&text, &options)),
            Err(e) => input_error(format!("{}: {e}", path.display())),
        },
        (Some(c), None) => match read_input(&f.input) {
            Ok(text) => emit(run(c, &text, &options)),
            Err(e) => input_error(e.to_string()),
        },
        (Some(_), Some(_)) => input_error("--batch takes the commands from the batch file".into()),
        (None, None) => input_error("a command or --batch is required".into()),
    }
}
