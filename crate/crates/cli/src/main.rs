use clap::{Args, Parser, Subcommand};
use doctrina::Report;
use doctrina_cli::{run_eval, run_roundtrip, run_verify, ConfigError, FiberChoice, MutationChoice, SuiteConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Law suites for regular indexed monoidal structures over finite spans,
/// and an evaluator for undirected wiring diagrams.
#[derive(Parser)]
#[command(name = "doctrina", version)]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "DOCTRINA_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every law suite and emit one JSON record per clause.
    Verify(SuiteArgs),
    /// Double each doctrine, extract it back and compare.
    Roundtrip(SuiteArgs),
    /// Evaluate a wiring diagram on systems read from a file.
    Eval(EvalArgs),
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, value_enum, default_value = "both")]
    fiber: FiberChoice,
    /// Largest finite cost before ∞ in the tropical fiber.
    #[arg(long, default_value_t = 3)]
    k: u8,
    /// Largest set size enumerated.
    #[arg(long, default_value_t = 2)]
    max_size: usize,
    /// Allow --max-size above the cost guard.
    #[arg(long)]
    force: bool,
    /// all, surj, inj-right, inj-left, or a path to a JSON triple.
    #[arg(long, default_value = "all")]
    triple: String,
    /// Run the suites on a deliberately broken doctrine.
    #[arg(long, value_enum)]
    mutate: Option<MutationChoice>,
    /// Write the JSON lines here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a table of clauses instead of JSON lines.
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    diagram: String,
    /// Systems to wire in, tensored in the order given.
    #[arg(long = "system", required = true)]
    systems: Vec<String>,
    #[arg(long, default_value_t = 3)]
    k: u8,
    /// Compare against brute-force evaluation; exit 3 on mismatch.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Verify(a) => suite(a, run_verify),
        Command::Roundtrip(a) => suite(a, run_roundtrip),
        Command::Eval(a) => eval(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), ConfigError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| ConfigError(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| ConfigError(e.to_string())),
    }
}

fn suite(a: SuiteArgs, run: fn(&SuiteConfig) -> Report) -> Result<u8, ConfigError> {
    let cfg = SuiteConfig::new(&a.triple, a.fiber, a.k, a.max_size, a.force, a.mutate)?;
    let report = run(&cfg);
    if a.summary {
        print!("{}", report.summary());
        if a.out.is_some() {
            emit(&a.out, &report.to_jsonl())?;
        }
    } else {
        emit(&a.out, &report.to_jsonl())?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn eval(a: EvalArgs) -> Result<u8, ConfigError> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", a.input.display())))?;
    let outcome = run_eval(&text, &a.diagram, &a.systems, a.k, a.check)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    emit(&a.out, &format!("{}\n", outcome.record))?;
    Ok(if outcome.check == Some(false) { 3 } else { 0 })
}
