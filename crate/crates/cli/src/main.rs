use std::io::{BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ologism::model::Against;
use ologism::oracle::OracleConfig;
use ologism_cli::commands::{self, OracleMode, PATH_BOUND_VAR};
use ologism_cli::repl::Session;
use ologism_cli::report::{render, use_color, Format, Report};

/// Exit codes: 0 ok, 1 contradiction, violation or rejection, 2 invalid
/// input or usage, 3 I/O failure.
#[derive(Parser)]
#[command(name = "ologism", version, about = "Check ologisms: typed graphs of aspects with syllogistic premisses")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Disable colored status lines.
    #[arg(long, global = true)]
    no_color: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AgainstArg {
    Premisses,
    Closure,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Soundness,
    Completeness,
    Models,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document, list derived propositions and contradictions.
    Check {
        path: PathBuf,
        /// Decide an equation between parallel paths, e.g. "f ; g = h".
        #[arg(long = "equal", value_name = "EQUATION")]
        equations: Vec<String>,
    },
    /// Prove a syllogism with the diagrammatic calculus.
    Prove {
        /// Premiss literal such as A:S,P (repeatable).
        #[arg(long = "premiss", value_name = "LITERAL", required = true)]
        premisses: Vec<String>,
        /// Assume that the type is inhabited, i.e. add I(X,X).
        #[arg(long = "import", value_name = "TYPE")]
        imports: Vec<String>,
        #[arg(long, value_name = "LITERAL")]
        conclusion: String,
    },
    /// Classify all 256 two-premiss forms.
    Enumerate {
        /// Retry invalid forms with existential import.
        #[arg(long)]
        import: bool,
    },
    /// Check a model document against an ologism.
    ModelCheck {
        ologism: PathBuf,
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = AgainstArg::Closure)]
        against: AgainstArg,
    },
    /// Compare the closure with the finite-model semantics.
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        universe: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Soundness)]
        mode: ModeArg,
        /// Seed for sampled models.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled models for documents with general aspects.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Write the document as Graphviz DOT.
    ExportDot {
        path: PathBuf,
        /// Also draw derived propositions, dashed.
        #[arg(long)]
        derived: bool,
    },
    /// Interactive session; `help` lists the commands.
    Repl,
}

fn path_bound() -> Result<Option<usize>> {
    match std::env::var(PATH_BOUND_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse() {
            Ok(n) => Ok(Some(n)),
            Err(_) => bail!("{PATH_BOUND_VAR} must be a nonnegative integer, found `{v}`"),
        },
    }
}

fn run_repl(bound: Option<usize>) -> Result<()> {
    let mut session = Session::new(bound);
    let interactive = std::io::stdin().is_terminal();
    let mut stdout = std::io::stdout().lock();
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            write!(stdout, "ologism> ")?;
            stdout.flush()?;
        }
        let Some(line) = lines.next() else {
            return Ok(());
        };
        let reply = session.execute(&line.context("cannot read standard input")?);
        stdout.write_all(reply.text.as_bytes())?;
        if reply.quit {
            return Ok(());
        }
    }
}

fn run(cli: Cli) -> Result<Option<Report>> {
    let report = match cli.command {
        Command::Check { path, equations } => {
            let bound = path_bound()?;
            commands::check(&path, &equations, bound)?
        }
        Command::Prove {
            premisses,
            imports,
            conclusion,
        } => commands::prove_command(&premisses, &imports, &conclusion),
        Command::Enumerate { import } => commands::enumerate(import),
        Command::ModelCheck { ologism, model, against } => {
            let against = match against {
                AgainstArg::Premisses => Against::Premisses,
                AgainstArg::Closure => Against::Closure,
            };
            commands::model_check(&ologism, &model, against)?
        }
        Command::Oracle {
            path,
            universe,
            mode,
            seed,
            samples,
        } => {
            let mode = match mode {
                ModeArg::Soundness => OracleMode::Soundness,
                ModeArg::Completeness => OracleMode::Completeness,
                ModeArg::Models => OracleMode::Models,
            };
            let config = OracleConfig {
                universe_size: universe,
                seed,
                sample_count: samples,
                ..OracleConfig::default()
            };
            commands::oracle(&path, mode, &config)?
        }
        Command::ExportDot { path, derived } => commands::export_dot(&path, derived)?,
        Command::Repl => {
            run_repl(path_bound()?)?;
            return Ok(None);
        }
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let color = use_color(cli.no_color);
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            print!("{}", render(&report, format, color));
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let io = e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some());
            ExitCode::from(if io { 3 } else { 2 })
        }
    }
}
