use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use citor_cli::session::{Command, Session};
use citor_cli::{document_status, emit_report, parse_session, run_session, CliError, FieldChoice, Format, Options};

/// Commutative algebra over graded quotient rings: resolutions, Tor/Ext,
/// depth, pushforwards and a theorem checker.
#[derive(Parser, Debug)]
#[command(name = "citor", version)]
struct Args {
    /// Script file to run (`-` reads standard input).
    #[arg(long, conflicts_with = "example")]
    script: Option<PathBuf>,

    /// Run a catalog example (e.g. 3.14, 4.19, cor4.7).
    #[arg(long)]
    example: Option<String>,

    #[arg(long, env = "CITOR_FORMAT", default_value = "text")]
    format: Format,

    /// Field for rings that do not name one: f32003 or rational.
    #[arg(long, default_value = "f32003", value_parser = parse_field)]
    field: FieldChoice,

    /// Resolution length for resolve/betti/check when not given in the script.
    #[arg(long)]
    steps: Option<usize>,

    #[arg(long, default_value_t = 5)]
    tor_bound: usize,

    /// Hilbert values shown by `profile`.
    #[arg(long, default_value_t = 6)]
    degree_bound: i32,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Record wall-clock timings in theorem reports.
    #[arg(long)]
    timings: bool,

    /// List catalog examples and theorem ids, then exit.
    #[arg(long)]
    list: bool,
}

fn parse_field(s: &str) -> Result<FieldChoice, String> {
    FieldChoice::parse(s).ok_or_else(|| format!("unknown field `{s}` (use f32003 or rational)"))
}

fn load(args: &Args) -> Result<Session, CliError> {
    if let Some(id) = &args.example {
        let id = citor_cli::catalog::entry(id)?.id.to_string();
        return Ok(Session { commands: vec![Command::Example { id }], ..Session::default() });
    }
    let text = match args.script.as_deref() {
        Some(p) if p.as_os_str() == "-" => std::io::read_to_string(std::io::stdin())?,
        Some(p) => std::fs::read_to_string(p)?,
        None => return Err(CliError::Usage("give --script FILE or --example ID".into())),
    };
    Ok(parse_session(&text)?)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for e in citor_cli::CATALOG {
            println!("example {:8} {}", e.id, e.title);
        }
        println!("theorems {}", citor_core::constructions::theorem_ids().join(" "));
        return ExitCode::SUCCESS;
    }
    let opts = Options {
        format: args.format,
        field: args.field,
        steps: args.steps,
        tor_bound: args.tor_bound,
        degree_bound: args.degree_bound,
        seed: args.seed,
        timings: args.timings,
    };
    let result = load(&args).and_then(|s| run_session(&s, &opts));
    match result {
        Ok(doc) => {
            print!("{}", emit_report(&doc, opts.format));
            ExitCode::from(document_status(&doc) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
