use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nobody::document::ProblemDocument;
use nobody::report::{self, ErrorReport};
use nobody::scalar::parse_rat;
use nobody::{fixtures, Error};

/// Exact Newton-Okounkov bodies of exceptional curve valuations.
#[derive(Parser)]
#[command(name = "nobody", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document and list its points with their proximities.
    Validate { doc: PathBuf },
    /// Multiplicities, maximal contact values and Puiseux exponents of ν_r.
    Invariants { doc: PathBuf },
    /// The dual graph as adjacency JSON, or DOT with --dot.
    Dualgraph {
        doc: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// The Newton-Okounkov body.
    Body {
        doc: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Zariski decomposition of H − t·E_r (line-support documents only).
    Zariski {
        doc: PathBuf,
        #[arg(long = "t")]
        t: String,
    },
    /// Print a built-in example document: enric, example1, example2 or example3.
    Fixture { name: String },
}

enum Failure {
    Schema(ErrorReport),
    Math(ErrorReport),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let rep = ErrorReport::from(&e);
        if e.is_schema_error() {
            Failure::Schema(rep)
        } else {
            Failure::Math(rep)
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Schema(ErrorReport {
        code: "Io".into(),
        message: format!("{}: {e}", path.display()),
    })
}

fn load(path: &Path) -> Result<ProblemDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(ProblemDocument::parse(&text)?)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Validate { doc } => {
            let rep = report::validate(&load(doc)?);
            let text = json(&rep);
            if rep.valid {
                Ok(text)
            } else {
                Err(Failure::Invalid(text))
            }
        }
        Command::Invariants { doc } => Ok(json(&report::invariants(&load(doc)?)?)),
        Command::Dualgraph { doc, dot } => {
            let g = report::dual_graph(&load(doc)?)?;
            Ok(if *dot { g.to_dot() } else { json(&g) })
        }
        Command::Body { doc, svg } => {
            let rep = report::body(&load(doc)?)?;
            if let Some(path) = svg {
                fs::write(path, report::body_svg(&rep.body)).map_err(|e| io_failure(path, e))?;
            }
            Ok(json(&rep))
        }
        Command::Zariski { doc, t } => {
            let t = parse_rat(t)?;
            Ok(json(&report::zariski(&load(doc)?, &t)?))
        }
        Command::Fixture { name } => match fixtures::by_name(name) {
            Some(d) => Ok(d.to_json() + "\n"),
            None => Err(Failure::Schema(ErrorReport {
                code: "UnknownFixture".into(),
                message: format!("no fixture named {name:?}"),
            })),
        },
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| emit(&cli, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(text)) => {
            let _ = emit(&cli, &text);
            ExitCode::from(1)
        }
        Err(Failure::Schema(rep)) => {
            eprintln!("{}", serde_json::to_string(&rep).expect("error serializes"));
            ExitCode::from(2)
        }
        Err(Failure::Math(rep)) => {
            eprintln!("{}", serde_json::to_string(&rep).expect("error serializes"));
            ExitCode::from(3)
        }
    }
}
