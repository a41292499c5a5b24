use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use uiverify::{cmd_check_ontology, cmd_lint, cmd_run, is_ontology_path, OntologySource, RunConfig, EXIT_ERROR};
use uiverify_core::report::Format;

/// Check user stories against a behavior ontology and run them on UI
/// prototypes.
#[derive(Parser)]
#[command(name = "uiverify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format: text, json or junit.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Stop running scenarios after the first failure.
    #[arg(long, global = true)]
    fail_fast: bool,
    /// Never color the text report.
    #[arg(long, global = true)]
    no_color: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check an ontology for consistency.
    CheckOntology {
        /// Ontology file; defaults to $UIVERIFY_ONTOLOGY, then the built-in model.
        ontology: Option<PathBuf>,
    },
    /// Lint stories against the ontology, and a prototype if given.
    Lint {
        /// [ONTOLOGY.onto.json] STORY...
        #[arg(required = true, value_name = "FILES")]
        files: Vec<PathBuf>,
        #[arg(long, value_name = "PROTO")]
        prototype: Option<PathBuf>,
    },
    /// Run the stories' scenarios on a prototype.
    Run {
        /// [ONTOLOGY.onto.json] PROTOTYPE STORY...
        #[arg(required = true, num_args = 2.., value_name = "FILES")]
        files: Vec<PathBuf>,
    },
}

/// Splits off a leading `*.onto.json` argument.
fn split_ontology(mut files: Vec<PathBuf>) -> (OntologySource, Vec<PathBuf>) {
    let explicit = match files.first() {
        Some(first) if is_ontology_path(first) => Some(files.remove(0)),
        _ => None,
    };
    (OntologySource::resolve(explicit), files)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        format: cli.common.format,
        output: cli.common.output,
        fail_fast: cli.common.fail_fast,
        no_color: cli.common.no_color,
    };
    let code = match cli.command {
        Command::CheckOntology { ontology } => cmd_check_ontology(&OntologySource::resolve(ontology), &config),
        Command::Lint { files, prototype } => {
            let (ontology, stories) = split_ontology(files);
            if stories.is_empty() {
                eprintln!("error: no story files given");
                EXIT_ERROR
            } else {
                cmd_lint(&ontology, &stories, prototype.as_deref(), &config)
            }
        }
        Command::Run { files } => {
            let (ontology, mut rest) = split_ontology(files);
            if rest.len() < 2 {
                eprintln!("error: expected a prototype and at least one story");
                EXIT_ERROR
            } else {
                let prototype = rest.remove(0);
                cmd_run(&ontology, &prototype, &rest, &config)
            }
        }
    };
    ExitCode::from(code as u8)
}
