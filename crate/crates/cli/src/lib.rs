//! The `uiverify` commands. Each returns the process exit code: 0 when
//! clean, 1 when there are findings or failing scenarios, 2 when something
//! could not be read, parsed or validated.

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use uiverify_core::ontology::{check_consistency, load_ontology, OntologyModel, DEFAULT_ONTOLOGY};
use uiverify_core::prototype::{load_prototype, Prototype};
use uiverify_core::report::{render_consistency, render_lint, render_run, Format, StoryFindings};
use uiverify_core::story::{bind_steps, parse_story, UserStory};
use uiverify_core::verifier::{
    execute_scenario, lint, lint_against_prototype, ScenarioResult, ScenarioVerdict, VerificationReport,
};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

pub const ONTOLOGY_ENV: &str = "UIVERIFY_ONTOLOGY";

/// Options shared by all commands.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub fail_fast: bool,
    pub no_color: bool,
}

impl RunConfig {
    fn color(&self) -> bool {
        !self.no_color && self.output.is_none() && self.format == Format::Text && io::stdout().is_terminal()
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

/// Where the ontology comes from when a command is not given a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OntologySource {
    Path(PathBuf),
    Builtin,
}

impl OntologySource {
    /// An explicit path, else `UIVERIFY_ONTOLOGY`, else the built-in model.
    pub fn resolve(explicit: Option<PathBuf>) -> OntologySource {
        explicit
            .or_else(|| std::env::var_os(ONTOLOGY_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(OntologySource::Path)
            .unwrap_or(OntologySource::Builtin)
    }

    fn label(&self) -> String {
        match self {
            OntologySource::Path(p) => p.display().to_string(),
            OntologySource::Builtin => "built-in".to_owned(),
        }
    }

    fn read(&self) -> Result<String> {
        match self {
            OntologySource::Path(p) => read(p),
            OntologySource::Builtin => Ok(DEFAULT_ONTOLOGY.to_owned()),
        }
    }

    fn load(&self) -> Result<OntologyModel> {
        load_ontology(&self.read()?).map_err(|e| anyhow!("{}: {e}", self.label()))
    }
}

/// Whether a positional argument names an ontology rather than a story or
/// prototype.
pub fn is_ontology_path(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.ends_with(".onto.json"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_story(path: &Path) -> Result<UserStory> {
    parse_story(&read(path)?).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn load_proto(path: &Path, model: &OntologyModel) -> Result<Prototype> {
    let proto = load_prototype(&read(path)?, model).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    for warning in proto.warnings() {
        eprintln!("warning: {}: {warning}", path.display());
    }
    Ok(proto)
}

fn finish(result: Result<i32>) -> i32 {
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        EXIT_ERROR
    })
}

pub fn cmd_check_ontology(ontology: &OntologySource, config: &RunConfig) -> i32 {
    finish((|| {
        let model = OntologyModel::parse_unchecked(&ontology.read()?).map_err(|e| anyhow!("{}: {e}", ontology.label()))?;
        let report = check_consistency(&model);
        config.emit(&render_consistency(&ontology.label(), &report, config.format, config.color()))?;
        Ok(if report.findings.is_empty() { EXIT_CLEAN } else { EXIT_FINDINGS })
    })())
}

pub fn cmd_lint(ontology: &OntologySource, stories: &[PathBuf], prototype: Option<&Path>, config: &RunConfig) -> i32 {
    finish((|| {
        let model = ontology.load()?;
        let proto = prototype.map(|p| load_proto(p, &model)).transpose()?;
        let mut results = Vec::new();
        for path in stories {
            let story = load_story(path)?;
            let findings = match &proto {
                Some(proto) => lint_against_prototype(&story, &model, proto),
                None => lint(&story, &model),
            };
            results.push(StoryFindings {
                source: path.display().to_string(),
                story: story.title,
                findings,
            });
        }
        config.emit(&render_lint(&results, config.format, config.color()))?;
        let clean = results.iter().all(|r| r.findings.is_empty());
        Ok(if clean { EXIT_CLEAN } else { EXIT_FINDINGS })
    })())
}

pub fn cmd_run(ontology: &OntologySource, prototype: &Path, stories: &[PathBuf], config: &RunConfig) -> i32 {
    finish((|| {
        let model = ontology.load()?;
        let proto = load_proto(prototype, &model)?;
        // parse everything before running anything
        let stories = stories.iter().map(|p| load_story(p)).collect::<Result<Vec<_>>>()?;
        let reports = run_stories(&stories, &model, &proto, config.fail_fast);
        config.emit(&render_run(&reports, config.format, config.color()))?;
        let clean = reports.iter().all(VerificationReport::passed);
        Ok(if clean { EXIT_CLEAN } else { EXIT_FINDINGS })
    })())
}

/// Executes the stories in order. With `fail_fast`, every scenario after
/// the first failing one is reported as not run.
pub fn run_stories(
    stories: &[UserStory],
    model: &OntologyModel,
    proto: &Prototype,
    fail_fast: bool,
) -> Vec<VerificationReport> {
    let mut stopped = false;
    stories
        .iter()
        .map(|story| {
            let scenarios: Vec<ScenarioResult> = bind_steps(story, model)
                .iter()
                .map(|scenario| {
                    if stopped {
                        return ScenarioResult::not_run(scenario);
                    }
                    let result = execute_scenario(scenario, model, proto);
                    stopped = fail_fast && result.overall == ScenarioVerdict::Fail;
                    result
                })
                .collect();
            VerificationReport::new(story.title.clone(), scenarios)
        })
        .collect()
}
