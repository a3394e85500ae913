//! `apizer`: APIze Java snippets from the command line, in bulk, and compare
//! the results with reference methods.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use apization::apizer::{apize_with, ApizeOptions};
use apization::eval::{
    evaluate, parse_method, type3_containment_with, EvalReport, CLONE_THRESHOLD,
};
use apization::namegen::VerbLexicon;
use apization::{ApizationResult, Outcome, SoPage, TypeCatalog};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "apizer",
    version,
    about = "Turn dangling Java snippets into method declarations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// APIze one snippet file and write Snippet<answer-id>.java.
    Apize(ApizeArgs),
    /// APIze every record of a JSON-lines file.
    Batch(BatchArgs),
    /// Compare reference methods with generated ones.
    Evaluate(EvaluateArgs),
    /// Measure line containment between snippets and methods.
    Clones(ClonesArgs),
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// Signature catalog in JSON-lines form; the bundled JDK catalog by default.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Time budget per snippet, e.g. `10s` or `500ms`.
    #[arg(long, default_value = "10s")]
    time_budget: humantime::Duration,
    /// Verb lexicon for method naming, one verb per line.
    #[arg(long)]
    verb_lexicon: Option<PathBuf>,
    /// Directory receiving the generated files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ApizeArgs {
    #[arg(long)]
    snippet: PathBuf,
    #[arg(long, default_value = "")]
    title: String,
    #[arg(long, default_value = "")]
    url: String,
    #[arg(long, default_value_t = 0)]
    answer_id: u64,
    #[arg(long, default_value_t = 0)]
    question_id: u64,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct BatchArgs {
    /// JSON-lines records: {"answer_id", "title", "url", "snippet"}.
    #[arg(long)]
    input: PathBuf,
    /// Worker threads; all cores by default.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Reference method source.
    #[arg(long, requires = "tool", conflicts_with = "pairs")]
    human: Option<PathBuf>,
    /// Generated method source.
    #[arg(long, requires = "human")]
    tool: Option<PathBuf>,
    /// JSON-lines pairs: {"id", "human", "tool"} with inline sources.
    #[arg(long, required_unless_present = "human")]
    pairs: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClonesArgs {
    /// JSON-lines pairs: {"id", "snippet", "method"} with inline sources.
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, default_value_t = CLONE_THRESHOLD)]
    threshold: f64,
}

#[derive(Debug, Clone, Deserialize)]
struct JobRecord {
    answer_id: u64,
    #[serde(default)]
    title: String,
    #[serde(default)]
    url: String,
    snippet: String,
    #[serde(default)]
    question_id: u64,
    #[serde(default)]
    #[allow(dead_code)]
    score: Option<i64>,
    #[serde(default)]
    #[allow(dead_code)]
    view_count: Option<u64>,
}

const EXIT_USAGE: u8 = 1;
const EXIT_SKIPPED: u8 = 2;
const EXIT_FAILED: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Apize(args) => cmd_apize(&args),
        Command::Batch(args) => cmd_batch(&args),
        Command::Evaluate(args) => cmd_evaluate(&args),
        Command::Clones(args) => cmd_clones(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

struct Pipeline {
    catalog: Option<TypeCatalog>,
    lexicon: Option<VerbLexicon>,
    budget: std::time::Duration,
    out: PathBuf,
}

impl Pipeline {
    fn new(args: &PipelineArgs) -> Result<Self> {
        let catalog = match &args.catalog {
            Some(path) => Some(
                TypeCatalog::load(path)
                    .with_context(|| format!("loading catalog {}", path.display()))?,
            ),
            None => None,
        };
        let lexicon = match &args.verb_lexicon {
            Some(path) => Some(
                VerbLexicon::load(path)
                    .with_context(|| format!("reading verb lexicon {}", path.display()))?,
            ),
            None => None,
        };
        fs::create_dir_all(&args.out)
            .with_context(|| format!("creating {}", args.out.display()))?;
        Ok(Pipeline {
            catalog,
            lexicon,
            budget: *args.time_budget,
            out: args.out.clone(),
        })
    }

    fn catalog(&self) -> &TypeCatalog {
        self.catalog
            .as_ref()
            .unwrap_or_else(|| TypeCatalog::bundled())
    }

    fn run(&self, snippet: &str, page: &SoPage) -> ApizationResult {
        let options = ApizeOptions {
            budget: self.budget,
            lexicon: self.lexicon.as_ref(),
        };
        apize_with(snippet, page, self.catalog(), &options)
    }

    /// Writes the compilation unit of a successful result.
    fn write(&self, result: &ApizationResult) -> Result<Option<PathBuf>> {
        let Some(source) = result.source() else {
            return Ok(None);
        };
        let path = self.out.join(format!("{}.java", result.class_name));
        fs::write(&path, source).with_context(|| format!("writing {}", path.display()))?;
        Ok(Some(path))
    }
}

fn exit_code(outcome: &Outcome) -> u8 {
    match outcome {
        Outcome::Apized | Outcome::AlreadyApi => 0,
        Outcome::Skipped(_) => EXIT_SKIPPED,
        Outcome::Failed(_) => EXIT_FAILED,
    }
}

fn cmd_apize(args: &ApizeArgs) -> Result<u8> {
    let snippet = fs::read_to_string(&args.snippet)
        .with_context(|| format!("reading snippet {}", args.snippet.display()))?;
    let pipeline = Pipeline::new(&args.pipeline)?;
    let page = SoPage::new(&args.title, &args.url, args.answer_id, args.question_id);
    let result = pipeline.run(&snippet, &page);
    println!("{}", result.outcome);
    if let Some(path) = pipeline.write(&result)? {
        println!("wrote {}", path.display());
    }
    Ok(exit_code(&result.outcome))
}

enum Job {
    Record(JobRecord),
    Rejected {
        answer_id: Option<u64>,
        reason: String,
    },
}

fn read_jobs(input: &Path) -> Result<Vec<(usize, Job)>> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let mut seen = BTreeSet::new();
    let mut jobs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let job = match serde_json::from_str::<JobRecord>(line) {
            Err(e) => Job::Rejected {
                answer_id: None,
                reason: format!("parse: {e}"),
            },
            Ok(r) if r.snippet.trim().is_empty() => Job::Rejected {
                answer_id: Some(r.answer_id),
                reason: "parse: empty snippet".into(),
            },
            Ok(r) if !seen.insert(r.answer_id) => Job::Rejected {
                answer_id: Some(r.answer_id),
                reason: "parse: duplicate answer id".into(),
            },
            Ok(r) => Job::Record(r),
        };
        jobs.push((i + 1, job));
    }
    Ok(jobs)
}

fn cmd_batch(args: &BatchArgs) -> Result<u8> {
    let pipeline = Pipeline::new(&args.pipeline)?;
    let jobs = read_jobs(&args.input)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.jobs {
        if n == 0 {
            bail!("--jobs must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("starting worker pool")?;

    let lines: Vec<(String, String)> = pool.install(|| {
        jobs.par_iter()
            .map(|(line, job)| match job {
                Job::Rejected { answer_id, reason } => {
                    let who = answer_id.map_or_else(|| format!("line {line}"), |id| id.to_string());
                    (who, Outcome::Failed(reason.clone()).to_string())
                }
                Job::Record(r) => {
                    let page = SoPage::new(&r.title, &r.url, r.answer_id, r.question_id);
                    let result = pipeline.run(&r.snippet, &page);
                    let outcome = match pipeline.write(&result) {
                        Ok(_) => result.outcome.to_string(),
                        Err(e) => Outcome::Failed(format!("io: {e:#}")).to_string(),
                    };
                    (r.answer_id.to_string(), outcome)
                }
            })
            .collect()
    });

    let mut counts: BTreeMap<&str, usize> = ["apized", "already-api", "skipped", "failed"]
        .into_iter()
        .map(|k| (k, 0))
        .collect();
    for (who, outcome) in &lines {
        println!("{who} {outcome}");
        let label = outcome.split(':').next().unwrap_or("failed");
        if let Some(c) = counts.get_mut(label) {
            *c += 1;
        }
    }
    println!(
        "apized={} already-api={} skipped={} failed={}",
        counts["apized"], counts["already-api"], counts["skipped"], counts["failed"]
    );
    Ok(0)
}

#[derive(Debug, Deserialize)]
struct EvalPair {
    #[serde(default)]
    id: Value,
    human: String,
    tool: String,
}

fn evaluate_sources(human: &str, tool: &str) -> Result<EvalReport> {
    let h = parse_method(human).context("reference method")?;
    let a = parse_method(tool).context("generated method")?;
    Ok(evaluate(&h, &a))
}

#[derive(Debug, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
struct CategoryCount {
    pairs: usize,
    equivalent: usize,
}

#[derive(Debug, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
struct EvalSummary {
    pairs: usize,
    errors: usize,
    identical_params: usize,
    identical_returns: usize,
    identical_apis: usize,
    zero_ast_diff: usize,
    median_jaccard: Option<f64>,
    return_categories: BTreeMap<&'static str, CategoryCount>,
}

fn summarize(reports: &[EvalReport], errors: usize) -> EvalSummary {
    let mut s = EvalSummary {
        pairs: reports.len() + errors,
        errors,
        ..EvalSummary::default()
    };
    for r in reports {
        s.identical_params += usize::from(r.params_equivalent);
        s.identical_returns += usize::from(r.return_equivalent);
        s.identical_apis += usize::from(r.params_equivalent && r.return_equivalent);
        s.zero_ast_diff += usize::from(r.ast_diff == 0);
        let c = s
            .return_categories
            .entry(r.return_category.label())
            .or_default();
        c.pairs += 1;
        c.equivalent += usize::from(r.return_equivalent);
    }
    let mut j: Vec<f64> = reports.iter().map(|r| r.jaccard).collect();
    j.sort_by(f64::total_cmp);
    s.median_jaccard = match j.len() {
        0 => None,
        n if n % 2 == 1 => Some(j[n / 2]),
        n => Some((j[n / 2 - 1] + j[n / 2]) / 2.0),
    };
    s
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<u8> {
    if let (Some(human), Some(tool)) = (&args.human, &args.tool) {
        let h =
            fs::read_to_string(human).with_context(|| format!("reading {}", human.display()))?;
        let t = fs::read_to_string(tool).with_context(|| format!("reading {}", tool.display()))?;
        return Ok(match evaluate_sources(&h, &t) {
            Ok(report) => {
                println!("{}", serde_json::to_string(&report)?);
                0
            }
            Err(e) => {
                println!("{}", json!({ "error": format!("{e:#}") }));
                EXIT_FAILED
            }
        });
    }
    let Some(pairs) = &args.pairs else {
        bail!("either --human and --tool, or --pairs, is required");
    };
    let text = fs::read_to_string(pairs).with_context(|| format!("reading {}", pairs.display()))?;
    let mut reports = Vec::new();
    let mut errors = 0;
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let record = serde_json::from_str::<EvalPair>(line)
            .map_err(anyhow::Error::from)
            .and_then(|p| evaluate_sources(&p.human, &p.tool).map(|r| (p.id, r)));
        match record {
            Ok((id, report)) => {
                println!("{}", json!({ "id": id, "report": report }));
                reports.push(report);
            }
            Err(e) => {
                errors += 1;
                println!("{}", json!({ "line": i + 1, "error": format!("{e:#}") }));
            }
        }
    }
    println!("{}", json!({ "summary": summarize(&reports, errors) }));
    Ok(if reports.is_empty() { EXIT_FAILED } else { 0 })
}

#[derive(Debug, Deserialize)]
struct ClonePair {
    #[serde(default)]
    id: Value,
    snippet: String,
    method: String,
}

fn cmd_clones(args: &ClonesArgs) -> Result<u8> {
    if !(0.0..=1.0).contains(&args.threshold) {
        bail!("--threshold must lie in [0, 1]");
    }
    let text = fs::read_to_string(&args.pairs)
        .with_context(|| format!("reading {}", args.pairs.display()))?;
    let mut ok = 0;
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let record = serde_json::from_str::<ClonePair>(line)
            .map_err(anyhow::Error::from)
            .and_then(|p| {
                type3_containment_with(&p.snippet, &p.method, args.threshold)
                    .map(|r| (p.id, r))
                    .map_err(anyhow::Error::from)
            });
        match record {
            Ok((id, (ratio, is_clone))) => {
                ok += 1;
                println!(
                    "{}",
                    json!({ "id": id, "ratio": ratio, "is-clone": is_clone })
                );
            }
            Err(e) => println!("{}", json!({ "line": i + 1, "error": format!("{e:#}") })),
        }
    }
    Ok(if ok > 0 { 0 } else { EXIT_FAILED })
}
