//! The `el` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::baseline::{run_baseline, MentionDetectorConfig, BASELINE_LINKER_NAME};
use crate::error::{Error, Result};
use crate::eval::EvalOptions;
use crate::ingest::{ingest_benchmark, ingest_predictions, BenchmarkFormat, PredictionFormat};
use crate::kb::{load_kb, KnowledgeBase};
use crate::workspace::{validate_name, Workspace, WORKSPACE_ENV};

/// Linker name that selects the built-in baseline when no input is given.
pub const BASELINE_ALIAS: &str = "baseline";

#[derive(Debug, Parser)]
#[command(name = "el", version, about = "Evaluate entity linkers with fine-grained error categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Workspace directory
    #[arg(long, env = WORKSPACE_ENV, default_value = ".")]
    pub workspace: PathBuf,
    /// Knowledge base directory [default: <workspace>/kb]
    #[arg(long)]
    pub kb: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a benchmark into the workspace
    AddBenchmark {
        #[arg(long)]
        name: String,
        /// nif, aida-conll or simple-jsonl
        #[arg(long, value_parser = parse_benchmark_format)]
        format: BenchmarkFormat,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Convert linker output into the workspace, or run the baseline
    AddPredictions {
        #[arg(long)]
        benchmark: String,
        /// Linker name; `baseline` without --input runs the built-in baseline
        #[arg(long, alias = "name")]
        linker: String,
        /// nif, ambiverse or simple-jsonl
        #[arg(long, value_parser = parse_prediction_format)]
        format: Option<PredictionFormat>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Mention detector config for the baseline
        #[arg(long)]
        baseline_config: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate stored predictions and write results and cases files
    Evaluate {
        #[arg(long)]
        benchmark: String,
        #[arg(long)]
        linker: String,
        /// Evaluate on a single thread
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Serve the JSON API and UI assets
    Serve {
        #[arg(long, default_value_t = 8000)]
        port: u16,
        #[arg(long, env = WORKSPACE_ENV, default_value = ".")]
        workspace: PathBuf,
    },
}

fn parse_benchmark_format(s: &str) -> std::result::Result<BenchmarkFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_prediction_format(s: &str) -> std::result::Result<PredictionFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn kb(&self) -> Result<KnowledgeBase> {
        let dir = self.kb.clone().unwrap_or_else(|| self.workspace.join("kb"));
        let kb = load_kb(&dir)?;
        for warning in kb.warnings() {
            log::warn!("{warning}");
        }
        Ok(kb)
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Runs one command, writing the report to `out` and warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<stdout>", e);
    match cli.command {
        Command::AddBenchmark {
            name,
            format,
            input,
            force,
            common,
        } => {
            validate_name("benchmark", &name)?;
            let kb = common.kb()?;
            let ingested = ingest_benchmark(format, &read_input(&input)?, &name, &kb)?;
            let ws = Workspace::init(&common.workspace)?;
            let path = ws.write_benchmark(&name, &ingested.articles, force)?;
            for w in &ingested.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            writeln!(
                out,
                "{} articles, {} labels written to {}",
                ingested.articles.len(),
                ingested.label_count(),
                path.display()
            )
            .map_err(io)?;
        }
        Command::AddPredictions {
            benchmark,
            linker,
            format,
            input,
            baseline_config,
            force,
            common,
        } => {
            let ws = Workspace::init(&common.workspace)?;
            let kb = common.kb()?;
            let articles = ws.load_benchmark(&benchmark)?;
            let (experiment, warnings) = match (input, format) {
                (Some(input), Some(format)) => {
                    validate_name("linker", &linker)?;
                    let ingested = ingest_predictions(format, &read_input(&input)?, &benchmark, &linker, &articles, &kb)?;
                    (ingested.experiment, ingested.warnings)
                }
                (None, _) if linker == BASELINE_ALIAS || linker == BASELINE_LINKER_NAME => {
                    let config = match baseline_config {
                        Some(path) => MentionDetectorConfig::parse(&read_input(&path)?)?,
                        None => MentionDetectorConfig::default(),
                    };
                    (run_baseline(&benchmark, &articles, &kb, &config), Vec::new())
                }
                (None, _) => return Err(Error::invalid("--input is required unless --linker is `baseline`")),
                (Some(_), None) => return Err(Error::invalid("--format is required with --input")),
            };
            let path = ws.write_experiment(&experiment, force)?;
            for w in &warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            let count: usize = experiment.predictions.values().map(Vec::len).sum();
            writeln!(
                out,
                "{count} predictions for {} articles written to {}",
                experiment.predictions.len(),
                path.display()
            )
            .map_err(io)?;
        }
        Command::Evaluate {
            benchmark,
            linker,
            sequential,
            common,
        } => {
            let ws = Workspace::open(&common.workspace)?;
            let kb = common.kb()?;
            let result = ws.evaluate(&benchmark, &linker, &kb, EvalOptions { parallel: !sequential })?;
            let o = &result.overall;
            writeln!(
                out,
                "{benchmark}.{linker}: precision {:.4}  recall {:.4}  F1 {:.4}  (tp {}, fp {}, fn {})",
                o.precision, o.recall, o.f1, o.tp, o.fp, o.fn_
            )
            .map_err(io)?;
            let top = result.top_error_subcategories(3);
            if top.is_empty() {
                writeln!(out, "no errors").map_err(io)?;
            } else {
                writeln!(out, "top error subcategories:").map_err(io)?;
                for (name, count) in top {
                    writeln!(out, "  {name}: {count}").map_err(io)?;
                }
            }
            writeln!(out, "results written to {}", ws.results_path(&benchmark, &linker)?.display()).map_err(io)?;
        }
        Command::Serve { port, workspace } => {
            let ws = Workspace::open(workspace)?;
            writeln!(out, "serving {} on http://127.0.0.1:{port}", ws.root().display()).map_err(io)?;
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Error::Workspace(format!("cannot start runtime: {e}")))?;
            runtime.block_on(crate::service::serve(ws, port))?;
        }
    }
    Ok(())
}
