//! On-disk workspace: the single store for benchmarks, predictions, results
//! and the knowledge base.
//!
//! ```text
//! <root>/
//!   kb/                                   knowledge base tables
//!   benchmarks/<name>.jsonl               article JSONL
//!   experiments/<b>.<l>.predictions.jsonl prediction JSONL
//!   experiments/<b>.<l>.results.json      ExperimentResult without cases
//!   experiments/<b>.<l>.cases.jsonl       one ArticleCases per line
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eval::{evaluate_experiment_with, EvalOptions, ExperimentResult};
use crate::kb::{load_kb, KnowledgeBase};
use crate::model::{parse_articles, parse_experiment, serialize_articles, serialize_experiment, Article, Experiment};

/// Environment variable naming the default workspace directory.
pub const WORKSPACE_ENV: &str = "EL_WORKSPACE";

const BENCHMARKS: &str = "benchmarks";
const EXPERIMENTS: &str = "experiments";
const KB: &str = "kb";
const PREDICTIONS_SUFFIX: &str = ".predictions.jsonl";
const RESULTS_SUFFIX: &str = ".results.json";
const CASES_SUFFIX: &str = ".cases.jsonl";

/// Benchmark and linker names must match `[a-z0-9_-]+`.
pub fn validate_name(kind: &str, name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(Error::Workspace(format!("invalid {kind} name `{name}`: must match [a-z0-9_-]+")))
    }
}

/// A benchmark/linker pair with results on disk.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExperimentKey {
    pub benchmark: String,
    pub linker: String,
}

#[derive(Debug, Clone)]
pub struct Workspace {
    root: PathBuf,
}

impl Workspace {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Workspace { root: root.into() }
    }

    /// Creates the directory layout if missing.
    pub fn init(root: impl Into<PathBuf>) -> Result<Self> {
        let ws = Workspace::new(root);
        for dir in [ws.benchmarks_dir(), ws.experiments_dir(), ws.kb_dir()] {
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        Ok(ws)
    }

    /// Opens an existing workspace.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let ws = Workspace::new(root);
        if !ws.root.is_dir() {
            return Err(Error::Workspace(format!("`{}` is not a directory", ws.root.display())));
        }
        Ok(ws)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn benchmarks_dir(&self) -> PathBuf {
        self.root.join(BENCHMARKS)
    }

    pub fn experiments_dir(&self) -> PathBuf {
        self.root.join(EXPERIMENTS)
    }

    pub fn kb_dir(&self) -> PathBuf {
        self.root.join(KB)
    }

    pub fn benchmark_path(&self, name: &str) -> Result<PathBuf> {
        validate_name("benchmark", name)?;
        Ok(self.benchmarks_dir().join(format!("{name}.jsonl")))
    }

    fn experiment_file(&self, benchmark: &str, linker: &str, suffix: &str) -> Result<PathBuf> {
        validate_name("benchmark", benchmark)?;
        validate_name("linker", linker)?;
        Ok(self.experiments_dir().join(format!("{benchmark}.{linker}{suffix}")))
    }

    pub fn predictions_path(&self, benchmark: &str, linker: &str) -> Result<PathBuf> {
        self.experiment_file(benchmark, linker, PREDICTIONS_SUFFIX)
    }

    pub fn results_path(&self, benchmark: &str, linker: &str) -> Result<PathBuf> {
        self.experiment_file(benchmark, linker, RESULTS_SUFFIX)
    }

    pub fn cases_path(&self, benchmark: &str, linker: &str) -> Result<PathBuf> {
        self.experiment_file(benchmark, linker, CASES_SUFFIX)
    }

    /// Benchmark names, sorted.
    pub fn list_benchmarks(&self) -> Result<Vec<String>> {
        let mut names: Vec<String> = list_dir(&self.benchmarks_dir())?
            .into_iter()
            .filter_map(|f| f.strip_suffix(".jsonl").map(str::to_string))
            .filter(|n| validate_name("benchmark", n).is_ok())
            .collect();
        names.sort();
        Ok(names)
    }

    /// Experiments that have a results file, sorted by benchmark then linker.
    pub fn list_experiments(&self) -> Result<Vec<ExperimentKey>> {
        let mut keys: Vec<ExperimentKey> = list_dir(&self.experiments_dir())?
            .into_iter()
            .filter_map(|f| {
                let (benchmark, linker) = f.strip_suffix(RESULTS_SUFFIX)?.split_once('.')?;
                let valid = validate_name("benchmark", benchmark).is_ok() && validate_name("linker", linker).is_ok();
                valid.then(|| ExperimentKey {
                    benchmark: benchmark.to_string(),
                    linker: linker.to_string(),
                })
            })
            .collect();
        keys.sort();
        Ok(keys)
    }

    pub fn load_kb(&self) -> Result<KnowledgeBase> {
        load_kb(&self.kb_dir())
    }

    pub fn load_benchmark(&self, name: &str) -> Result<Vec<Article>> {
        let path = self.benchmark_path(name)?;
        let text = read_existing(&path, || format!("benchmark `{name}` does not exist"))?;
        parse_articles(&text).map_err(|e| in_file(&path, e))
    }

    pub fn load_experiment(&self, benchmark: &str, linker: &str, articles: &[Article]) -> Result<Experiment> {
        let path = self.predictions_path(benchmark, linker)?;
        let text = read_existing(&path, || format!("no predictions for linker `{linker}` on benchmark `{benchmark}`"))?;
        parse_experiment(&text, benchmark, linker, articles).map_err(|e| in_file(&path, e))
    }

    pub fn write_benchmark(&self, name: &str, articles: &[Article], force: bool) -> Result<PathBuf> {
        let path = self.benchmark_path(name)?;
        write_new(&path, &serialize_articles(articles), force)?;
        Ok(path)
    }

    pub fn write_experiment(&self, experiment: &Experiment, force: bool) -> Result<PathBuf> {
        let path = self.predictions_path(&experiment.benchmark_name, &experiment.linker_name)?;
        write_new(&path, &serialize_experiment(experiment), force)?;
        Ok(path)
    }

    /// Evaluates stored predictions and writes the results and cases files.
    pub fn evaluate(&self, benchmark: &str, linker: &str, kb: &KnowledgeBase, options: EvalOptions) -> Result<ExperimentResult> {
        let articles = self.load_benchmark(benchmark)?;
        let experiment = self.load_experiment(benchmark, linker, &articles)?;
        let result = evaluate_experiment_with(&articles, &experiment, kb, options)?;
        let results_path = self.results_path(benchmark, linker)?;
        let cases_path = self.cases_path(benchmark, linker)?;
        write_file(&results_path, &result.to_results_json())?;
        write_file(&cases_path, &result.to_cases_jsonl())?;
        Ok(result)
    }
}

fn list_dir(dir: &Path) -> Result<Vec<String>> {
    let entries = match fs::read_dir(dir) {
        Ok(entries) => entries,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::io(dir, e)),
    };
    let mut names = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if let Some(name) = entry.file_name().to_str() {
            names.push(name.to_string());
        }
    }
    Ok(names)
}

fn read_existing(path: &Path, missing: impl FnOnce() -> String) -> Result<String> {
    match fs::read_to_string(path) {
        Ok(text) => Ok(text),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::Workspace(missing())),
        Err(e) => Err(Error::io(path, e)),
    }
}

fn in_file(path: &Path, err: Error) -> Error {
    Error::Workspace(format!("{}: {err}", path.display()))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

/// Writes `content`, refusing to replace an existing file unless `force`.
pub fn write_new(path: &Path, content: &str, force: bool) -> Result<()> {
    if !force && path.exists() {
        return Err(Error::Workspace(format!(
            "`{}` already exists (use --force to overwrite)",
            path.display()
        )));
    }
    write_file(path, content)
}
