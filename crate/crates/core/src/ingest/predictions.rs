//! Linker output readers: NIF, Ambiverse JSON and simple JSONL.
//!
//! Every reader resolves references with [`KnowledgeBase::resolve_reference`],
//! the same path used for ground truth, and produces one prediction list per
//! benchmark article (empty when the linker output has none).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{from_json_line, Error, Result};
use crate::kb::KnowledgeBase;
use crate::model::{validate_predictions, Article, EntityRef, Experiment, Prediction, Span};
use crate::nif::{parse_nif_document, preferred_reference};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionFormat {
    Nif,
    Ambiverse,
    SimpleJsonl,
}

impl PredictionFormat {
    pub const ALL: [PredictionFormat; 3] = [
        PredictionFormat::Nif,
        PredictionFormat::Ambiverse,
        PredictionFormat::SimpleJsonl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PredictionFormat::Nif => "nif",
            PredictionFormat::Ambiverse => "ambiverse",
            PredictionFormat::SimpleJsonl => "simple-jsonl",
        }
    }
}

impl fmt::Display for PredictionFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PredictionFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown prediction format `{s}` (expected nif, ambiverse or simple-jsonl)")))
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestedPredictions {
    pub experiment: Experiment,
    pub warnings: Vec<String>,
}

pub fn ingest_predictions(
    format: PredictionFormat,
    input: &str,
    benchmark_name: &str,
    linker_name: &str,
    benchmark: &[Article],
    kb: &KnowledgeBase,
) -> Result<IngestedPredictions> {
    let predictions = match format {
        PredictionFormat::Nif => parse_predictions_nif(input, benchmark, kb)?,
        PredictionFormat::Ambiverse => parse_predictions_ambiverse(input, benchmark, kb)?,
        PredictionFormat::SimpleJsonl => return parse_predictions_simple_jsonl(input, benchmark_name, linker_name, benchmark, kb),
    };
    Ok(IngestedPredictions {
        experiment: assemble(benchmark_name, linker_name, benchmark, predictions)?,
        warnings: Vec::new(),
    })
}

/// Builds an experiment in benchmark order, validating each article's list.
fn assemble(
    benchmark_name: &str,
    linker_name: &str,
    benchmark: &[Article],
    mut per_article: Vec<Vec<Prediction>>,
) -> Result<Experiment> {
    let mut experiment = Experiment::new(benchmark_name, linker_name);
    for (article, predictions) in benchmark.iter().zip(per_article.iter_mut()) {
        predictions.sort_by_key(|p| p.span);
        validate_predictions(article, predictions)?;
        experiment
            .predictions
            .insert(article.id.clone(), std::mem::take(predictions));
    }
    Ok(experiment)
}

/// Aligns contexts to articles by identical text, falling back to an article
/// id embedded in the context IRI.
pub fn parse_predictions_nif(input: &str, benchmark: &[Article], kb: &KnowledgeBase) -> Result<Vec<Vec<Prediction>>> {
    let contexts = parse_nif_document(input)?;
    let mut by_text: HashMap<&str, VecDeque<usize>> = HashMap::new();
    for (i, article) in benchmark.iter().enumerate() {
        by_text.entry(article.text.as_str()).or_default().push_back(i);
    }
    let mut assigned: HashSet<usize> = HashSet::new();
    let mut per_article = vec![Vec::new(); benchmark.len()];
    for context in contexts {
        let by_equal_text = by_text
            .get_mut(context.text.as_str())
            .and_then(|queue| {
                while let Some(i) = queue.pop_front() {
                    if !assigned.contains(&i) {
                        return Some(i);
                    }
                }
                None
            });
        let index = by_equal_text
            .or_else(|| {
                benchmark
                    .iter()
                    .enumerate()
                    .filter(|(i, a)| !assigned.contains(i) && !a.id.is_empty() && context.iri.contains(a.id.as_str()))
                    .max_by_key(|(_, a)| a.id.len())
                    .map(|(i, _)| i)
            })
            .ok_or_else(|| {
                let preview: String = context.text.chars().take(60).collect();
                Error::Alignment(format!("NIF context matches no benchmark article: \"{preview}\""))
            })?;
        assigned.insert(index);
        per_article[index] = context
            .phrases
            .iter()
            .map(|phrase| {
                let entity = match preferred_reference(&phrase.references) {
                    Some(reference) => kb.resolve_reference(reference),
                    None => EntityRef::Unknown(None),
                };
                Prediction::new(phrase.span, entity)
            })
            .collect();
    }
    Ok(per_article)
}

#[derive(Deserialize)]
struct AmbiverseDocument {
    #[serde(default)]
    matches: Vec<AmbiverseMatch>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct AmbiverseMatch {
    char_offset: usize,
    text: String,
    #[serde(default)]
    entity: AmbiverseEntity,
}

#[derive(Deserialize, Default)]
struct AmbiverseEntity {
    #[serde(default)]
    id: Option<String>,
}

/// Reads concatenated Ambiverse JSON documents, aligned to articles by order.
pub fn parse_predictions_ambiverse(input: &str, benchmark: &[Article], kb: &KnowledgeBase) -> Result<Vec<Vec<Prediction>>> {
    let mut documents = Vec::new();
    let stream = serde_json::Deserializer::from_str(input).into_iter::<serde_json::Value>();
    for (i, value) in stream.enumerate() {
        let value = value.map_err(|e| Error::Json {
            line: e.line(),
            path: format!("document {i}"),
            message: e.to_string(),
        })?;
        let document: AmbiverseDocument = serde_path_to_error::deserialize(value).map_err(|e| Error::Json {
            line: 0,
            path: format!("document {i}: {}", e.path()),
            message: e.into_inner().to_string(),
        })?;
        documents.push(document);
    }
    if documents.len() != benchmark.len() {
        return Err(Error::Alignment(format!(
            "{} Ambiverse documents for a {}-article benchmark",
            documents.len(),
            benchmark.len()
        )));
    }
    documents
        .into_iter()
        .zip(benchmark)
        .map(|(document, article)| {
            let len = article.char_len();
            document
                .matches
                .into_iter()
                .map(|m| {
                    let span = Span::new(m.char_offset, m.char_offset + m.text.chars().count());
                    if span.is_empty() || span.end > len {
                        return Err(Error::invalid(format!(
                            "article `{}`: Ambiverse match `{}` at charOffset {} is out of range",
                            article.id, m.text, m.char_offset
                        )));
                    }
                    let entity = match m.entity.id.as_deref() {
                        Some(id) if !id.trim().is_empty() => kb.resolve_reference(id),
                        _ => EntityRef::Unknown(None),
                    };
                    Ok(Prediction::new(span, entity))
                })
                .collect()
        })
        .collect()
}

#[derive(Deserialize)]
struct SimplePredictionLine {
    #[serde(default)]
    article_id: Option<String>,
    #[serde(default)]
    predictions: Vec<SimplePrediction>,
}

#[derive(Deserialize)]
struct SimplePrediction {
    start: usize,
    end: usize,
    #[serde(default)]
    entity: Option<String>,
    #[serde(default)]
    candidates: Option<Vec<String>>,
}

/// One line per article, either all keyed by `article_id` or all
/// order-aligned. The only reader that carries candidate sets.
pub fn parse_predictions_simple_jsonl(
    input: &str,
    benchmark_name: &str,
    linker_name: &str,
    benchmark: &[Article],
    kb: &KnowledgeBase,
) -> Result<IngestedPredictions> {
    let mut warnings = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: SimplePredictionLine = from_json_line(line, i + 1)?;
        lines.push((i + 1, parsed));
    }
    let keyed = lines.iter().filter(|(_, l)| l.article_id.is_some()).count();
    if keyed != 0 && keyed != lines.len() {
        return Err(Error::invalid(
            "either every prediction line or none must carry an article_id",
        ));
    }
    let index_by_id: HashMap<&str, usize> = benchmark.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
    if keyed == 0 && lines.len() != benchmark.len() {
        return Err(Error::Alignment(format!(
            "{} prediction lines for a {}-article benchmark",
            lines.len(),
            benchmark.len()
        )));
    }

    let mut per_article: Vec<Option<Vec<Prediction>>> = vec![None; benchmark.len()];
    for (position, (line_no, line)) in lines.into_iter().enumerate() {
        let index = match &line.article_id {
            Some(id) => *index_by_id
                .get(id.as_str())
                .ok_or_else(|| Error::invalid(format!("line {line_no}: unknown article_id `{id}`")))?,
            None => position,
        };
        if per_article[index].is_some() {
            return Err(Error::invalid(format!(
                "line {line_no}: duplicate predictions for article `{}`",
                benchmark[index].id
            )));
        }
        let mut predictions = Vec::with_capacity(line.predictions.len());
        for raw in line.predictions {
            let entity = match raw.entity.as_deref() {
                Some(reference) => kb.resolve_reference(reference),
                None => EntityRef::Unknown(None),
            };
            let candidates = raw.candidates.map(|candidates| {
                candidates
                    .iter()
                    .filter_map(|c| match kb.resolve_reference(c) {
                        EntityRef::Known(id) => Some(id),
                        EntityRef::Unknown(_) => {
                            warnings.push(format!("line {line_no}: dropping unresolvable candidate `{c}`"));
                            None
                        }
                    })
                    .collect::<BTreeSet<_>>()
            });
            predictions.push(Prediction {
                span: Span::new(raw.start, raw.end),
                entity,
                candidates,
            });
        }
        predictions.sort_by_key(|p| p.span);
        validate_predictions(&benchmark[index], &predictions)
            .map_err(|e| Error::invalid(format!("line {line_no}: {e}")))?;
        per_article[index] = Some(predictions);
    }
    let per_article = per_article.into_iter().map(Option::unwrap_or_default).collect();
    Ok(IngestedPredictions {
        experiment: assemble(benchmark_name, linker_name, benchmark, per_article)?,
        warnings,
    })
}
