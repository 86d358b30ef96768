//! Shared data types and the on-disk article and prediction schemas.
//!
//! All offsets are counted in Unicode scalar values (Rust `char`s), never in
//! bytes or UTF-16 units.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{from_json_line, Error, Result};

/// Half-open character range `[start, end)` into an article's text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    /// `other` lies within `self` (equality included).
    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// `other` lies within `self` and is not equal to it.
    pub fn strictly_contains(&self, other: &Span) -> bool {
        self.contains(other) && self != other
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

/// A knowledge-base identifier of the form `Q<digits>`.
///
/// Ordering is numeric, so `Q9 < Q10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(u64);

impl EntityId {
    pub const fn new(number: u64) -> Self {
        EntityId(number)
    }

    pub fn number(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.0)
    }
}

impl FromStr for EntityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .strip_prefix('Q')
            .ok_or_else(|| Error::invalid(format!("entity id `{s}` does not start with `Q`")))?;
        let well_formed = !digits.is_empty()
            && digits.bytes().all(|b| b.is_ascii_digit())
            && (digits == "0" || !digits.starts_with('0'));
        if !well_formed {
            return Err(Error::invalid(format!("malformed entity id `{s}`")));
        }
        digits
            .parse()
            .map(EntityId)
            .map_err(|_| Error::invalid(format!("entity id `{s}` out of range")))
    }
}

impl Serialize for EntityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EntityId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Identity of a linked entity: a known KB id, or an entity outside the KB.
///
/// Serialized as `{"known": "Q64"}` or `{"unknown": "raw" | null}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityRef {
    Known(EntityId),
    Unknown(Option<String>),
}

impl EntityRef {
    pub fn known(&self) -> Option<EntityId> {
        match self {
            EntityRef::Known(id) => Some(*id),
            EntityRef::Unknown(_) => None,
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, EntityRef::Known(_))
    }
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityRef::Known(id) => id.fmt(f),
            EntityRef::Unknown(Some(raw)) => write!(f, "Unknown({raw})"),
            EntityRef::Unknown(None) => f.write_str("Unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthLabel {
    #[serde(flatten)]
    pub span: Span,
    pub entity: EntityRef,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub types: Vec<EntityId>,
}

impl GroundTruthLabel {
    pub fn new(span: Span, entity: EntityRef) -> Self {
        GroundTruthLabel {
            span,
            entity,
            name: None,
            types: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    #[serde(flatten)]
    pub span: Span,
    pub entity: EntityRef,
    #[serde(default)]
    pub candidates: Option<BTreeSet<EntityId>>,
}

impl Prediction {
    pub fn new(span: Span, entity: EntityRef) -> Self {
        Prediction {
            span,
            entity,
            candidates: None,
        }
    }

    pub fn with_candidates(mut self, candidates: impl IntoIterator<Item = EntityId>) -> Self {
        self.candidates = Some(candidates.into_iter().collect());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    #[serde(default)]
    pub title: String,
    pub text: String,
    #[serde(default)]
    pub labels: Vec<GroundTruthLabel>,
}

impl Article {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Article {
            id: id.into(),
            title: String::new(),
            text: text.into(),
            labels: Vec::new(),
        }
    }

    pub fn sort_labels(&mut self) {
        self.labels.sort_by_key(|l| l.span);
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

/// The predictions of one linker over one benchmark, keyed by article id in
/// benchmark order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Experiment {
    pub benchmark_name: String,
    pub linker_name: String,
    pub predictions: IndexMap<String, Vec<Prediction>>,
}

impl Experiment {
    pub fn new(benchmark_name: impl Into<String>, linker_name: impl Into<String>) -> Self {
        Experiment {
            benchmark_name: benchmark_name.into(),
            linker_name: linker_name.into(),
            predictions: IndexMap::new(),
        }
    }

    /// Uses each article's ground-truth labels as predictions.
    pub fn from_labels(benchmark_name: &str, linker_name: &str, articles: &[Article]) -> Self {
        let mut experiment = Experiment::new(benchmark_name, linker_name);
        for article in articles {
            let predictions = article
                .labels
                .iter()
                .map(|l| Prediction::new(l.span, l.entity.clone()))
                .collect();
            experiment.predictions.insert(article.id.clone(), predictions);
        }
        experiment
    }

    pub fn predictions_for(&self, article_id: &str) -> &[Prediction] {
        self.predictions
            .get(article_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// One line of a prediction file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionLine {
    pub article_id: String,
    pub predictions: Vec<Prediction>,
}

/// Byte offsets of every character boundary, for repeated char-offset slicing.
#[derive(Debug, Clone)]
pub struct TextIndex<'a> {
    text: &'a str,
    boundaries: Vec<usize>,
}

impl<'a> TextIndex<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut boundaries: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
        boundaries.push(text.len());
        TextIndex { text, boundaries }
    }

    pub fn char_len(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn slice(&self, span: Span) -> Option<&'a str> {
        if span.start > span.end || span.end > self.char_len() {
            return None;
        }
        Some(&self.text[self.boundaries[span.start]..self.boundaries[span.end]])
    }

    /// Like [`slice`](Self::slice) but returns `""` for out-of-range spans.
    pub fn mention(&self, span: Span) -> &'a str {
        self.slice(span).unwrap_or("")
    }
}

/// Checks every [`Article`] invariant and returns one message per violation.
pub fn validate_article(article: &Article) -> Vec<String> {
    let mut violations = Vec::new();
    let len = article.char_len();
    if article.id.is_empty() {
        violations.push("empty article id".to_string());
    }
    let mut seen = HashSet::new();
    let mut previous: Option<Span> = None;
    for (i, label) in article.labels.iter().enumerate() {
        let span = label.span;
        if span.start >= span.end {
            violations.push(format!("span start ≥ end at label {i}"));
        } else if span.end > len {
            violations.push(format!(
                "span end {} exceeds text length {len} at label {i}",
                span.end
            ));
        }
        if !seen.insert(span) {
            violations.push(format!("duplicate label span {span}"));
        }
        if previous.is_some_and(|p| p > span) {
            violations.push(format!("labels not sorted by (start, end) at label {i}"));
        }
        previous = Some(span);
        if !label.entity.is_known() && !label.types.is_empty() {
            violations.push(format!("types on unknown entity at label {i}"));
        }
    }
    violations
}

/// Checks the span and candidate invariants of one article's predictions.
///
/// Overlapping spans are rejected along with exact duplicates.
pub fn validate_predictions(article: &Article, predictions: &[Prediction]) -> Result<()> {
    let len = article.char_len();
    let mut spans: Vec<Span> = Vec::with_capacity(predictions.len());
    for (i, prediction) in predictions.iter().enumerate() {
        let span = prediction.span;
        if span.start >= span.end || span.end > len {
            return Err(Error::invalid(format!(
                "article `{}`: prediction {i} has invalid span {span} for text of length {len}",
                article.id
            )));
        }
        if let (Some(candidates), EntityRef::Known(id)) = (&prediction.candidates, &prediction.entity) {
            if !candidates.contains(id) {
                return Err(Error::invalid(format!(
                    "article `{}`: predicted entity {id} at {span} is not among its candidates",
                    article.id
                )));
            }
        }
        spans.push(span);
    }
    spans.sort();
    for pair in spans.windows(2) {
        if pair[0].overlaps(&pair[1]) {
            return Err(Error::invalid(format!(
                "article `{}`: overlapping predictions {} and {}",
                article.id, pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

pub fn serialize_article(article: &Article) -> String {
    serde_json::to_string(article).expect("article serialization is infallible")
}

/// Parses one line of the internal article format. `line_no` is 1-based and
/// only used in error messages.
pub fn parse_article(line: &str, line_no: usize) -> Result<Article> {
    from_json_line(line, line_no)
}

pub fn serialize_prediction_line(line: &PredictionLine) -> String {
    serde_json::to_string(line).expect("prediction serialization is infallible")
}

pub fn parse_prediction_line(line: &str, line_no: usize) -> Result<PredictionLine> {
    from_json_line(line, line_no)
}

/// Parses a whole article JSONL document, skipping blank lines.
pub fn parse_articles(input: &str) -> Result<Vec<Article>> {
    input
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| parse_article(line, i + 1))
        .collect()
}

pub fn serialize_articles(articles: &[Article]) -> String {
    let mut out = String::new();
    for article in articles {
        out.push_str(&serialize_article(article));
        out.push('\n');
    }
    out
}

/// Renders an experiment as prediction JSONL, one line per article in order.
pub fn serialize_experiment(experiment: &Experiment) -> String {
    let mut out = String::new();
    for (article_id, predictions) in &experiment.predictions {
        let line = PredictionLine {
            article_id: article_id.clone(),
            predictions: predictions.clone(),
        };
        out.push_str(&serialize_prediction_line(&line));
        out.push('\n');
    }
    out
}

/// Reads a prediction JSONL document back into an experiment and checks it
/// against the benchmark it belongs to.
pub fn parse_experiment(
    input: &str,
    benchmark_name: &str,
    linker_name: &str,
    benchmark: &[Article],
) -> Result<Experiment> {
    let by_id: std::collections::HashMap<&str, &Article> =
        benchmark.iter().map(|a| (a.id.as_str(), a)).collect();
    let mut experiment = Experiment::new(benchmark_name, linker_name);
    for (i, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = parse_prediction_line(line, i + 1)?;
        let article = by_id.get(parsed.article_id.as_str()).ok_or_else(|| {
            Error::invalid(format!(
                "line {}: unknown article id `{}`",
                i + 1,
                parsed.article_id
            ))
        })?;
        validate_predictions(article, &parsed.predictions)
            .map_err(|e| Error::invalid(format!("line {}: {e}", i + 1)))?;
        if experiment
            .predictions
            .insert(parsed.article_id.clone(), parsed.predictions)
            .is_some()
        {
            return Err(Error::invalid(format!(
                "line {}: duplicate article id `{}`",
                i + 1,
                parsed.article_id
            )));
        }
    }
    Ok(experiment)
}
