//! Prior-probability baseline linker.
//!
//! Mentions come from a rule-based capitalization detector. Each mention is
//! linked to the candidate most often used as the target of that exact anchor
//! text, with popularity and then the smaller id breaking ties.

use std::cmp::Reverse;
use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::model::{Article, EntityId, EntityRef, Experiment, Prediction, Span, TextIndex};

/// Linker name under which baseline predictions are stored.
pub const BASELINE_LINKER_NAME: &str = "baseline-rulener";

const DEFAULT_CONFIG: &str = include_str!("baseline.conf");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionDetectorConfig {
    /// Lowercased.
    pub stopwords: HashSet<String>,
    /// Lowercased month and weekday names.
    pub date_words: HashSet<String>,
    pub max_tokens: usize,
}

impl Default for MentionDetectorConfig {
    fn default() -> Self {
        MentionDetectorConfig::parse(DEFAULT_CONFIG).expect("bundled config parses")
    }
}

impl MentionDetectorConfig {
    /// Parses the plain-text config format: `[stopwords]`, `[date_words]`
    /// and `[settings]` sections, one entry per line, `#` comments.
    pub fn parse(input: &str) -> Result<Self> {
        #[derive(Clone, Copy)]
        enum Section {
            None,
            Stopwords,
            DateWords,
            Settings,
        }
        let mut config = MentionDetectorConfig {
            stopwords: HashSet::new(),
            date_words: HashSet::new(),
            max_tokens: 6,
        };
        let mut section = Section::None;
        for (i, raw) in input.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::invalid(format!("baseline config line {}: {msg}", i + 1));
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name.trim() {
                    "stopwords" => Section::Stopwords,
                    "date_words" => Section::DateWords,
                    "settings" => Section::Settings,
                    other => return Err(bad(format!("unknown section `{other}`"))),
                };
                continue;
            }
            match section {
                Section::None => return Err(bad("entry outside of a section".into())),
                Section::Stopwords => {
                    config.stopwords.insert(line.to_lowercase());
                }
                Section::DateWords => {
                    config.date_words.insert(line.to_lowercase());
                }
                Section::Settings => {
                    let (key, value) = line
                        .split_once('=')
                        .ok_or_else(|| bad(format!("expected `key = value`, got `{line}`")))?;
                    match key.trim() {
                        "max_tokens" => {
                            config.max_tokens = value
                                .trim()
                                .parse()
                                .ok()
                                .filter(|&n: &usize| n > 0)
                                .ok_or_else(|| bad(format!("max_tokens must be a positive integer, got `{}`", value.trim())))?;
                        }
                        other => return Err(bad(format!("unknown setting `{other}`"))),
                    }
                }
            }
        }
        Ok(config)
    }

    fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(&word.to_lowercase())
    }

    fn is_date_word(&self, word: &str) -> bool {
        self.date_words.contains(&word.to_lowercase())
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    span: Span,
    text: &'a str,
}

impl Token<'_> {
    fn is_numeric(&self) -> bool {
        self.text.chars().all(|c| c.is_ascii_digit())
    }

    fn is_capitalized(&self) -> bool {
        self.text.chars().next().is_some_and(char::is_uppercase)
    }
}

/// Alphanumeric runs with char offsets.
fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut char_pos = 0;
    for (byte, c) in text.char_indices() {
        if c.is_alphanumeric() {
            start.get_or_insert((char_pos, byte));
        } else if let Some((cs, bs)) = start.take() {
            tokens.push(Token {
                span: Span::new(cs, char_pos),
                text: &text[bs..byte],
            });
        }
        char_pos += 1;
    }
    if let Some((cs, bs)) = start {
        tokens.push(Token {
            span: Span::new(cs, char_pos),
            text: &text[bs..],
        });
    }
    tokens
}

/// Tokens stay in one run when separated by spaces or a single hyphen or
/// apostrophe.
fn joins(gap: &str) -> bool {
    !gap.is_empty() && (gap.chars().all(|c| c == ' ' || c == '\t') || matches!(gap, "-" | "'" | "\u{2019}"))
}

/// Capitalized mention spans, sorted and non-overlapping.
pub fn detect_mentions(text: &str, config: &MentionDetectorConfig) -> Vec<Span> {
    let index = TextIndex::new(text);
    let tokens = tokenize(text);
    let mut runs: Vec<Vec<Token>> = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for token in tokens {
        let continues = current
            .last()
            .is_some_and(|prev| joins(index.mention(Span::new(prev.span.end, token.span.start))));
        let eligible = token.is_capitalized() || (token.is_numeric() && continues);
        if eligible && (continues || current.is_empty()) {
            current.push(token);
        } else {
            runs.push(std::mem::take(&mut current));
            if token.is_capitalized() {
                current.push(token);
            }
        }
    }
    runs.push(current);

    let mut spans = Vec::new();
    for run in runs {
        for chunk in run.chunks(config.max_tokens) {
            if let Some(span) = trim_run(chunk, config) {
                spans.push(span);
            }
        }
    }
    spans
}

fn trim_run(run: &[Token], config: &MentionDetectorConfig) -> Option<Span> {
    let mut run = run;
    while let Some((first, rest)) = run.split_first() {
        if config.is_stopword(first.text) || first.is_numeric() {
            run = rest;
        } else {
            break;
        }
    }
    while let Some((last, rest)) = run.split_last() {
        if config.is_stopword(last.text) {
            run = rest;
        } else {
            break;
        }
    }
    let (first, last) = (run.first()?, run.last()?);
    if run.iter().all(|t| t.is_numeric() || config.is_date_word(t.text)) {
        return None;
    }
    Some(Span::new(first.span.start, last.span.end))
}

/// The candidate most frequently linked from `mention`. Ties go to the more
/// popular entity, then to the smaller id.
pub fn link_mention(mention: &str, kb: &KnowledgeBase) -> Option<EntityId> {
    kb.candidates_for_mention(mention)
        .into_iter()
        .max_by_key(|&id| (kb.link_count(mention, id), kb.popularity(id), Reverse(id)))
}

/// Predictions for one article; each carries the candidate set it was
/// chosen from.
pub fn link_article(article: &Article, kb: &KnowledgeBase, config: &MentionDetectorConfig) -> Vec<Prediction> {
    let index = TextIndex::new(&article.text);
    detect_mentions(&article.text, config)
        .into_iter()
        .filter_map(|span| {
            let mention = index.mention(span);
            let entity = link_mention(mention, kb)?;
            Some(Prediction::new(span, EntityRef::Known(entity)).with_candidates(kb.candidates_for_mention(mention)))
        })
        .collect()
}

/// Runs the baseline over a benchmark. Every article gets an entry, in
/// benchmark order.
pub fn run_baseline(
    benchmark_name: &str,
    articles: &[Article],
    kb: &KnowledgeBase,
    config: &MentionDetectorConfig,
) -> Experiment {
    let linked: Vec<Vec<Prediction>> = articles.par_iter().map(|a| link_article(a, kb, config)).collect();
    let mut experiment = Experiment::new(benchmark_name, BASELINE_LINKER_NAME);
    for (article, predictions) in articles.iter().zip(linked) {
        experiment.predictions.insert(article.id.clone(), predictions);
    }
    experiment
}
