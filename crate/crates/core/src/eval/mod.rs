//! Evaluation: strong matching, error classification and aggregation.
//!
//! A true positive needs the exact span and the exact entity. Every false
//! negative, false positive and disambiguation error is assigned exactly one
//! subcategory; disambiguation errors additionally get a candidate-set
//! subcategory when the linker reported candidates.

mod case;
mod classify;
mod matching;
mod metrics;

use std::collections::HashSet;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use case::{
    ArticleCases, CandidateSubcategory, CaseOutcome, DisambigPrimary, DisambigSubcategory, EvaluationCase,
    FnSubcategory, FpSubcategory,
};
pub use classify::{classify_disambig, classify_fn, classify_fp, is_lowercased, LOCATION_TYPE_LABEL};
pub use matching::match_article;
pub use metrics::{per_type_metrics, Counts, MetricBlock, TypeMetrics};

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::model::{Article, EntityId, EntityRef, Experiment, Prediction, TextIndex};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerFnCounts {
    pub total: u64,
    pub lowercased: u64,
    pub partially_included: u64,
    pub partial_overlap: u64,
    pub other: u64,
}

impl NerFnCounts {
    fn add(&mut self, sub: FnSubcategory) {
        self.total += 1;
        *match sub {
            FnSubcategory::Lowercased => &mut self.lowercased,
            FnSubcategory::PartiallyIncluded => &mut self.partially_included,
            FnSubcategory::PartialOverlap => &mut self.partial_overlap,
            FnSubcategory::Other => &mut self.other,
        } += 1;
    }

    fn merge(&mut self, o: &Self) {
        self.total += o.total;
        self.lowercased += o.lowercased;
        self.partially_included += o.partially_included;
        self.partial_overlap += o.partial_overlap;
        self.other += o.other;
    }

    pub fn subcategory_sum(&self) -> u64 {
        self.lowercased + self.partially_included + self.partial_overlap + self.other
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerFpCounts {
    pub total: u64,
    pub lowercased: u64,
    pub ground_truth_unknown: u64,
    pub wrong_span: u64,
    pub other: u64,
}

impl NerFpCounts {
    fn add(&mut self, sub: FpSubcategory) {
        self.total += 1;
        *match sub {
            FpSubcategory::Lowercased => &mut self.lowercased,
            FpSubcategory::GroundTruthUnknown => &mut self.ground_truth_unknown,
            FpSubcategory::WrongSpan => &mut self.wrong_span,
            FpSubcategory::Other => &mut self.other,
        } += 1;
    }

    fn merge(&mut self, o: &Self) {
        self.total += o.total;
        self.lowercased += o.lowercased;
        self.ground_truth_unknown += o.ground_truth_unknown;
        self.wrong_span += o.wrong_span;
        self.other += o.other;
    }

    pub fn subcategory_sum(&self) -> u64 {
        self.lowercased + self.ground_truth_unknown + self.wrong_span + self.other
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisambigPrimaryCounts {
    pub demonym: u64,
    pub metonymy: u64,
    pub partial_name: u64,
    pub rare: u64,
    pub other: u64,
}

impl DisambigPrimaryCounts {
    pub fn sum(&self) -> u64 {
        self.demonym + self.metonymy + self.partial_name + self.rare + self.other
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCounts {
    pub wrong_candidates: u64,
    pub multiple_candidates: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisambigCounts {
    pub total: u64,
    pub primary: DisambigPrimaryCounts,
    pub candidate: CandidateCounts,
}

impl DisambigCounts {
    fn add(&mut self, sub: DisambigSubcategory) {
        self.total += 1;
        let p = &mut self.primary;
        *match sub.primary {
            DisambigPrimary::Demonym => &mut p.demonym,
            DisambigPrimary::Metonymy => &mut p.metonymy,
            DisambigPrimary::PartialName => &mut p.partial_name,
            DisambigPrimary::Rare => &mut p.rare,
            DisambigPrimary::Other => &mut p.other,
        } += 1;
        match sub.candidate {
            Some(CandidateSubcategory::WrongCandidates) => self.candidate.wrong_candidates += 1,
            Some(CandidateSubcategory::MultipleCandidates) => self.candidate.multiple_candidates += 1,
            None => {}
        }
    }

    fn merge(&mut self, o: &Self) {
        self.total += o.total;
        self.primary.demonym += o.primary.demonym;
        self.primary.metonymy += o.primary.metonymy;
        self.primary.partial_name += o.primary.partial_name;
        self.primary.rare += o.primary.rare;
        self.primary.other += o.primary.other;
        self.candidate.wrong_candidates += o.candidate.wrong_candidates;
        self.candidate.multiple_candidates += o.candidate.multiple_candidates;
    }
}

/// Aggregated evaluation of one experiment. `cases` is not part of the
/// results file; it is written separately, one article per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub benchmark: String,
    pub linker: String,
    pub overall: MetricBlock,
    /// Known ground-truth labels (the evaluated mentions).
    pub ground_truth_mentions: u64,
    pub unevaluated_unknown: u64,
    pub ner_fn: NerFnCounts,
    pub ner_fp: NerFpCounts,
    pub disambiguation: DisambigCounts,
    pub per_type: IndexMap<EntityId, TypeMetrics>,
    #[serde(skip)]
    pub cases: Vec<ArticleCases>,
}

impl ExperimentResult {
    /// Every error subcategory with its count, in display order.
    pub fn error_subcategories(&self) -> Vec<(&'static str, u64)> {
        let (f, p, d) = (&self.ner_fn, &self.ner_fp, &self.disambiguation);
        vec![
            ("NER FN: lowercased", f.lowercased),
            ("NER FN: partially included", f.partially_included),
            ("NER FN: partial overlap", f.partial_overlap),
            ("NER FN: other", f.other),
            ("NER FP: lowercased", p.lowercased),
            ("NER FP: ground truth unknown", p.ground_truth_unknown),
            ("NER FP: wrong span", p.wrong_span),
            ("NER FP: other", p.other),
            ("disambiguation: demonym", d.primary.demonym),
            ("disambiguation: metonymy", d.primary.metonymy),
            ("disambiguation: partial name", d.primary.partial_name),
            ("disambiguation: rare", d.primary.rare),
            ("disambiguation: other", d.primary.other),
            ("disambiguation: wrong candidates", d.candidate.wrong_candidates),
            ("disambiguation: multiple candidates", d.candidate.multiple_candidates),
        ]
    }

    /// The `n` largest non-zero subcategories; ties keep display order.
    pub fn top_error_subcategories(&self, n: usize) -> Vec<(&'static str, u64)> {
        let mut all: Vec<_> = self.error_subcategories().into_iter().filter(|(_, c)| *c > 0).collect();
        all.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
        all.truncate(n);
        all
    }

    /// Pretty-printed results file content, newline-terminated.
    pub fn to_results_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("results serialize");
        out.push('\n');
        out
    }

    /// Cases file content: one [`ArticleCases`] per line, benchmark order.
    pub fn to_cases_jsonl(&self) -> String {
        let mut out = String::new();
        for article in &self.cases {
            out.push_str(&serde_json::to_string(article).expect("cases serialize"));
            out.push('\n');
        }
        out
    }
}

/// Per-article partial aggregate. Merging is associative and commutative.
#[derive(Debug, Clone, Default)]
struct Tally {
    tp: u64,
    pure_fp: u64,
    pure_fn: u64,
    ground_truth_mentions: u64,
    unevaluated: u64,
    ner_fn: NerFnCounts,
    ner_fp: NerFpCounts,
    disambig: DisambigCounts,
    per_type: Vec<Counts>,
}

impl Tally {
    fn merge(mut self, other: &Tally) -> Tally {
        self.tp += other.tp;
        self.pure_fp += other.pure_fp;
        self.pure_fn += other.pure_fn;
        self.ground_truth_mentions += other.ground_truth_mentions;
        self.unevaluated += other.unevaluated;
        self.ner_fn.merge(&other.ner_fn);
        self.ner_fp.merge(&other.ner_fp);
        self.disambig.merge(&other.disambig);
        if self.per_type.len() < other.per_type.len() {
            self.per_type.resize(other.per_type.len(), Counts::default());
        }
        for (mine, theirs) in self.per_type.iter_mut().zip(&other.per_type) {
            mine.merge(theirs);
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Evaluate articles on the rayon thread pool.
    pub parallel: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { parallel: true }
    }
}

/// Matches and classifies every label and prediction of one article.
pub fn evaluate_article(article: &Article, predictions: &[Prediction], kb: &KnowledgeBase) -> ArticleCases {
    let text = TextIndex::new(&article.text);
    let mut cases = match_article(&article.labels, predictions);
    for case in &mut cases {
        let gt = case.label.as_ref().and_then(|l| l.entity.known());
        let pred = case.prediction.as_ref().and_then(|p| p.entity.known());
        if let Some(gt) = gt {
            case.gt_types = kb.entity_types(gt);
        }
        if let Some(pred) = pred {
            case.pred_types = kb.entity_types(pred);
            case.pred_name = kb.name(pred).map(str::to_string);
        }
        match case.outcome {
            CaseOutcome::FalseNegative => {
                let span = case.label.as_ref().expect("false negative has a label").span;
                case.fn_sub = Some(classify_fn(text.mention(span), span, predictions));
            }
            CaseOutcome::FalsePositive => {
                let prediction = case.prediction.as_ref().expect("false positive has a prediction");
                let sub = classify_fp(text.mention(prediction.span), prediction, &article.labels);
                debug_assert!(case.fp_sub.is_none() || case.fp_sub == Some(sub));
                case.fp_sub = Some(sub);
            }
            CaseOutcome::DisambiguationError => {
                let label = case.label.as_ref().expect("disambiguation error has a label");
                let prediction = case.prediction.as_ref().expect("disambiguation error has a prediction");
                let EntityRef::Known(gt) = label.entity else {
                    unreachable!("disambiguation error on unknown label");
                };
                case.disambig_sub = Some(classify_disambig(
                    text.mention(label.span),
                    gt,
                    label.name.as_deref(),
                    prediction,
                    kb,
                ));
            }
            CaseOutcome::TruePositive | CaseOutcome::UnevaluatedUnknown => {}
        }
    }
    ArticleCases {
        article_id: article.id.clone(),
        title: article.title.clone(),
        text: article.text.clone(),
        cases,
    }
}

fn tally(cases: &ArticleCases, kb: &KnowledgeBase) -> Tally {
    let whitelist = kb.whitelist();
    let mut t = Tally {
        per_type: vec![Counts::default(); whitelist.len()],
        ..Tally::default()
    };
    for case in &cases.cases {
        if case.label.as_ref().is_some_and(|l| l.entity.is_known()) {
            t.ground_truth_mentions += 1;
        }
        match case.outcome {
            CaseOutcome::TruePositive => t.tp += 1,
            CaseOutcome::FalsePositive => {
                t.pure_fp += 1;
                t.ner_fp.add(case.fp_sub.expect("classified"));
            }
            CaseOutcome::FalseNegative => {
                t.pure_fn += 1;
                t.ner_fn.add(case.fn_sub.expect("classified"));
            }
            CaseOutcome::DisambiguationError => t.disambig.add(case.disambig_sub.expect("classified")),
            CaseOutcome::UnevaluatedUnknown => t.unevaluated += 1,
        }
        metrics::count_case_types(case, whitelist, &mut t.per_type);
    }
    t
}

pub fn evaluate_experiment(articles: &[Article], experiment: &Experiment, kb: &KnowledgeBase) -> Result<ExperimentResult> {
    evaluate_experiment_with(articles, experiment, kb, EvalOptions::default())
}

/// Evaluates every benchmark article. Results do not depend on
/// `options.parallel` or on the order of the experiment's entries.
pub fn evaluate_experiment_with(
    articles: &[Article],
    experiment: &Experiment,
    kb: &KnowledgeBase,
    options: EvalOptions,
) -> Result<ExperimentResult> {
    let ids: HashSet<&str> = articles.iter().map(|a| a.id.as_str()).collect();
    if let Some(stray) = experiment.predictions.keys().find(|id| !ids.contains(id.as_str())) {
        return Err(Error::invalid(format!(
            "predictions reference article `{stray}`, which is not in benchmark `{}`",
            experiment.benchmark_name
        )));
    }
    let evaluate = |article: &Article| {
        let cases = evaluate_article(article, experiment.predictions_for(&article.id), kb);
        let t = tally(&cases, kb);
        (cases, t)
    };
    let per_article: Vec<(ArticleCases, Tally)> = if options.parallel {
        articles.par_iter().map(evaluate).collect()
    } else {
        articles.iter().map(evaluate).collect()
    };

    let empty = Tally {
        per_type: vec![Counts::default(); kb.whitelist().len()],
        ..Tally::default()
    };
    let total = per_article.iter().fold(empty, |acc, (_, t)| acc.merge(t));
    let disambig = total.disambig.total;
    Ok(ExperimentResult {
        benchmark: experiment.benchmark_name.clone(),
        linker: experiment.linker_name.clone(),
        overall: MetricBlock::from_counts(total.tp, total.pure_fp + disambig, total.pure_fn + disambig),
        ground_truth_mentions: total.ground_truth_mentions,
        unevaluated_unknown: total.unevaluated,
        ner_fn: total.ner_fn,
        ner_fp: total.ner_fp,
        disambiguation: total.disambig,
        per_type: metrics::type_table(kb.whitelist(), &total.per_type),
        cases: per_article.into_iter().map(|(c, _)| c).collect(),
    })
}
