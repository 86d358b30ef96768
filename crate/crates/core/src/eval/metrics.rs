use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::case::{CaseOutcome, EvaluationCase};
use crate::kb::KnowledgeBase;
use crate::model::EntityId;

/// Counts with precision, recall and F1.
///
/// Precision and recall are 1.0 when their denominator is 0; F1 is 0.0 when
/// precision + recall is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBlock {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MetricBlock {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let ratio = |num: u64, den: u64| if den == 0 { 1.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        MetricBlock {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }
}

impl Default for MetricBlock {
    fn default() -> Self {
        MetricBlock::from_counts(0, 0, 0)
    }
}

/// Raw per-type counts, mergeable across articles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl Counts {
    pub fn merge(&mut self, other: &Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    pub fn block(&self) -> MetricBlock {
        MetricBlock::from_counts(self.tp, self.fp, self.fn_)
    }
}

/// Adds one case to per-type counts keyed by whitelist position.
pub(crate) fn count_case_types(case: &EvaluationCase, whitelist: &[(EntityId, String)], counts: &mut [Counts]) {
    let mut bump = |types: &[EntityId], f: fn(&mut Counts)| {
        for t in types {
            if let Some(i) = whitelist.iter().position(|(w, _)| w == t) {
                f(&mut counts[i]);
            }
        }
    };
    match case.outcome {
        CaseOutcome::TruePositive => bump(&case.gt_types, |c| c.tp += 1),
        CaseOutcome::FalseNegative => bump(&case.gt_types, |c| c.fn_ += 1),
        CaseOutcome::FalsePositive => bump(&case.pred_types, |c| c.fp += 1),
        CaseOutcome::DisambiguationError => {
            bump(&case.gt_types, |c| c.fn_ += 1);
            bump(&case.pred_types, |c| c.fp += 1);
        }
        CaseOutcome::UnevaluatedUnknown => {}
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeMetrics {
    pub label: String,
    #[serde(flatten)]
    pub metrics: MetricBlock,
}

/// Precision, recall and F1 for every whitelist type, in whitelist order.
pub fn per_type_metrics(cases: &[EvaluationCase], kb: &KnowledgeBase) -> IndexMap<EntityId, TypeMetrics> {
    let whitelist = kb.whitelist();
    let mut counts = vec![Counts::default(); whitelist.len()];
    for case in cases {
        count_case_types(case, whitelist, &mut counts);
    }
    type_table(whitelist, &counts)
}

pub(crate) fn type_table(whitelist: &[(EntityId, String)], counts: &[Counts]) -> IndexMap<EntityId, TypeMetrics> {
    whitelist
        .iter()
        .zip(counts)
        .map(|((id, label), c)| {
            (
                *id,
                TypeMetrics {
                    label: label.clone(),
                    metrics: c.block(),
                },
            )
        })
        .collect()
}
