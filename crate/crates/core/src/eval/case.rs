use serde::{Deserialize, Serialize};

use crate::model::{EntityId, GroundTruthLabel, Prediction, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseOutcome {
    TruePositive,
    FalsePositive,
    FalseNegative,
    /// Exact span, wrong entity. Counts once as FP and once as FN.
    DisambiguationError,
    /// An Unknown entity on either side; counts towards nothing.
    UnevaluatedUnknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnSubcategory {
    Lowercased,
    PartiallyIncluded,
    PartialOverlap,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FpSubcategory {
    Lowercased,
    GroundTruthUnknown,
    WrongSpan,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisambigPrimary {
    Demonym,
    Metonymy,
    PartialName,
    Rare,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSubcategory {
    WrongCandidates,
    MultipleCandidates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DisambigSubcategory {
    pub primary: DisambigPrimary,
    /// Present iff the prediction carried a candidate set.
    pub candidate: Option<CandidateSubcategory>,
}

/// One evaluated unit: a label, a prediction, or a pair of both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationCase {
    pub outcome: CaseOutcome,
    pub label: Option<GroundTruthLabel>,
    pub prediction: Option<Prediction>,
    pub fn_sub: Option<FnSubcategory>,
    pub fp_sub: Option<FpSubcategory>,
    pub disambig_sub: Option<DisambigSubcategory>,
    #[serde(default)]
    pub gt_types: Vec<EntityId>,
    #[serde(default)]
    pub pred_types: Vec<EntityId>,
    /// KB display name of the predicted entity.
    #[serde(default)]
    pub pred_name: Option<String>,
}

impl EvaluationCase {
    pub(crate) fn new(outcome: CaseOutcome, label: Option<&GroundTruthLabel>, prediction: Option<&Prediction>) -> Self {
        debug_assert!(label.is_some() || prediction.is_some());
        EvaluationCase {
            outcome,
            label: label.cloned(),
            prediction: prediction.cloned(),
            fn_sub: None,
            fp_sub: None,
            disambig_sub: None,
            gt_types: Vec::new(),
            pred_types: Vec::new(),
            pred_name: None,
        }
    }

    /// The label span if there is a label, otherwise the prediction span.
    pub fn span(&self) -> Span {
        match (&self.label, &self.prediction) {
            (Some(label), _) => label.span,
            (None, Some(prediction)) => prediction.span,
            (None, None) => unreachable!("case without label and prediction"),
        }
    }

    pub(crate) fn sort_key(&self) -> (Span, bool, Option<Span>) {
        (self.span(), self.label.is_none(), self.prediction.as_ref().map(|p| p.span))
    }
}

/// All cases of one article, as written to the cases file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleCases {
    pub article_id: String,
    pub title: String,
    pub text: String,
    pub cases: Vec<EvaluationCase>,
}
