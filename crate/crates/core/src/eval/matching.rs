//! Strong matching of predictions against ground-truth labels.

use std::collections::HashMap;

use super::case::{CaseOutcome, EvaluationCase, FpSubcategory};
use crate::model::{EntityRef, GroundTruthLabel, Prediction, Span};

/// True when `span` overlaps at least one label and every overlapping label
/// is Unknown.
pub(crate) fn overlaps_only_unknown(span: Span, labels: &[GroundTruthLabel]) -> bool {
    let mut overlapping = labels.iter().filter(|l| l.span.overlaps(&span)).peekable();
    overlapping.peek().is_some() && overlapping.all(|l| !l.entity.is_known())
}

/// Pairs labels and predictions with identical spans and assigns outcomes.
///
/// Subcategories are left empty except for the ground-truth-unknown false
/// positives, which are decided here. The result is sorted by span.
pub fn match_article(labels: &[GroundTruthLabel], predictions: &[Prediction]) -> Vec<EvaluationCase> {
    let label_by_span: HashMap<Span, usize> = labels.iter().enumerate().map(|(i, l)| (l.span, i)).collect();
    let mut label_matched = vec![false; labels.len()];
    let mut cases = Vec::with_capacity(labels.len() + predictions.len());

    for prediction in predictions {
        if let Some(&i) = label_by_span.get(&prediction.span) {
            if !label_matched[i] {
                label_matched[i] = true;
                let label = &labels[i];
                let (outcome, gt_unknown) = match (&label.entity, &prediction.entity) {
                    (EntityRef::Known(gt), EntityRef::Known(pred)) if gt == pred => (CaseOutcome::TruePositive, false),
                    (EntityRef::Known(_), EntityRef::Known(_)) => (CaseOutcome::DisambiguationError, false),
                    // A NIL prediction detects nothing; the label stays a false negative.
                    (EntityRef::Known(_), EntityRef::Unknown(_)) => (CaseOutcome::FalseNegative, false),
                    (EntityRef::Unknown(_), EntityRef::Known(_)) => (CaseOutcome::FalsePositive, true),
                    (EntityRef::Unknown(_), EntityRef::Unknown(_)) => (CaseOutcome::UnevaluatedUnknown, false),
                };
                let mut case = EvaluationCase::new(outcome, Some(label), Some(prediction));
                if gt_unknown {
                    case.fp_sub = Some(FpSubcategory::GroundTruthUnknown);
                }
                cases.push(case);
                continue;
            }
        }
        let case = if !prediction.entity.is_known() {
            EvaluationCase::new(CaseOutcome::UnevaluatedUnknown, None, Some(prediction))
        } else {
            let mut case = EvaluationCase::new(CaseOutcome::FalsePositive, None, Some(prediction));
            if overlaps_only_unknown(prediction.span, labels) {
                case.fp_sub = Some(FpSubcategory::GroundTruthUnknown);
            }
            case
        };
        cases.push(case);
    }

    for (label, matched) in labels.iter().zip(&label_matched) {
        if *matched {
            continue;
        }
        let outcome = if label.entity.is_known() {
            CaseOutcome::FalseNegative
        } else {
            CaseOutcome::UnevaluatedUnknown
        };
        cases.push(EvaluationCase::new(outcome, Some(label), None));
    }

    cases.sort_by_key(EvaluationCase::sort_key);
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EntityId;

    fn known(n: u64) -> EntityRef {
        EntityRef::Known(EntityId::new(n))
    }

    fn label(start: usize, end: usize, entity: EntityRef) -> GroundTruthLabel {
        GroundTruthLabel::new(Span::new(start, end), entity)
    }

    fn pred(start: usize, end: usize, entity: EntityRef) -> Prediction {
        Prediction::new(Span::new(start, end), entity)
    }

    fn outcomes(cases: &[EvaluationCase]) -> Vec<(CaseOutcome, Option<FpSubcategory>)> {
        cases.iter().map(|c| (c.outcome, c.fp_sub)).collect()
    }

    #[test]
    fn exact_match() {
        let cases = match_article(&[label(0, 6, known(64))], &[pred(0, 6, known(64))]);
        assert_eq!(outcomes(&cases), vec![(CaseOutcome::TruePositive, None)]);
    }

    #[test]
    fn wrong_entity() {
        let cases = match_article(&[label(0, 6, known(64))], &[pred(0, 6, known(5))]);
        assert_eq!(outcomes(&cases), vec![(CaseOutcome::DisambiguationError, None)]);
    }

    #[test]
    fn known_prediction_on_unknown_label() {
        let cases = match_article(&[label(0, 6, EntityRef::Unknown(None))], &[pred(0, 6, known(64))]);
        assert_eq!(
            outcomes(&cases),
            vec![(CaseOutcome::FalsePositive, Some(FpSubcategory::GroundTruthUnknown))]
        );
    }

    #[test]
    fn one_sided_cases() {
        let cases = match_article(&[], &[pred(0, 6, known(64))]);
        assert_eq!(outcomes(&cases), vec![(CaseOutcome::FalsePositive, None)]);
        let cases = match_article(&[label(0, 6, known(64))], &[]);
        assert_eq!(outcomes(&cases), vec![(CaseOutcome::FalseNegative, None)]);
    }

    #[test]
    fn nil_prediction_on_known_label_is_false_negative_only() {
        let cases = match_article(&[label(0, 6, known(64))], &[pred(0, 6, EntityRef::Unknown(None))]);
        assert_eq!(outcomes(&cases), vec![(CaseOutcome::FalseNegative, None)]);
        assert!(cases[0].prediction.is_some());
    }

    #[test]
    fn unknowns_are_unevaluated() {
        let unknown = || EntityRef::Unknown(None);
        let cases = match_article(
            &[label(0, 3, unknown()), label(10, 12, unknown())],
            &[pred(0, 3, unknown()), pred(5, 8, unknown())],
        );
        assert!(cases.iter().all(|c| c.outcome == CaseOutcome::UnevaluatedUnknown));
        assert_eq!(cases.len(), 3);
    }

    #[test]
    fn overlap_with_only_unknown_labels() {
        let cases = match_article(&[label(4, 13, EntityRef::Unknown(None))], &[pred(0, 13, known(1))]);
        assert_eq!(cases.len(), 2);
        assert_eq!(cases[0].outcome, CaseOutcome::FalsePositive);
        assert_eq!(cases[0].fp_sub, Some(FpSubcategory::GroundTruthUnknown));
        assert_eq!(cases[1].outcome, CaseOutcome::UnevaluatedUnknown);
    }

    #[test]
    fn overlap_with_mixed_labels_is_not_ground_truth_unknown() {
        let labels = [label(0, 3, EntityRef::Unknown(None)), label(4, 13, known(2))];
        let cases = match_article(&labels, &[pred(0, 13, known(1))]);
        let fp = cases.iter().find(|c| c.outcome == CaseOutcome::FalsePositive).unwrap();
        assert_eq!(fp.fp_sub, None);
    }
}
