//! Error subcategory classifiers. Each applies its rules in a fixed order and
//! the first matching rule wins, so every error lands in exactly one
//! subcategory of its family.

use super::case::{CandidateSubcategory, DisambigPrimary, DisambigSubcategory, FnSubcategory, FpSubcategory};
use super::matching::overlaps_only_unknown;
use crate::kb::KnowledgeBase;
use crate::model::{EntityId, EntityRef, GroundTruthLabel, Prediction, Span};

/// Label of the whitelist type that metonymy detection keys on.
pub const LOCATION_TYPE_LABEL: &str = "location";

/// Whether the first alphabetic character of `mention` is lowercase.
/// Mentions without letters are never lowercased.
pub fn is_lowercased(mention: &str) -> bool {
    mention
        .chars()
        .find(|c| c.is_alphabetic())
        .is_some_and(char::is_lowercase)
}

/// Classifies a ground-truth label the linker failed to link.
///
/// Only predictions of known entities count as linking a span.
pub fn classify_fn(mention: &str, label_span: Span, predictions: &[Prediction]) -> FnSubcategory {
    if is_lowercased(mention) {
        return FnSubcategory::Lowercased;
    }
    let linked = || predictions.iter().filter(|p| p.entity.is_known()).map(|p| p.span);
    if linked().any(|span| label_span.strictly_contains(&span)) {
        return FnSubcategory::PartiallyIncluded;
    }
    if linked().any(|span| span != label_span && span.overlaps(&label_span)) {
        return FnSubcategory::PartialOverlap;
    }
    FnSubcategory::Other
}

/// Classifies a false positive: a prediction that matches no label, or a
/// known prediction on the exact span of an Unknown label.
pub fn classify_fp(mention: &str, prediction: &Prediction, labels: &[GroundTruthLabel]) -> FpSubcategory {
    let span = prediction.span;
    if is_lowercased(mention) && !labels.iter().any(|l| l.span.overlaps(&span)) {
        return FpSubcategory::Lowercased;
    }
    let on_unknown_label = labels.iter().any(|l| l.span == span && !l.entity.is_known());
    if prediction.entity.is_known() && (on_unknown_label || overlaps_only_unknown(span, labels)) {
        return FpSubcategory::GroundTruthUnknown;
    }
    if prediction.entity.is_known()
        && labels
            .iter()
            .any(|l| l.entity == prediction.entity && l.span != span && l.span.overlaps(&span))
    {
        return FpSubcategory::WrongSpan;
    }
    FpSubcategory::Other
}

/// Classifies an exact-span detection that was linked to the wrong entity.
///
/// `gt_name` is used for the partial-name rule when the ground-truth entity is
/// missing from the KB.
pub fn classify_disambig(
    mention: &str,
    ground_truth: EntityId,
    gt_name: Option<&str>,
    prediction: &Prediction,
    kb: &KnowledgeBase,
) -> DisambigSubcategory {
    let EntityRef::Known(predicted) = prediction.entity else {
        panic!("classify_disambig requires a known prediction");
    };
    let primary = disambig_primary(mention, ground_truth, gt_name, predicted, kb);
    let candidate = prediction.candidates.as_ref().map(|candidates| {
        if candidates.contains(&ground_truth) {
            CandidateSubcategory::MultipleCandidates
        } else {
            CandidateSubcategory::WrongCandidates
        }
    });
    DisambigSubcategory { primary, candidate }
}

fn disambig_primary(
    mention: &str,
    ground_truth: EntityId,
    gt_name: Option<&str>,
    predicted: EntityId,
    kb: &KnowledgeBase,
) -> DisambigPrimary {
    if kb.is_demonym(mention) {
        return DisambigPrimary::Demonym;
    }
    if let Some(location) = kb.type_with_label(LOCATION_TYPE_LABEL) {
        let names_predicted = kb
            .entity(predicted)
            .is_some_and(|e| e.names().any(|n| n == mention));
        if names_predicted && kb.has_type(predicted, location) && !kb.has_type(ground_truth, location) {
            return DisambigPrimary::Metonymy;
        }
    }
    if let Some(name) = kb.name(ground_truth).or(gt_name) {
        if !mention.is_empty() && mention.len() < name.len() && name.contains(mention) {
            return DisambigPrimary::PartialName;
        }
    }
    if predicted_most_popular(mention, ground_truth, predicted, kb) {
        return DisambigPrimary::Rare;
    }
    DisambigPrimary::Other
}

/// Both entities are candidates for `mention`, the prediction is the unique
/// most popular candidate, and the ground truth is strictly less popular.
fn predicted_most_popular(mention: &str, ground_truth: EntityId, predicted: EntityId, kb: &KnowledgeBase) -> bool {
    let candidates = kb.candidates_for_mention(mention);
    if !candidates.contains(&ground_truth) || !candidates.contains(&predicted) {
        return false;
    }
    let top = kb.popularity(predicted);
    let unique_max = candidates
        .iter()
        .all(|&c| c == predicted || kb.popularity(c) < top);
    unique_max && kb.popularity(ground_truth) < top
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{KbData, KbEntity};

    fn q(n: u64) -> EntityId {
        EntityId::new(n)
    }

    fn known(n: u64) -> EntityRef {
        EntityRef::Known(q(n))
    }

    const LOCATION: u64 = 17334923;

    fn kb() -> KnowledgeBase {
        let mut data = KbData::default();
        data.whitelist = vec![(q(LOCATION), "location".into()), (q(215627), "person".into())];
        let entity = |id: u64, name: &str, aliases: &[&str], types: &[u64], sitelinks: u64| KbEntity {
            id: q(id),
            name: name.into(),
            aliases: aliases.iter().map(|s| s.to_string()).collect(),
            instance_of: types.iter().map(|&t| q(t)).collect(),
            sitelink_count: sitelinks,
        };
        data.entities = vec![
            entity(183, "Germany", &["German"], &[LOCATION], 300),
            entity(188, "German", &["German language"], &[], 200),
            entity(64, "Berlin", &[], &[LOCATION], 250),
            entity(159493, "government of Germany", &["Berlin"], &[], 20),
            entity(76, "Barack Obama", &["Obama"], &[215627], 200),
            entity(649593, "Obama", &[], &[], 10),
            entity(90, "Paris", &[], &[LOCATION], 250),
            entity(167646, "Paris Hilton", &["Paris"], &[215627], 3),
            entity(11, "Mercury", &[], &[], 250),
            entity(12, "mercury", &["Mercury"], &[], 100),
            entity(7, "Alpha", &["Tie"], &[], 50),
            entity(8, "Beta", &["Tie"], &[], 50),
            entity(9, "Gamma", &["Tie"], &[], 5),
        ];
        data.demonyms = vec!["German".into()];
        KnowledgeBase::from_data(data).unwrap()
    }

    fn span(s: usize, e: usize) -> Span {
        Span::new(s, e)
    }

    #[test]
    fn fn_lowercased() {
        assert_eq!(classify_fn("government", span(0, 10), &[]), FnSubcategory::Lowercased);
    }

    #[test]
    fn fn_partially_included() {
        let preds = [Prediction::new(span(5, 14), known(19317))];
        assert_eq!(classify_fn("2022 World Cup", span(0, 14), &preds), FnSubcategory::PartiallyIncluded);
    }

    #[test]
    fn fn_partial_overlap() {
        let preds = [Prediction::new(span(0, 13), known(1))];
        assert_eq!(classify_fn("Americans", span(4, 13), &preds), FnSubcategory::PartialOverlap);
    }

    #[test]
    fn fn_other() {
        assert_eq!(classify_fn("Berlin", span(0, 6), &[]), FnSubcategory::Other);
        let nil = [Prediction::new(span(0, 3), EntityRef::Unknown(None))];
        assert_eq!(classify_fn("Berlin", span(0, 6), &nil), FnSubcategory::Other);
    }

    #[test]
    fn lowercase_detection_skips_non_letters() {
        assert!(is_lowercased("\"love"));
        assert!(!is_lowercased("2022 World"));
        assert!(!is_lowercased("42"));
        assert!(is_lowercased("élan"));
    }

    #[test]
    fn fp_lowercased() {
        let p = Prediction::new(span(10, 14), known(316));
        assert_eq!(classify_fp("love", &p, &[]), FpSubcategory::Lowercased);
    }

    #[test]
    fn fp_lowercased_requires_no_overlap() {
        let p = Prediction::new(span(10, 14), known(316));
        let labels = [GroundTruthLabel::new(span(12, 20), known(5))];
        assert_eq!(classify_fp("love", &p, &labels), FpSubcategory::Other);
    }

    #[test]
    fn fp_wrong_span() {
        let p = Prediction::new(span(0, 13), known(7));
        let labels = [GroundTruthLabel::new(span(4, 13), known(7))];
        assert_eq!(classify_fp("The Americans", &p, &labels), FpSubcategory::WrongSpan);
    }

    #[test]
    fn fp_ground_truth_unknown() {
        let p = Prediction::new(span(0, 6), known(64));
        let labels = [GroundTruthLabel::new(span(0, 6), EntityRef::Unknown(None))];
        assert_eq!(classify_fp("Berlin", &p, &labels), FpSubcategory::GroundTruthUnknown);
    }

    #[test]
    fn fp_on_unknown_label_that_overlaps_a_known_one() {
        let p = Prediction::new(span(0, 6), known(64));
        let labels = [
            GroundTruthLabel::new(span(0, 6), EntityRef::Unknown(None)),
            GroundTruthLabel::new(span(3, 9), known(5)),
        ];
        assert_eq!(classify_fp("Berlin", &p, &labels), FpSubcategory::GroundTruthUnknown);
    }

    #[test]
    fn fp_other() {
        let p = Prediction::new(span(0, 6), known(64));
        assert_eq!(classify_fp("Berlin", &p, &[]), FpSubcategory::Other);
    }

    fn primary(mention: &str, gt: u64, pred: u64) -> DisambigPrimary {
        classify_disambig(mention, q(gt), None, &Prediction::new(span(0, 1), known(pred)), &kb()).primary
    }

    #[test]
    fn disambig_demonym() {
        assert_eq!(primary("German", 188, 183), DisambigPrimary::Demonym);
    }

    #[test]
    fn disambig_metonymy() {
        assert_eq!(primary("Berlin", 159493, 64), DisambigPrimary::Metonymy);
    }

    #[test]
    fn disambig_partial_name() {
        assert_eq!(primary("Obama", 76, 649593), DisambigPrimary::PartialName);
    }

    #[test]
    fn disambig_rare() {
        assert_eq!(primary("Mercury", 12, 11), DisambigPrimary::Rare);
        // Metonymy takes precedence over rare for location predictions.
        assert_eq!(primary("Paris", 167646, 90), DisambigPrimary::Metonymy);
    }

    #[test]
    fn disambig_rare_needs_unique_argmax() {
        assert_eq!(primary("Tie", 9, 7), DisambigPrimary::Other);
    }

    #[test]
    fn disambig_other() {
        // Predicted is the less popular candidate.
        assert_eq!(primary("Paris", 90, 167646), DisambigPrimary::Other);
    }

    #[test]
    fn candidate_families() {
        let with = |cands: &[u64]| {
            let p = Prediction::new(span(0, 1), known(5)).with_candidates(cands.iter().map(|&c| q(c)));
            classify_disambig("X", q(64), None, &p, &kb()).candidate
        };
        assert_eq!(with(&[5]), Some(CandidateSubcategory::WrongCandidates));
        assert_eq!(with(&[5, 64]), Some(CandidateSubcategory::MultipleCandidates));
        let p = Prediction::new(span(0, 1), known(5));
        assert_eq!(classify_disambig("X", q(64), None, &p, &kb()).candidate, None);
    }
}
