//! Shared helpers for integration and acceptance tests: fixture paths, a
//! seeded random corpus, and brute-force reference implementations that
//! share no logic with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use linkeval::eval::{ArticleCases, CaseOutcome, EvaluationCase};
use linkeval::kb::{KbData, KbEntity, KnowledgeBase};
use linkeval::model::{Article, EntityId, EntityRef, Experiment, GroundTruthLabel, Prediction, Span};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_workspace() -> PathBuf {
    fixtures().join("workspace")
}

pub fn fixture_kb() -> KnowledgeBase {
    linkeval::kb::load_kb(&fixture_workspace().join("kb")).expect("fixture kb loads")
}

pub fn read(path: impl AsRef<Path>) -> String {
    let path = path.as_ref();
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Copies a directory tree.
pub fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            std::fs::copy(entry.path(), target).unwrap();
        }
    }
}

pub fn q(n: u64) -> EntityId {
    EntityId::new(n)
}

// ---------------------------------------------------------------------------
// Random corpus

const TOKENS: &[&str] = &[
    "Paris", "Berlin", "German", "Jordan", "Michael", "Washington", "Mercury", "apple", "Apple", "river", "New",
    "York", "the", "of", "Bank", "élan", "42", "Öl",
];

pub const LOCATION_TYPE: u64 = 100;
pub const PERSON_TYPE: u64 = 101;
const CITY_TYPE: u64 = 102;
const CAPITAL_TYPE: u64 = 103;
const RANDOM_ENTITIES: u64 = 20;

/// A unit of random test data: a 20-entity KB and articles with predictions.
pub struct RandomWorld {
    pub data: KbData,
    pub kb: KnowledgeBase,
    pub articles: Vec<Article>,
    pub experiment: Experiment,
}

fn phrase(rng: &mut ChaCha8Rng) -> String {
    let words = if rng.gen_bool(0.7) { 1 } else { 2 };
    (0..words)
        .map(|_| *TOKENS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_kb_data(rng: &mut ChaCha8Rng) -> KbData {
    let mut data = KbData {
        whitelist: vec![(q(LOCATION_TYPE), "location".into()), (q(PERSON_TYPE), "person".into())],
        subclass_edges: vec![(q(CITY_TYPE), q(LOCATION_TYPE)), (q(CAPITAL_TYPE), q(CITY_TYPE))],
        ..KbData::default()
    };
    let types = [LOCATION_TYPE, PERSON_TYPE, CITY_TYPE, CAPITAL_TYPE];
    for n in 1..=RANDOM_ENTITIES {
        let mut entity = KbEntity::new(q(n), phrase(rng));
        entity.aliases = (0..rng.gen_range(0..=2)).map(|_| phrase(rng)).collect();
        entity.instance_of = (0..rng.gen_range(0..=2)).map(|_| q(*types.choose(rng).unwrap())).collect();
        entity.sitelink_count = rng.gen_range(0..20);
        data.entities.push(entity);
    }
    data.demonyms = TOKENS.choose_multiple(rng, 3).map(|s| s.to_string()).collect();
    for _ in 0..rng.gen_range(0..10) {
        data.link_frequencies
            .push((phrase(rng), q(rng.gen_range(1..=RANDOM_ENTITIES)), rng.gen_range(1..6)));
    }
    data
}

/// Char spans of each token in `text`, which joins tokens with `sep`s.
fn random_text(rng: &mut ChaCha8Rng) -> (String, Vec<Span>) {
    let mut text = String::new();
    let mut spans = Vec::new();
    let mut pos = 0;
    for i in 0..rng.gen_range(4..12) {
        if i > 0 {
            let sep = if rng.gen_bool(0.2) { ", " } else { " " };
            text.push_str(sep);
            pos += sep.chars().count();
        }
        let token = *TOKENS.choose(rng).unwrap();
        text.push_str(token);
        let len = token.chars().count();
        spans.push(Span::new(pos, pos + len));
        pos += len;
    }
    (text, spans)
}

fn random_span(rng: &mut ChaCha8Rng, tokens: &[Span], char_len: usize) -> Span {
    if rng.gen_bool(0.1) {
        let start = rng.gen_range(0..char_len);
        return Span::new(start, rng.gen_range(start + 1..=char_len));
    }
    let first = rng.gen_range(0..tokens.len());
    let last = (first + rng.gen_range(0..3)).min(tokens.len() - 1);
    Span::new(tokens[first].start, tokens[last].end)
}

fn random_entity(rng: &mut ChaCha8Rng) -> EntityRef {
    if rng.gen_bool(0.2) {
        EntityRef::Unknown(None)
    } else if rng.gen_bool(0.05) {
        EntityRef::Known(q(999))
    } else {
        EntityRef::Known(q(rng.gen_range(1..=RANDOM_ENTITIES)))
    }
}

/// Entities whose name or an alias is exactly `mention`.
fn named(data: &KbData, mention: &str) -> Vec<EntityId> {
    data.entities
        .iter()
        .filter(|e| e.name == mention || e.aliases.iter().any(|a| a == mention))
        .map(|e| e.id)
        .collect()
}

/// Mostly random, but biased towards entities the mention names so that
/// name-based subcategories occur.
fn entity_for(rng: &mut ChaCha8Rng, data: &KbData, mention: &str) -> EntityRef {
    let candidates = named(data, mention);
    if !candidates.is_empty() && rng.gen_bool(0.5) {
        EntityRef::Known(*candidates.choose(rng).unwrap())
    } else {
        random_entity(rng)
    }
}

pub fn random_article(rng: &mut ChaCha8Rng, id: String, data: &KbData, kb: &KnowledgeBase) -> (Article, Vec<Prediction>) {
    let (text, tokens) = random_text(rng);
    let mention = |span: Span| -> String { text.chars().skip(span.start).take(span.end - span.start).collect() };
    let char_len = text.chars().count();
    let mut article = Article::new(id, text.clone());

    let mut label_spans = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=6) {
        label_spans.insert(random_span(rng, &tokens, char_len));
    }
    for span in label_spans {
        let entity = entity_for(rng, data, &mention(span));
        let mut label = GroundTruthLabel::new(span, entity.clone());
        if let EntityRef::Known(id) = entity {
            label.name = Some(kb.name(id).map(str::to_string).unwrap_or_else(|| phrase(rng)));
            label.types = kb.entity_types(id);
        }
        article.labels.push(label);
    }

    let mut predictions: Vec<Prediction> = Vec::new();
    for _ in 0..rng.gen_range(0..=6) {
        let on_label = !article.labels.is_empty() && rng.gen_bool(0.5);
        let (span, entity) = if on_label {
            let label = article.labels.choose(rng).unwrap();
            let entity = if label.entity.is_known() && rng.gen_bool(0.4) {
                label.entity.clone()
            } else {
                entity_for(rng, data, &mention(label.span))
            };
            (label.span, entity)
        } else {
            let span = random_span(rng, &tokens, char_len);
            (span, entity_for(rng, data, &mention(span)))
        };
        if predictions.iter().any(|p| p.span.overlaps(&span)) {
            continue;
        }
        let mut prediction = Prediction::new(span, entity.clone());
        if let EntityRef::Known(id) = entity {
            if rng.gen_bool(0.4) {
                let mut candidates: BTreeSet<EntityId> =
                    (0..rng.gen_range(0..4)).map(|_| q(rng.gen_range(1..=RANDOM_ENTITIES))).collect();
                candidates.insert(id);
                prediction.candidates = Some(candidates);
            }
        }
        predictions.push(prediction);
    }
    predictions.sort_by_key(|p| p.span);
    (article, predictions)
}

pub fn random_world(seed: u64, articles: usize) -> RandomWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = random_kb_data(&mut rng);
    let kb = KnowledgeBase::from_data(data.clone()).expect("random kb");
    let mut experiment = Experiment::new("random", "random-linker");
    let mut all = Vec::with_capacity(articles);
    for i in 0..articles {
        let (article, predictions) = random_article(&mut rng, format!("r{i}"), &data, &kb);
        experiment.predictions.insert(article.id.clone(), predictions);
        all.push(article);
    }
    RandomWorld {
        data,
        kb,
        articles: all,
        experiment,
    }
}

// ---------------------------------------------------------------------------
// Brute-force classification oracle

fn chars_between(text: &str, span: Span) -> String {
    text.chars().skip(span.start).take(span.end - span.start).collect()
}

fn first_letter_lower(s: &str) -> bool {
    match s.chars().find(|c| c.is_alphabetic()) {
        Some(c) => c.is_lowercase(),
        None => false,
    }
}

fn intersects(a: Span, b: Span) -> bool {
    a.start.max(b.start) < a.end.min(b.end)
}

fn inside_strictly(inner: Span, outer: Span) -> bool {
    outer.start <= inner.start && inner.end <= outer.end && inner != outer
}

/// Plain reachability over `subclass` edges starting from the direct types,
/// iterated `hops` times (or to a fixpoint).
pub fn closure(data: &KbData, id: EntityId, hops: Option<usize>) -> BTreeSet<EntityId> {
    let Some(entity) = data.entities.iter().find(|e| e.id == id) else {
        return BTreeSet::new();
    };
    let mut reached: BTreeSet<EntityId> = entity.instance_of.iter().copied().collect();
    let mut round = 0;
    loop {
        if hops.is_some_and(|h| round >= h) {
            break;
        }
        let mut next = reached.clone();
        for (child, parent) in &data.subclass_edges {
            if reached.contains(child) {
                next.insert(*parent);
            }
        }
        if next == reached {
            break;
        }
        reached = next;
        round += 1;
    }
    reached
}

/// Whitelist types of `id` in whitelist order.
pub fn oracle_types(data: &KbData, id: EntityId, hops: Option<usize>) -> Vec<EntityId> {
    let reached = closure(data, id, hops);
    data.whitelist.iter().map(|(t, _)| *t).filter(|t| reached.contains(t)).collect()
}

struct OracleKb<'a> {
    data: &'a KbData,
}

impl OracleKb<'_> {
    fn entity(&self, id: EntityId) -> Option<&KbEntity> {
        self.data.entities.iter().find(|e| e.id == id)
    }

    fn pop(&self, id: EntityId) -> u64 {
        self.entity(id).map(|e| e.sitelink_count).unwrap_or(0)
    }

    fn is_location(&self, id: EntityId) -> bool {
        let location = self.data.whitelist.iter().find(|(_, l)| l == "location").map(|(t, _)| *t);
        match location {
            Some(t) => closure(self.data, id, None).contains(&t),
            None => false,
        }
    }

    fn candidates(&self, mention: &str) -> BTreeSet<EntityId> {
        let mut out = BTreeSet::new();
        for e in &self.data.entities {
            if e.name == mention || e.aliases.iter().any(|a| a == mention) {
                out.insert(e.id);
            }
        }
        for (anchor, id, count) in &self.data.link_frequencies {
            if anchor == mention && *count > 0 {
                out.insert(*id);
            }
        }
        out
    }
}

fn oracle_fn(text: &str, label: &GroundTruthLabel, predictions: &[Prediction]) -> &'static str {
    let mention = chars_between(text, label.span);
    if first_letter_lower(&mention) {
        return "Lowercased";
    }
    let known: Vec<Span> = predictions
        .iter()
        .filter(|p| matches!(p.entity, EntityRef::Known(_)))
        .map(|p| p.span)
        .collect();
    if known.iter().any(|s| inside_strictly(*s, label.span)) {
        return "PartiallyIncluded";
    }
    if known.iter().any(|s| *s != label.span && intersects(*s, label.span)) {
        return "PartialOverlap";
    }
    "Other"
}

fn oracle_fp(text: &str, prediction: &Prediction, labels: &[GroundTruthLabel]) -> &'static str {
    let mention = chars_between(text, prediction.span);
    let touching: Vec<&GroundTruthLabel> = labels.iter().filter(|l| intersects(l.span, prediction.span)).collect();
    if first_letter_lower(&mention) && touching.is_empty() {
        return "Lowercased";
    }
    if !touching.is_empty() && touching.iter().all(|l| matches!(l.entity, EntityRef::Unknown(_))) {
        return "GroundTruthUnknown";
    }
    if touching
        .iter()
        .any(|l| l.entity == prediction.entity && l.span != prediction.span)
    {
        return "WrongSpan";
    }
    "Other"
}

fn oracle_disambig(kb: &OracleKb, text: &str, label: &GroundTruthLabel, prediction: &Prediction) -> String {
    let mention = chars_between(text, label.span);
    let (EntityRef::Known(gt), EntityRef::Known(pred)) = (&label.entity, &prediction.entity) else {
        panic!("oracle_disambig needs known entities");
    };
    let (gt, pred) = (*gt, *pred);
    let gt_name = kb.entity(gt).map(|e| e.name.clone()).or_else(|| label.name.clone());
    let partial = gt_name.is_some_and(|n| !mention.is_empty() && n != mention && n.contains(&mention));
    let cands = kb.candidates(&mention);
    let rare = cands.contains(&gt)
        && cands.contains(&pred)
        && cands.iter().filter(|c| **c != pred).all(|c| kb.pop(*c) < kb.pop(pred));
    let primary = if kb.data.demonyms.contains(&mention) {
        "Demonym"
    } else if kb.is_location(pred)
        && !kb.is_location(gt)
        && kb
            .entity(pred)
            .is_some_and(|e| e.name == mention || e.aliases.contains(&mention))
    {
        "Metonymy"
    } else if partial {
        "PartialName"
    } else if rare {
        "Rare"
    } else {
        "Other"
    };
    let candidate = match &prediction.candidates {
        None => "None".to_string(),
        Some(c) if c.contains(&gt) => "Some(MultipleCandidates)".to_string(),
        Some(_) => "Some(WrongCandidates)".to_string(),
    };
    format!("{primary}/{candidate}")
}

fn key(kind: &str, sub: &str, label: Option<Span>, prediction: Option<Span>) -> String {
    let show = |s: Option<Span>| s.map_or("-".to_string(), |s| format!("{},{}", s.start, s.end));
    format!("{kind}/{sub}@{}|{}", show(label), show(prediction))
}

/// Independent outcome and subcategory assignment for one article, as a
/// sorted list of `outcome/sub@label|prediction` keys.
pub fn oracle_article(data: &KbData, article: &Article, predictions: &[Prediction]) -> Vec<String> {
    let kb = OracleKb { data };
    let text = &article.text;
    let mut out = Vec::new();
    let mut paired = HashSet::new();
    for label in &article.labels {
        let partner = predictions.iter().find(|p| p.span == label.span);
        let pspan = partner.map(|p| p.span);
        match (&label.entity, partner.map(|p| &p.entity)) {
            (EntityRef::Known(g), Some(EntityRef::Known(p))) => {
                paired.insert(label.span);
                if g == p {
                    out.push(key("TruePositive", "", Some(label.span), pspan));
                } else {
                    let sub = oracle_disambig(&kb, text, label, partner.unwrap());
                    out.push(key("DisambiguationError", &sub, Some(label.span), pspan));
                }
            }
            (EntityRef::Known(_), other) => {
                if other.is_some() {
                    paired.insert(label.span);
                }
                out.push(key("FalseNegative", oracle_fn(text, label, predictions), Some(label.span), pspan));
            }
            (EntityRef::Unknown(_), Some(EntityRef::Known(_))) => {
                paired.insert(label.span);
                out.push(key("FalsePositive", "GroundTruthUnknown", Some(label.span), pspan));
            }
            (EntityRef::Unknown(_), other) => {
                if other.is_some() {
                    paired.insert(label.span);
                }
                out.push(key("UnevaluatedUnknown", "", Some(label.span), pspan));
            }
        }
    }
    for prediction in predictions {
        if paired.contains(&prediction.span) {
            continue;
        }
        match prediction.entity {
            EntityRef::Unknown(_) => out.push(key("UnevaluatedUnknown", "", None, Some(prediction.span))),
            EntityRef::Known(_) => out.push(key(
                "FalsePositive",
                oracle_fp(text, prediction, &article.labels),
                None,
                Some(prediction.span),
            )),
        }
    }
    out.sort();
    out
}

/// The engine's cases in the oracle's key format.
pub fn engine_keys(cases: &ArticleCases) -> Vec<String> {
    let mut out: Vec<String> = cases.cases.iter().map(engine_key).collect();
    out.sort();
    out
}

fn engine_key(case: &EvaluationCase) -> String {
    let sub = match case.outcome {
        CaseOutcome::TruePositive | CaseOutcome::UnevaluatedUnknown => String::new(),
        CaseOutcome::FalseNegative => format!("{:?}", case.fn_sub.expect("fn subcategory")),
        CaseOutcome::FalsePositive => format!("{:?}", case.fp_sub.expect("fp subcategory")),
        CaseOutcome::DisambiguationError => {
            let d = case.disambig_sub.expect("disambiguation subcategory");
            format!("{:?}/{:?}", d.primary, d.candidate)
        }
    };
    key(
        &format!("{:?}", case.outcome),
        &sub,
        case.label.as_ref().map(|l| l.span),
        case.prediction.as_ref().map(|p| p.span),
    )
}

// ---------------------------------------------------------------------------
// Random type graphs

/// A KB over nodes Q1..=Qn with random instance-of and subclass edges
/// (cycles and self-loops allowed) and a random whitelist.
pub fn random_type_graph(rng: &mut ChaCha8Rng, max_nodes: u64) -> KbData {
    let n = rng.gen_range(2..=max_nodes);
    let mut data = KbData::default();
    for id in 1..=n {
        let mut entity = KbEntity::new(q(id), format!("n{id}"));
        entity.instance_of = (0..rng.gen_range(0..3)).map(|_| q(rng.gen_range(1..=n))).collect();
        data.entities.push(entity);
    }
    let edges = rng.gen_range(0..=2 * n);
    let mut seen = BTreeMap::new();
    for _ in 0..edges {
        let edge = (q(rng.gen_range(1..=n)), q(rng.gen_range(1..=n)));
        seen.insert(edge, ());
    }
    data.subclass_edges = seen.into_keys().collect();
    let mut ids: Vec<u64> = (1..=n).collect();
    ids.shuffle(rng);
    let k = rng.gen_range(1..=n.min(8)) as usize;
    data.whitelist = ids[..k].iter().map(|&i| (q(i), format!("t{i}"))).collect();
    data
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
