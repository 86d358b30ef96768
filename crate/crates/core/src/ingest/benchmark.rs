//! Benchmark readers: NIF, AIDA-CoNLL IOB and a simple JSONL format.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::Ingested;
use crate::error::{from_json_line, Error, Result};
use crate::kb::KnowledgeBase;
use crate::model::{validate_article, Article, EntityRef, GroundTruthLabel, Span};
use crate::nif::{parse_nif_document, preferred_reference};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkFormat {
    Nif,
    AidaConll,
    SimpleJsonl,
}

impl BenchmarkFormat {
    pub const ALL: [BenchmarkFormat; 3] = [
        BenchmarkFormat::Nif,
        BenchmarkFormat::AidaConll,
        BenchmarkFormat::SimpleJsonl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BenchmarkFormat::Nif => "nif",
            BenchmarkFormat::AidaConll => "aida-conll",
            BenchmarkFormat::SimpleJsonl => "simple-jsonl",
        }
    }
}

impl fmt::Display for BenchmarkFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown benchmark format `{s}` (expected nif, aida-conll or simple-jsonl)")))
    }
}

/// Parses a benchmark in `format` and enriches its labels with names and types.
pub fn ingest_benchmark(
    format: BenchmarkFormat,
    input: &str,
    benchmark_name: &str,
    kb: &KnowledgeBase,
) -> Result<Ingested> {
    let mut ingested = match format {
        BenchmarkFormat::Nif => parse_nif(input, benchmark_name, kb)?,
        BenchmarkFormat::AidaConll => parse_aida_conll(input, benchmark_name, kb)?,
        BenchmarkFormat::SimpleJsonl => parse_simple_jsonl(input, benchmark_name, kb)?,
    };
    let warnings = enrich_labels(&mut ingested.articles, kb);
    ingested.warnings.extend(warnings);
    Ok(ingested)
}

fn synthesized_id(benchmark_name: &str, index: usize) -> String {
    format!("{benchmark_name}-{index}")
}

/// Sorts labels and rejects articles that violate an invariant.
fn finish(mut article: Article) -> Result<Article> {
    article.sort_labels();
    let violations = validate_article(&article);
    if violations.is_empty() {
        Ok(article)
    } else {
        Err(Error::invalid(format!(
            "article `{}`: {}",
            article.id,
            violations.join("; ")
        )))
    }
}

fn check_unique_ids(articles: &[Article]) -> Result<()> {
    let mut seen = HashSet::new();
    for article in articles {
        if !seen.insert(article.id.as_str()) {
            return Err(Error::invalid(format!("duplicate article id `{}`", article.id)));
        }
    }
    Ok(())
}

/// One article per NIF context; ids are synthesized in context order.
pub fn parse_nif(input: &str, benchmark_name: &str, kb: &KnowledgeBase) -> Result<Ingested> {
    let contexts = parse_nif_document(input)?;
    let mut articles = Vec::with_capacity(contexts.len());
    for (index, context) in contexts.into_iter().enumerate() {
        let mut article = Article::new(synthesized_id(benchmark_name, index), context.text);
        for phrase in context.phrases {
            let entity = match preferred_reference(&phrase.references) {
                Some(reference) => kb.resolve_reference(reference),
                None => EntityRef::Unknown(None),
            };
            article.labels.push(GroundTruthLabel::new(phrase.span, entity));
        }
        articles.push(finish(article)?);
    }
    Ok(Ingested::new(articles))
}

/// AIDA-CoNLL IOB: `-DOCSTART- (id)` headers, one token per line, columns
/// `token  B|I  mention  entity  [wikipedia-url  ...]`. Tokens are joined with
/// single spaces to form the article text.
pub fn parse_aida_conll(input: &str, benchmark_name: &str, kb: &KnowledgeBase) -> Result<Ingested> {
    struct Doc {
        article: Article,
        len: usize,
        open: Option<usize>,
    }
    impl Doc {
        fn new(id: String) -> Self {
            Doc {
                article: Article::new(id, String::new()),
                len: 0,
                open: None,
            }
        }
    }

    let mut articles = Vec::new();
    let mut warnings = Vec::new();
    let mut current: Option<Doc> = None;

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if let Some(header) = line.strip_prefix("-DOCSTART-") {
            if let Some(doc) = current.take() {
                articles.push(finish(doc.article)?);
            }
            let header = header.trim();
            let header = header
                .strip_prefix('(')
                .and_then(|h| h.strip_suffix(')'))
                .unwrap_or(header)
                .trim();
            let id = if header.is_empty() {
                synthesized_id(benchmark_name, articles.len())
            } else {
                header.to_string()
            };
            current = Some(Doc::new(id));
            continue;
        }
        if line.trim().is_empty() {
            // Sentence boundary: mentions never continue across it.
            if let Some(doc) = current.as_mut() {
                doc.open = None;
            }
            continue;
        }
        let doc = current.get_or_insert_with(|| Doc::new(synthesized_id(benchmark_name, articles.len())));
        let columns: Vec<&str> = line.split('\t').collect();
        let token = columns[0];
        if token.is_empty() {
            return Err(Error::Conll {
                line: line_no,
                message: "empty token column".into(),
            });
        }
        if doc.len > 0 {
            doc.article.text.push(' ');
            doc.len += 1;
        }
        let start = doc.len;
        doc.article.text.push_str(token);
        doc.len += token.chars().count();
        let end = doc.len;

        let tag = columns.get(1).copied().unwrap_or("").trim();
        match tag {
            "" | "O" => doc.open = None,
            "I" if doc.open.is_some() => {
                let index = doc.open.expect("checked");
                doc.article.labels[index].span.end = end;
            }
            "B" | "I" => {
                if tag == "I" {
                    warnings.push(format!(
                        "AIDA-CoNLL line {line_no}: I-tag without preceding B-tag, treated as B"
                    ));
                }
                if columns.len() < 4 {
                    return Err(Error::Conll {
                        line: line_no,
                        message: format!(
                            "tagged token needs at least 4 columns (token, tag, mention, entity), found {}",
                            columns.len()
                        ),
                    });
                }
                let entity = kb.resolve_reference(conll_reference(&columns));
                doc.open = Some(doc.article.labels.len());
                doc.article
                    .labels
                    .push(GroundTruthLabel::new(Span::new(start, end), entity));
            }
            other => {
                return Err(Error::Conll {
                    line: line_no,
                    message: format!("unknown IOB tag `{other}`"),
                })
            }
        }
    }
    if let Some(doc) = current.take() {
        articles.push(finish(doc.article)?);
    }
    check_unique_ids(&articles)?;
    Ok(Ingested { articles, warnings })
}

/// Wikidata ids anywhere in the entity columns win, then the Wikipedia URL,
/// then the entity name column.
fn conll_reference<'a>(columns: &[&'a str]) -> &'a str {
    let entity_columns = &columns[3..];
    if let Some(wikidata) = entity_columns
        .iter()
        .find(|c| c.trim().parse::<crate::model::EntityId>().is_ok() || c.contains("wikidata.org/"))
    {
        return wikidata;
    }
    if entity_columns[0].trim() == "--NME--" {
        return entity_columns[0];
    }
    match entity_columns.get(1) {
        Some(url) if url.contains("wikipedia.org/") => url,
        _ => entity_columns[0],
    }
}

#[derive(Deserialize)]
struct SimpleArticle {
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    text: String,
    #[serde(default)]
    labels: Vec<SimpleLabel>,
}

#[derive(Deserialize)]
struct SimpleLabel {
    start: usize,
    end: usize,
    #[serde(default)]
    entity: Option<String>,
}

/// `{"text": .., "labels": [{"start", "end", "entity"}], "id"?, "title"?}` per line.
pub fn parse_simple_jsonl(input: &str, benchmark_name: &str, kb: &KnowledgeBase) -> Result<Ingested> {
    let mut articles = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: SimpleArticle = from_json_line(line, i + 1)?;
        let id = parsed
            .id
            .unwrap_or_else(|| synthesized_id(benchmark_name, articles.len()));
        let mut article = Article::new(id, parsed.text);
        article.title = parsed.title.unwrap_or_default();
        let len = article.char_len();
        for (j, label) in parsed.labels.into_iter().enumerate() {
            if label.start >= label.end || label.end > len {
                return Err(Error::invalid(format!(
                    "line {}: label {j} span ({},{}) lies outside the {len}-character text",
                    i + 1,
                    label.start,
                    label.end
                )));
            }
            let entity = match label.entity.as_deref() {
                Some(reference) => kb.resolve_reference(reference),
                None => EntityRef::Unknown(None),
            };
            article
                .labels
                .push(GroundTruthLabel::new(Span::new(label.start, label.end), entity));
        }
        articles.push(finish(article).map_err(|e| Error::invalid(format!("line {}: {e}", i + 1)))?);
    }
    check_unique_ids(&articles)?;
    Ok(Ingested::new(articles))
}

/// Fills in display names and whitelist types of every known label.
/// Returns one warning per known id that is missing from the KB.
pub fn enrich_labels(articles: &mut [Article], kb: &KnowledgeBase) -> Vec<String> {
    let mut warnings = Vec::new();
    for article in articles {
        for label in &mut article.labels {
            let EntityRef::Known(id) = label.entity else {
                continue;
            };
            match kb.name(id) {
                Some(name) => {
                    label.name = Some(name.to_string());
                    label.types = kb.entity_types(id);
                }
                None => {
                    label.name = Some(id.to_string());
                    label.types = Vec::new();
                    warnings.push(format!(
                        "article `{}`: entity {id} at {} is not in the knowledge base",
                        article.id, label.span
                    ));
                }
            }
        }
    }
    warnings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{KbData, KbEntity};
    use crate::model::EntityId;

    fn q(n: u64) -> EntityId {
        EntityId::new(n)
    }

    fn kb() -> KnowledgeBase {
        let mut data = KbData::default();
        data.whitelist = vec![(q(17334923), "location".into()), (q(215627), "person".into())];
        let mut berlin = KbEntity::new(q(64), "Berlin");
        berlin.instance_of = vec![q(17334923)];
        let mut obama = KbEntity::new(q(76), "Barack Obama");
        obama.instance_of = vec![q(215627)];
        data.entities = vec![
            berlin,
            obama,
            KbEntity::new(q(17334923), "location"),
            KbEntity::new(q(215627), "person"),
        ];
        data.wikipedia_titles = vec![("Berlin".into(), q(64)), ("Barack Obama".into(), q(76))];
        KnowledgeBase::from_data(data).unwrap()
    }

    #[test]
    fn format_flags() {
        assert_eq!("aida-conll".parse::<BenchmarkFormat>().unwrap(), BenchmarkFormat::AidaConll);
        assert!("conll".parse::<BenchmarkFormat>().is_err());
    }

    #[test]
    fn conll_offsets_follow_single_space_join() {
        let input = "-DOCSTART- (1 test)\n\
            Obama\tB\tObama\tBarack_Obama\thttp://en.wikipedia.org/wiki/Barack_Obama\n\
            visited\n\
            Berlin\tB\tBerlin\tBerlin\thttp://en.wikipedia.org/wiki/Berlin\n";
        let ingested = parse_aida_conll(input, "t", &kb()).unwrap();
        let article = &ingested.articles[0];
        assert_eq!(article.id, "1 test");
        assert_eq!(article.text, "Obama visited Berlin");
        let spans: Vec<Span> = article.labels.iter().map(|l| l.span).collect();
        assert_eq!(spans, vec![Span::new(0, 5), Span::new(14, 20)]);
        assert_eq!(article.labels[0].entity, EntityRef::Known(q(76)));
        assert_eq!(article.labels[1].entity, EntityRef::Known(q(64)));
    }

    #[test]
    fn conll_only_o_tags() {
        let ingested = parse_aida_conll("-DOCSTART- (2)\nJust\nwords\n.\n", "t", &kb()).unwrap();
        assert_eq!(ingested.articles[0].text, "Just words .");
        assert!(ingested.articles[0].labels.is_empty());
    }

    #[test]
    fn conll_nme_is_unknown() {
        let input = "-DOCSTART- (3)\nSome\nKlaus\tB\tKlaus Meyer\t--NME--\nMeyer\tI\tKlaus Meyer\t--NME--\n";
        let article = &parse_aida_conll(input, "t", &kb()).unwrap().articles[0];
        assert_eq!(article.labels.len(), 1);
        assert_eq!(article.labels[0].span, Span::new(5, 16));
        assert_eq!(article.labels[0].entity, EntityRef::Unknown(Some("--NME--".into())));
    }

    #[test]
    fn conll_dangling_i_is_reported_and_treated_as_b() {
        let input = "-DOCSTART- (4)\nin\nBerlin\tI\tBerlin\tBerlin\n";
        let ingested = parse_aida_conll(input, "t", &kb()).unwrap();
        assert_eq!(ingested.warnings.len(), 1);
        assert_eq!(ingested.articles[0].labels[0].span, Span::new(3, 9));
    }

    #[test]
    fn conll_missing_columns() {
        let err = parse_aida_conll("-DOCSTART- (5)\nBerlin\tB\n", "t", &kb()).unwrap_err();
        assert!(matches!(err, Error::Conll { line: 2, .. }), "{err}");
    }

    #[test]
    fn conll_sentence_break_ends_mention() {
        let input = "-DOCSTART- (6)\nBerlin\tB\tBerlin\tBerlin\n\nBerlin\tI\tBerlin\tBerlin\n";
        let ingested = parse_aida_conll(input, "t", &kb()).unwrap();
        assert_eq!(ingested.articles[0].labels.len(), 2);
        assert_eq!(ingested.warnings.len(), 1);
    }

    #[test]
    fn conll_wikidata_column_wins() {
        let input = "-DOCSTART- (7)\nBerlin\tB\tBerlin\tBarack_Obama\thttp://en.wikipedia.org/wiki/Barack_Obama\t\tQ64\n";
        let article = &parse_aida_conll(input, "t", &kb()).unwrap().articles[0];
        assert_eq!(article.labels[0].entity, EntityRef::Known(q(64)));
    }

    #[test]
    fn simple_jsonl_resolves_titles() {
        let input = r#"{"text":"Hi Berlin","labels":[{"start":3,"end":9,"entity":"Berlin"}]}"#;
        let ingested = parse_simple_jsonl(input, "bench", &kb()).unwrap();
        let article = &ingested.articles[0];
        assert_eq!(article.id, "bench-0");
        assert_eq!(article.labels[0].entity, EntityRef::Known(q(64)));
    }

    #[test]
    fn simple_jsonl_empty_labels_and_unresolvable() {
        let input = "{\"id\":\"x\",\"title\":\"T\",\"text\":\"Hi\",\"labels\":[]}\n\
            {\"text\":\"Some page\",\"labels\":[{\"start\":0,\"end\":4,\"entity\":\"Some_Nonexistent_Page\"}]}";
        let ingested = parse_simple_jsonl(input, "b", &kb()).unwrap();
        assert_eq!(ingested.articles[0].title, "T");
        assert!(ingested.articles[0].labels.is_empty());
        assert_eq!(ingested.articles[1].id, "b-1");
        assert_eq!(
            ingested.articles[1].labels[0].entity,
            EntityRef::Unknown(Some("Some_Nonexistent_Page".into()))
        );
    }

    #[test]
    fn simple_jsonl_span_outside_text() {
        let input = r#"{"text":"Hi","labels":[{"start":1,"end":9,"entity":"Berlin"}]}"#;
        assert!(parse_simple_jsonl(input, "b", &kb()).is_err());
        assert!(parse_simple_jsonl("{not json", "b", &kb()).is_err());
    }

    #[test]
    fn nif_article_with_wikipedia_reference() {
        let doc = r#"@prefix nif: <http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#> .
@prefix itsrdf: <http://www.w3.org/2005/11/its/rdf#> .
<http://ex.org/d#char=0,12> a nif:Context ; nif:isString "Hello Berlin" .
<http://ex.org/d#char=6,12> nif:referenceContext <http://ex.org/d#char=0,12> ;
  nif:beginIndex 6 ; nif:endIndex 12 ; itsrdf:taIdentRef <http://en.wikipedia.org/wiki/Berlin> .
<http://ex.org/e#char=0,3> a nif:Context ; nif:isString "Nil" .
"#;
        let ingested = parse_nif(doc, "n", &kb()).unwrap();
        assert_eq!(ingested.articles.len(), 2);
        let labels = &ingested.articles[0].labels;
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].span, Span::new(6, 12));
        assert_eq!(labels[0].entity, EntityRef::Known(q(64)));
        assert!(ingested.articles[1].labels.is_empty());
    }

    #[test]
    fn enrichment() {
        let mut articles = vec![Article::new("a", "Berlin X Y")];
        articles[0].labels = vec![
            GroundTruthLabel::new(Span::new(0, 6), EntityRef::Known(q(64))),
            GroundTruthLabel::new(Span::new(7, 8), EntityRef::Unknown(None)),
            GroundTruthLabel::new(Span::new(9, 10), EntityRef::Known(q(424242))),
        ];
        let warnings = enrich_labels(&mut articles, &kb());
        let labels = &articles[0].labels;
        assert_eq!(labels[0].name.as_deref(), Some("Berlin"));
        assert_eq!(labels[0].types, vec![q(17334923)]);
        assert_eq!(labels[1].name, None);
        assert_eq!(labels[2].name.as_deref(), Some("Q424242"));
        assert!(labels[2].types.is_empty());
        assert_eq!(warnings.len(), 1);
    }
}
