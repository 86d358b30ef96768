//! Extraction of contexts and annotated phrases from a NIF Turtle document.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Span;
use crate::turtle::{parse_turtle, Term, RDF_TYPE};

pub const NIF: &str = "http://persistence.uni-leipzig.org/nlp2rdf/ontologies/nif-core#";
pub const ITSRDF: &str = "http://www.w3.org/2005/11/its/rdf#";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NifPhrase {
    pub iri: String,
    pub span: Span,
    /// Every `itsrdf:taIdentRef` value, in document order.
    pub references: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NifContext {
    pub iri: String,
    pub text: String,
    /// Sorted by span.
    pub phrases: Vec<NifPhrase>,
}

#[derive(Default)]
struct Resource {
    line: usize,
    is_context: bool,
    text: Option<String>,
    begin: Option<String>,
    end: Option<String>,
    reference_context: Option<String>,
    references: Vec<String>,
}

/// Parses a NIF document into its contexts in order of first appearance.
pub fn parse_nif_document(input: &str) -> Result<Vec<NifContext>> {
    let triples = parse_turtle(input)?;
    let mut order: Vec<String> = Vec::new();
    let mut resources: HashMap<String, Resource> = HashMap::new();
    for triple in triples {
        let resource = resources.entry(triple.subject.clone()).or_insert_with(|| {
            order.push(triple.subject.clone());
            Resource {
                line: triple.line,
                ..Resource::default()
            }
        });
        let Some(local) = triple.predicate.strip_prefix(NIF) else {
            if triple.predicate == RDF_TYPE {
                if triple.object.as_iri() == Some(&format!("{NIF}Context")) {
                    resource.is_context = true;
                }
            } else if triple.predicate == format!("{ITSRDF}taIdentRef") {
                resource.references.push(triple.object.lexical().to_string());
            }
            continue;
        };
        let value = match &triple.object {
            Term::Literal { value, .. } => value.clone(),
            Term::Iri(iri) => iri.clone(),
        };
        match local {
            "isString" => {
                resource.is_context = true;
                resource.text = Some(value);
            }
            "beginIndex" => resource.begin = Some(value),
            "endIndex" => resource.end = Some(value),
            "referenceContext" => resource.reference_context = Some(value),
            _ => {}
        }
    }

    let mut contexts: Vec<NifContext> = Vec::new();
    let mut context_index: HashMap<&str, usize> = HashMap::new();
    for iri in &order {
        let resource = &resources[iri];
        if !resource.is_context {
            continue;
        }
        let text = resource.text.clone().ok_or_else(|| {
            Error::Nif(format!("context <{iri}> (line {}) has no nif:isString", resource.line))
        })?;
        context_index.insert(iri, contexts.len());
        contexts.push(NifContext {
            iri: iri.clone(),
            text,
            phrases: Vec::new(),
        });
    }
    let lengths: Vec<usize> = contexts.iter().map(|c| c.text.chars().count()).collect();

    for iri in &order {
        let resource = &resources[iri];
        let Some(context_iri) = &resource.reference_context else {
            continue;
        };
        if resource.is_context {
            continue;
        }
        let &index = context_index.get(context_iri.as_str()).ok_or_else(|| {
            Error::Nif(format!(
                "phrase <{iri}> (line {}) references missing context <{context_iri}>",
                resource.line
            ))
        })?;
        let offset = |value: &Option<String>, name: &str| -> Result<usize> {
            let value = value.as_deref().ok_or_else(|| {
                Error::Nif(format!("phrase <{iri}> (line {}) has no nif:{name}", resource.line))
            })?;
            value.trim().parse().map_err(|_| {
                Error::Nif(format!("phrase <{iri}>: nif:{name} `{value}` is not a non-negative integer"))
            })
        };
        let span = Span::new(offset(&resource.begin, "beginIndex")?, offset(&resource.end, "endIndex")?);
        if span.start >= span.end || span.end > lengths[index] {
            return Err(Error::Nif(format!(
                "phrase <{iri}> has offsets {span} outside its {}-character context",
                lengths[index]
            )));
        }
        contexts[index].phrases.push(NifPhrase {
            iri: iri.clone(),
            span,
            references: resource.references.clone(),
        });
    }
    for context in &mut contexts {
        context.phrases.sort_by(|a, b| a.span.cmp(&b.span).then_with(|| a.iri.cmp(&b.iri)));
    }
    Ok(contexts)
}

/// Picks the reference to resolve: a Wikidata reference wins over others.
pub fn preferred_reference(references: &[String]) -> Option<&str> {
    references
        .iter()
        .find(|r| r.contains("wikidata.org/"))
        .or_else(|| references.first())
        .map(String::as_str)
}
