//! Readers that turn benchmark and linker output files into internal articles
//! and experiments.

pub mod benchmark;
pub mod predictions;

use crate::model::Article;

pub use benchmark::{
    enrich_labels, ingest_benchmark, parse_aida_conll, parse_nif, parse_simple_jsonl, BenchmarkFormat,
};
pub use predictions::{
    ingest_predictions, parse_predictions_ambiverse, parse_predictions_nif, parse_predictions_simple_jsonl,
    IngestedPredictions, PredictionFormat,
};

/// Parsed benchmark articles plus non-fatal findings.
#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub articles: Vec<Article>,
    pub warnings: Vec<String>,
}

impl Ingested {
    pub fn new(articles: Vec<Article>) -> Self {
        Ingested {
            articles,
            warnings: Vec::new(),
        }
    }

    pub fn label_count(&self) -> usize {
        self.articles.iter().map(|a| a.labels.len()).sum()
    }
}
