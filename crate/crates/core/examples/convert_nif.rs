//! Converts a NIF benchmark into article JSONL on stdout.

use std::path::Path;

use linkeval::ingest::{ingest_benchmark, BenchmarkFormat};
use linkeval::kb::load_kb;
use linkeval::model::serialize_articles;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let kb = load_kb(&fixtures.join("workspace/kb"))?;
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| fixtures.join("inputs/sample.nif.ttl"));
    let input = std::fs::read_to_string(&path)?;
    let ingested = ingest_benchmark(BenchmarkFormat::Nif, &input, "nif", &kb)?;
    for w in &ingested.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", serialize_articles(&ingested.articles));
    Ok(())
}
