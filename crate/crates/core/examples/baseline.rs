//! Runs the capitalization baseline on a single sentence.

use std::path::Path;

use linkeval::baseline::{link_article, MentionDetectorConfig};
use linkeval::kb::load_kb;
use linkeval::model::Article;

fn main() -> linkeval::Result<()> {
    let kb = load_kb(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/workspace/kb"))?;
    let text = std::env::args().nth(1).unwrap_or_else(|| "Angela Merkel visited Paris on 7 March.".into());
    let article = Article::new("example", text);
    for p in link_article(&article, &kb, &MentionDetectorConfig::default()) {
        let mention: String = article.text.chars().skip(p.span.start).take(p.span.len()).collect();
        let name = p.entity.known().and_then(|id| kb.name(id)).unwrap_or("?");
        println!("{}  {mention:<20} {} ({name})", p.span, p.entity);
    }
    Ok(())
}
