//! Resolves references and lists candidates and types from the fixture KB.

use std::path::Path;

use linkeval::kb::load_kb;

fn main() -> linkeval::Result<()> {
    let kb = load_kb(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/workspace/kb"))?;
    let mention = std::env::args().nth(1).unwrap_or_else(|| "Paris".into());
    for id in kb.candidates_for_mention(&mention) {
        let types: Vec<String> = kb.entity_types(id).iter().map(|t| t.to_string()).collect();
        println!(
            "{id}  {:<25} popularity {:>4}  links {:>3}  types [{}]",
            kb.name(id).unwrap_or(""),
            kb.popularity(id),
            kb.link_count(&mention, id),
            types.join(", ")
        );
    }
    Ok(())
}
