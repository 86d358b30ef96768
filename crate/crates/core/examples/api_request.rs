//! Answers one API request against the fixture workspace without a server.
//!
//! `cargo run --example api_request -- /api/articles/golden/fixture-linker article=a4`

use std::path::Path;

use linkeval::service::Api;
use linkeval::workspace::Workspace;

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "/api/experiments".into());
    let query = args.next();
    let api = Api::new(Workspace::new(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/workspace")));
    let response = api.handle("GET", &path, query.as_deref());
    println!("{} {}", response.status, response.content_type);
    println!("{}", response.body_str());
}
