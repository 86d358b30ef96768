//! Evaluates the fixture linker on the golden benchmark and prints the
//! overall scores, error categories and per-type F1.

use std::path::Path;

use linkeval::eval::EvalOptions;
use linkeval::workspace::Workspace;

fn main() -> linkeval::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/workspace");
    let ws = Workspace::open(root)?;
    let kb = ws.load_kb()?;
    let articles = ws.load_benchmark("golden")?;
    let experiment = ws.load_experiment("golden", "fixture-linker", &articles)?;
    let result = linkeval::eval::evaluate_experiment_with(&articles, &experiment, &kb, EvalOptions::default())?;

    let o = &result.overall;
    println!("P {:.3}  R {:.3}  F1 {:.3}", o.precision, o.recall, o.f1);
    for (name, count) in result.error_subcategories() {
        println!("{name:<45} {count}");
    }
    for t in result.per_type.values() {
        println!("{:<12} F1 {:.3}", t.label, t.metrics.f1);
    }
    Ok(())
}
