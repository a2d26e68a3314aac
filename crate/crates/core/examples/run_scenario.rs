//! Loads a scenario file and runs the task it names.
//!
//! cargo run --example run_scenario -- crates/core/scenarios/psi1.json

use std::path::PathBuf;

use epr_bell::cli::{execute, RunOptions};
use epr_bell::report::Format;
use epr_bell::scenario::load_scenario;

fn main() -> epr_bell::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/psi1.json")));
    let scenario = load_scenario(&path)?;
    let Some(task) = scenario.task else {
        eprintln!("{} names no task", path.display());
        std::process::exit(2);
    };
    let report = execute(task, &scenario, &RunOptions::default())?;
    print!("{}", report.render(Format::Human));
    Ok(())
}
