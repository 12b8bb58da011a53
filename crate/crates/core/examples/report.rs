//! Full report into `out/` (or the first argument): traces, sweep, comparison
//! against the measured table and SVG plots.

use std::path::PathBuf;

use fingerpad::harness::report::{emit_report, run_pipeline, summary_text};
use fingerpad::harness::Config;
use fingerpad::model::load_paper_dataset;

fn main() -> fingerpad::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("out"), PathBuf::from);
    let ds = load_paper_dataset()?;
    let inputs = run_pipeline(&Config::default(), &ds, None)?;
    let files = emit_report(&out, &inputs, &ds)?;
    print!("{}", summary_text(&inputs, &ds));
    println!("{} files in {}", files.len(), out.display());
    Ok(())
}
