//! Screen the witness networks with the pipeline and print the summary.

use std::path::Path;

use zeroone_crn::pipeline::{run_pipeline, PipelineConfig};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/pipeline/witnesses.json");
    let cfg = PipelineConfig { output_json: None, output_csv: None, ..PipelineConfig::from_path(&path).unwrap() };
    let report = run_pipeline(&cfg).unwrap();
    for r in &report.records {
        print!("{:<28} {}", r.stage.as_str(), r.network);
        if let Some(w) = &r.witness {
            print!("  (κ = {}, {} stable)", w.kappa.join(","), w.stable);
        }
        println!();
    }
    for (stage, n) in &report.summary.by_stage {
        if *n > 0 {
            println!("{}: {n}", stage.as_str());
        }
    }
}
