//! Runs the whole pipeline at desk scale (D=5, 100 generated problems) and
//! prints the separation report of each projection mode.
//!
//!     cargo run --release --example pipeline -- /tmp/desk

use std::path::PathBuf;

use elacomp::analysis::SeparationReport;
use elacomp::pipeline::{cmd_pipeline, PipelineConfig};
use elacomp::subspace::ProjectionMode;

fn main() -> elacomp::error::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "desk-run".into()));
    let config = PipelineConfig {
        output_dir: Some(out.clone()),
        ..PipelineConfig::desk()
    };
    let manifest = cmd_pipeline(&config)?;
    println!("{} files, dropped features: {:?}", manifest.all_files().len(), manifest.dropped_features);
    for mode in ProjectionMode::ALL {
        let r: SeparationReport = elacomp::io::read_json(&out.join(mode.slug()).join("separation.json"))?;
        println!(
            "{:<16} silhouette={:+.3} coco={:+.3} generated={:+.3}",
            mode.slug(),
            r.silhouette,
            r.coco_mean,
            r.generated_mean
        );
    }
    Ok(())
}
