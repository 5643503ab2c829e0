//! Computes features for the BBOB suite and a generated set, then fits the
//! three subspace models and reports their ranks and energy.
//!
//!     cargo run --release --example subspace_projection

use elacomp::bbob::bbob_suite;
use elacomp::ela::extract_all;
use elacomp::problem::{BoxBounds, Problem};
use elacomp::sampling::{build_design, evaluate_design, SamplePlan};
use elacomp::subspace::{clean_columns, run_projection, FeatureMatrix, ProjectionMode};
use elacomp::treegen::{generate_set, GeneratorConfig};

fn features(problems: &[Problem], design: &[Vec<f64>]) -> elacomp::error::Result<FeatureMatrix> {
    let vectors = problems
        .iter()
        .map(|p| evaluate_design(p, design).map(|s| extract_all(&s, 1)))
        .collect::<elacomp::error::Result<Vec<_>>>()?;
    FeatureMatrix::from_vectors(&vectors)
}

fn main() -> elacomp::error::Result<()> {
    let dim = 3;
    let design = build_design(&SamplePlan::latin(100 * dim, 1), &BoxBounds::domain(dim));
    let coco = features(&bbob_suite(dim, 1)?, &design)?;
    let generated: Vec<Problem> = generate_set(1, 40, dim, &GeneratorConfig::default())?
        .into_iter()
        .map(Problem::from)
        .collect();
    let generated = features(&generated, &design)?;

    let (coco, generated, dropped) = clean_columns(&coco, &generated)?;
    println!("{} columns kept, dropped: {dropped:?}", coco.n_cols());
    for mode in ProjectionMode::ALL {
        let set = run_projection(mode, &coco, &generated, 0.95)?;
        let sigma: Vec<String> = set.model.singular_values.iter().map(|s| format!("{s:.3}")).collect();
        println!(
            "{:<16} k={} sigma=[{}] orthonormality error={:.1e}",
            mode.slug(),
            set.model.k,
            sigma.join(", "),
            set.model.orthonormality_error()
        );
    }
    Ok(())
}
