//! Samples two BBOB functions on a Latin hypercube and prints their
//! landscape features side by side.
//!
//!     cargo run --example ela_features

use elacomp::bbob::make_bbob;
use elacomp::ela::extract_all;
use elacomp::problem::BoxBounds;
use elacomp::sampling::{build_design, evaluate_design, SamplePlan};

fn main() -> elacomp::error::Result<()> {
    let dim = 3;
    let design = build_design(&SamplePlan::latin(200 * dim, 7), &BoxBounds::domain(dim));
    let sphere = extract_all(&evaluate_design(&make_bbob(1, dim, 1)?, &design)?, 7);
    let rastrigin = extract_all(&evaluate_design(&make_bbob(15, dim, 1)?, &design)?, 7);

    println!("{:<24} {:>14} {:>14}", "feature", "sphere", "rastrigin");
    let show = |v: Option<f64>| v.map_or("NA".to_string(), |x| format!("{x:.5}"));
    for ((name, a), (_, b)) in sphere.values.iter().zip(&rastrigin.values) {
        println!("{name:<24} {:>14} {:>14}", show(*a), show(*b));
    }
    Ok(())
}
