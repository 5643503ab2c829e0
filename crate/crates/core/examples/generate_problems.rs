//! Generates a small set of random expression-tree objectives and prints
//! each tree in its JSON form with a few statistics.
//!
//!     cargo run --example generate_problems -- 10 42

use elacomp::treegen::{acceptance_sample, generate_set, population_variance, GeneratorConfig};

fn main() -> elacomp::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map_or(10, |a| a.parse().expect("count"));
    let seed: u64 = args.next().map_or(42, |a| a.parse().expect("seed"));
    let dim = 5;

    let set = generate_set(seed, count, dim, &GeneratorConfig::default())?;
    for p in &set {
        let y: Vec<f64> = acceptance_sample(seed, p.id.index, dim)
            .iter()
            .map(|x| p.tree.evaluate(x))
            .collect();
        println!(
            "{} attempts={} nodes={} var={:.3e}  {}",
            p.id,
            p.attempt_count,
            p.tree.node_count(),
            population_variance(&y),
            serde_json::to_string(&p.tree).unwrap()
        );
    }
    Ok(())
}
