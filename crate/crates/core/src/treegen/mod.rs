//! Random objective functions as seeded expression trees.
//!
//! Each problem index owns an independent ChaCha8 stream derived from
//! `(master_seed, index)`, so a generated set does not depend on generation
//! order or thread count. Candidate trees are rejected until one produces
//! finite, bounded, non-constant values on a fixed acceptance sample.

mod expr;
mod serial;

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use expr::{BinaryOp, ExprNode, ReduceOp, TreeDefect, UnaryOp, BINARY_OPS, UNARY_OPS};
pub use serial::{from_value, to_value};

use crate::error::{Error, Result};
use crate::problem::{ProblemId, DOMAIN};
use crate::rng::{self, tag};

/// Points per dimension in the acceptance sample.
pub const ACCEPTANCE_MULTIPLIER: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RejectionConfig {
    pub value_cap: f64,
    pub min_variance: f64,
    pub max_attempts: u32,
}

impl Default for RejectionConfig {
    fn default() -> Self {
        RejectionConfig {
            value_cap: 1e12,
            min_variance: 1e-12,
            max_attempts: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub max_depth: usize,
    pub constant_range: (f64, f64),
    pub terminal_base_prob: f64,
    pub variable_vs_constant_prob: f64,
    pub rejection: RejectionConfig,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_depth: 8,
            constant_range: (-10.0, 10.0),
            terminal_base_prob: 0.15,
            variable_vs_constant_prob: 0.5,
            rejection: RejectionConfig::default(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.max_depth < 2 {
            return bad(format!("max_depth must be >= 2, got {}", self.max_depth));
        }
        let (lo, hi) = self.constant_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return bad(format!("constant_range [{lo}, {hi}] is not a finite interval"));
        }
        for (name, p) in [
            ("terminal_base_prob", self.terminal_base_prob),
            ("variable_vs_constant_prob", self.variable_vs_constant_prob),
        ] {
            if !(p > 0.0 && p < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {p}"));
            }
        }
        let r = &self.rejection;
        if r.max_attempts < 1 {
            return bad("max_attempts must be >= 1".into());
        }
        if !(r.value_cap > 0.0) || !(r.min_variance > 0.0) {
            return bad("value_cap and min_variance must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedProblem {
    pub id: ProblemId,
    pub tree: ExprNode,
    pub dimension: usize,
    pub master_seed: u64,
    pub attempt_count: u32,
}

/// One entry of a problem-set file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub index: u64,
    pub seed: u64,
    pub tree: ExprNode,
    pub dimension: usize,
    pub attempt_count: u32,
}

impl From<&GeneratedProblem> for ProblemRecord {
    fn from(p: &GeneratedProblem) -> Self {
        ProblemRecord {
            index: p.id.index,
            seed: p.master_seed,
            tree: p.tree.clone(),
            dimension: p.dimension,
            attempt_count: p.attempt_count,
        }
    }
}

impl From<ProblemRecord> for GeneratedProblem {
    fn from(r: ProblemRecord) -> Self {
        GeneratedProblem {
            id: ProblemId::generated(r.index),
            tree: r.tree,
            dimension: r.dimension,
            master_seed: r.seed,
            attempt_count: r.attempt_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rejection {
    NoVariable,
    NonFinite { row: usize },
    ExceedsCap { row: usize, value: f64 },
    LowVariance { variance: f64 },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NoVariable => f.write_str("constant function (no variable leaf)"),
            Rejection::NonFinite { row } => write!(f, "non-finite value at sample row {row}"),
            Rejection::ExceedsCap { row, value } => {
                write!(f, "|y| = {value:e} exceeds the cap at sample row {row}")
            }
            Rejection::LowVariance { variance } => write!(f, "variance {variance:e} below minimum"),
        }
    }
}

/// The `200·D` uniform points on which candidates for `index` are screened.
pub fn acceptance_sample(master_seed: u64, index: u64, dimension: usize) -> Vec<Vec<f64>> {
    let mut rng = rng::stream(&[tag::ACCEPTANCE, master_seed, index, dimension as u64]);
    (0..ACCEPTANCE_MULTIPLIER * dimension)
        .map(|_| {
            (0..dimension)
                .map(|_| rng.random_range(DOMAIN.0..DOMAIN.1))
                .collect()
        })
        .collect()
}

pub fn population_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Screens a tree against the rejection rules on `sample`.
pub fn screen(tree: &ExprNode, sample: &[Vec<f64>], rules: &RejectionConfig) -> std::result::Result<(), Rejection> {
    if !tree.has_variable() {
        return Err(Rejection::NoVariable);
    }
    let mut values = Vec::with_capacity(sample.len());
    for (row, x) in sample.iter().enumerate() {
        let y = tree.evaluate(x);
        if !y.is_finite() {
            return Err(Rejection::NonFinite { row });
        }
        if y.abs() > rules.value_cap {
            return Err(Rejection::ExceedsCap { row, value: y });
        }
        values.push(y);
    }
    let variance = population_variance(&values);
    if !(variance >= rules.min_variance) {
        return Err(Rejection::LowVariance { variance });
    }
    Ok(())
}

/// Grows a random subtree whose root sits at `depth`.
///
/// A terminal is produced with probability `min(1, terminal_base_prob · 2^depth)`
/// and always at `depth >= max_depth - 1`.
pub fn generate_tree<R: Rng>(rng: &mut R, config: &GeneratorConfig, depth: usize) -> ExprNode {
    let forced = depth + 1 >= config.max_depth;
    let p_terminal = (config.terminal_base_prob * 2f64.powi(depth.min(62) as i32)).min(1.0);
    if forced || rng.random_bool(p_terminal) {
        if rng.random_bool(config.variable_vs_constant_prob) {
            return ExprNode::Variable;
        }
        let (lo, hi) = config.constant_range;
        return ExprNode::Constant(rng.random_range(lo..hi));
    }
    let pick = rng.random_range(0..UNARY_OPS.len() + BINARY_OPS.len());
    if pick < UNARY_OPS.len() {
        ExprNode::unary(UNARY_OPS[pick], generate_tree(rng, config, depth + 1))
    } else {
        let op = BINARY_OPS[pick - UNARY_OPS.len()];
        let left = generate_tree(rng, config, depth + 1);
        let right = generate_tree(rng, config, depth + 1);
        ExprNode::binary(op, left, right)
    }
}

pub fn generate_problem(
    master_seed: u64,
    index: u64,
    dimension: usize,
    config: &GeneratorConfig,
) -> Result<GeneratedProblem> {
    config.validate()?;
    if dimension < 1 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let sample = acceptance_sample(master_seed, index, dimension);
    let mut rng = rng::stream(&[tag::TREE, master_seed, index]);
    let mut last = None;
    for attempt in 1..=config.rejection.max_attempts {
        // the wrapping reduce adds one edge, so a forced leaf at max_depth - 1 stays within max_depth
        let tree = ExprNode::mean(generate_tree(&mut rng, config, 0));
        match screen(&tree, &sample, &config.rejection) {
            Ok(()) => {
                return Ok(GeneratedProblem {
                    id: ProblemId::generated(index),
                    tree,
                    dimension,
                    master_seed,
                    attempt_count: attempt,
                })
            }
            Err(reason) => last = Some(reason),
        }
    }
    Err(Error::GenerationExhausted {
        index,
        attempts: config.rejection.max_attempts,
        reason: last.map(|r| r.to_string()).unwrap_or_default(),
    })
}

/// Generates indices `0..count` in parallel.
pub fn generate_set(
    master_seed: u64,
    count: usize,
    dimension: usize,
    config: &GeneratorConfig,
) -> Result<Vec<GeneratedProblem>> {
    if count < 1 {
        return Err(Error::InvalidInput("count must be >= 1".into()));
    }
    (0..count as u64)
        .into_par_iter()
        .map(|i| generate_problem(master_seed, i, dimension, config))
        .collect()
}

pub fn generate_set_sequential(
    master_seed: u64,
    count: usize,
    dimension: usize,
    config: &GeneratorConfig,
) -> Result<Vec<GeneratedProblem>> {
    if count < 1 {
        return Err(Error::InvalidInput("count must be >= 1".into()));
    }
    (0..count as u64)
        .map(|i| generate_problem(master_seed, i, dimension, config))
        .collect()
}

pub fn to_records(set: &[GeneratedProblem]) -> Vec<ProblemRecord> {
    set.iter().map(ProblemRecord::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_terminal_at_last_level() {
        let cfg = GeneratorConfig::default();
        for seed in 0..50 {
            let mut rng = rng::stream(&[seed]);
            let t = generate_tree(&mut rng, &cfg, cfg.max_depth - 1);
            assert!(matches!(t, ExprNode::Variable | ExprNode::Constant(_)));
        }
    }

    #[test]
    fn tree_is_deterministic_per_seed() {
        let cfg = GeneratorConfig::default();
        let a = generate_tree(&mut rng::stream(&[9]), &cfg, 1);
        let b = generate_tree(&mut rng::stream(&[9]), &cfg, 1);
        assert_eq!(a, b);
    }

    #[test]
    fn constant_tree_is_rejected() {
        let sample = acceptance_sample(1, 0, 3);
        let t = ExprNode::mean(ExprNode::constant(2.0));
        assert_eq!(
            screen(&t, &sample, &RejectionConfig::default()),
            Err(Rejection::NoVariable)
        );
        // variable present but cancelled out
        let t = ExprNode::mean(ExprNode::binary(BinaryOp::Subtract, ExprNode::Variable, ExprNode::Variable));
        assert!(matches!(
            screen(&t, &sample, &RejectionConfig::default()),
            Err(Rejection::LowVariance { .. })
        ));
    }

    #[test]
    fn cap_rejection() {
        let sample = acceptance_sample(1, 0, 2);
        let t = ExprNode::mean(ExprNode::binary(
            BinaryOp::Multiply,
            ExprNode::Variable,
            ExprNode::constant(1e13),
        ));
        assert!(matches!(
            screen(&t, &sample, &RejectionConfig::default()),
            Err(Rejection::ExceedsCap { .. })
        ));
    }

    #[test]
    fn exhaustion_reports_index() {
        let mut cfg = GeneratorConfig::default();
        cfg.rejection.min_variance = 1e300;
        cfg.rejection.max_attempts = 3;
        match generate_problem(5, 17, 2, &cfg) {
            Err(Error::GenerationExhausted { index: 17, attempts: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = GeneratorConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.max_depth = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = GeneratorConfig::default();
        cfg.terminal_base_prob = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn problem_is_deterministic() {
        let cfg = GeneratorConfig::default();
        let a = generate_problem(42, 0, 10, &cfg).unwrap();
        let b = generate_problem(42, 0, 10, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.tree.validate(cfg.max_depth).is_ok());
    }

    #[test]
    fn seed_isolation() {
        let cfg = GeneratorConfig::default();
        let alone = generate_problem(42, 5, 4, &cfg).unwrap();
        let batch = generate_set(42, 8, 4, &cfg).unwrap();
        assert_eq!(batch[5], alone);
    }
}
