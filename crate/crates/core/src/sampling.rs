//! Experimental designs and their evaluation.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{BoxBounds, Payload, Problem, ProblemId};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    LatinHypercube,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub strategy: Strategy,
    pub n: usize,
    pub seed: u64,
}

impl SamplePlan {
    pub fn latin(n: usize, seed: u64) -> Self {
        SamplePlan {
            strategy: Strategy::LatinHypercube,
            n,
            seed,
        }
    }

    pub fn uniform(n: usize, seed: u64) -> Self {
        SamplePlan {
            strategy: Strategy::Uniform,
            n,
            seed,
        }
    }

    /// `n >= D + 2`, so the linear meta-model is overdetermined.
    pub fn validate(&self, dimension: usize) -> Result<()> {
        if self.n < dimension + 2 {
            return Err(Error::InvalidConfig(format!(
                "sample size {} is below D + 2 = {}",
                self.n,
                dimension + 2
            )));
        }
        Ok(())
    }
}

/// Builds an `n × D` design inside `bounds`, one row per point.
pub fn build_design(plan: &SamplePlan, bounds: &BoxBounds) -> Vec<Vec<f64>> {
    let (n, d) = (plan.n, bounds.dimension());
    let mut rng = rng::stream(&[rng::tag::DESIGN, plan.seed]);
    let mut x = vec![vec![0.0; d]; n];
    for j in 0..d {
        let (lo, hi) = (bounds.lower()[j], bounds.upper()[j]);
        match plan.strategy {
            Strategy::LatinHypercube => {
                let mut strata: Vec<usize> = (0..n).collect();
                strata.shuffle(&mut rng);
                for (row, k) in x.iter_mut().zip(strata) {
                    let u: f64 = rng.random();
                    row[j] = lo + (k as f64 + u) / n as f64 * (hi - lo);
                }
            }
            Strategy::Uniform => {
                for row in x.iter_mut() {
                    row[j] = rng.random_range(lo..hi);
                }
            }
        }
    }
    x
}

/// Design points and their objective values for one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub problem_id: ProblemId,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

impl SampleSet {
    pub fn new(problem_id: ProblemId, x: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "{} design rows but {} objective values",
                x.len(),
                y.len()
            )));
        }
        let d = x.first().map_or(0, Vec::len);
        if x.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidInput("ragged design matrix".into()));
        }
        if let Some(row) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective {
                problem: problem_id.to_string(),
                row,
            });
        }
        Ok(SampleSet { problem_id, x, y })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn dimension(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }
}

/// Evaluates `problem` on every design row, in row order.
pub fn evaluate_design(problem: &Problem, x: &[Vec<f64>]) -> Result<SampleSet> {
    let d = problem.dimension();
    if let Some(bad) = x.iter().find(|row| row.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            received: bad.len(),
        });
    }
    let y: Vec<f64> = x.par_iter().map(|row| problem.evaluate_unchecked(row)).collect();
    if let Some(row) = y.iter().position(|v| !v.is_finite()) {
        let problem = match &problem.payload {
            Payload::Bbob(inst) => format!("{} (internal error: BBOB function {} must be finite in bounds)", problem.id, inst.function_id),
            Payload::Generated(_) => problem.id.to_string(),
        };
        return Err(Error::NonFiniteObjective { problem, row });
    }
    Ok(SampleSet {
        problem_id: problem.id,
        x: x.to_vec(),
        y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbob::make_bbob;

    #[test]
    fn latin_stratification_small() {
        let bounds = BoxBounds::cube(2, 0.0, 1.0).unwrap();
        let x = build_design(&SamplePlan::latin(10, 3), &bounds);
        for j in 0..2 {
            let mut seen = [false; 10];
            for row in &x {
                let k = (row[j] * 10.0).floor() as usize;
                assert!(!seen[k]);
                seen[k] = true;
            }
        }
    }

    #[test]
    fn designs_are_deterministic() {
        let bounds = BoxBounds::domain(3);
        for plan in [SamplePlan::latin(30, 1), SamplePlan::uniform(30, 1)] {
            assert_eq!(build_design(&plan, &bounds), build_design(&plan, &bounds));
        }
        assert_ne!(
            build_design(&SamplePlan::latin(30, 1), &bounds),
            build_design(&SamplePlan::latin(30, 2), &bounds)
        );
    }

    #[test]
    fn uniform_column_means() {
        let bounds = BoxBounds::domain(10);
        let x = build_design(&SamplePlan::uniform(2000, 11), &bounds);
        for j in 0..10 {
            let mean = x.iter().map(|r| r[j]).sum::<f64>() / 2000.0;
            assert!(mean.abs() < 0.3, "column {j} mean {mean}");
            assert!(x.iter().all(|r| (-5.0..=5.0).contains(&r[j])));
        }
    }

    #[test]
    fn plan_needs_overdetermined_sample() {
        assert!(SamplePlan::latin(11, 0).validate(10).is_err());
        assert!(SamplePlan::latin(12, 0).validate(10).is_ok());
    }

    #[test]
    fn sphere_on_zero_rows() {
        let p = make_bbob(1, 3, 0).unwrap();
        let s = evaluate_design(&p, &vec![vec![0.0; 3]; 5]).unwrap();
        assert_eq!(s.y, vec![0.0; 5]);
    }

    #[test]
    fn rastrigin_lhs_finite() {
        let p = make_bbob(3, 2, 1).unwrap();
        let x = build_design(&SamplePlan::latin(400, 5), &p.bounds);
        let s = evaluate_design(&p, &x).unwrap();
        assert_eq!(s.n(), 400);
        assert!(s.y.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn evaluation_is_pointwise() {
        let p = make_bbob(15, 4, 2).unwrap();
        let x = build_design(&SamplePlan::latin(40, 8), &p.bounds);
        let full = evaluate_design(&p, &x).unwrap();
        let reversed: Vec<Vec<f64>> = x.iter().rev().cloned().collect();
        let rev = evaluate_design(&p, &reversed).unwrap();
        let expect: Vec<f64> = full.y.iter().rev().copied().collect();
        assert_eq!(rev.y, expect);
        let subset = evaluate_design(&p, &x[10..20]).unwrap();
        assert_eq!(subset.y, full.y[10..20]);
    }

    #[test]
    fn wrong_width_rejected() {
        let p = make_bbob(1, 3, 0).unwrap();
        assert!(matches!(
            evaluate_design(&p, &[vec![0.0; 2]]),
            Err(Error::DimensionMismatch { expected: 3, received: 2 })
        ));
    }
}
