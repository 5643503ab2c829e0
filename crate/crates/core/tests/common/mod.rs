#![allow(dead_code)]

pub mod checks;
pub mod ela_oracle;

use elacomp::bbob::make_bbob;
use elacomp::ela::{self, FEATURE_NAMES};
use elacomp::rng;
use elacomp::sampling::{evaluate_design, SampleSet};
use rand::Rng;

/// `|a − b| <= 1e-10` or relative error `<= 1e-8`.
pub fn feature_close(a: f64, b: f64) -> bool {
    let diff = (a - b).abs();
    diff <= 1e-10 || diff <= 1e-8 * a.abs().max(b.abs())
}

/// `n = 50`, `D = 2` uniform sample of one of the BBOB functions.
pub fn random_sample(k: u64) -> SampleSet {
    let p = make_bbob((k % 24) as u32 + 1, 2, k % 3 + 1).unwrap();
    let mut r = rng::stream(&[1234, k]);
    let x: Vec<Vec<f64>> = (0..50)
        .map(|_| vec![r.random_range(-5.0..5.0), r.random_range(-5.0..5.0)])
        .collect();
    evaluate_design(&p, &x).unwrap()
}

/// The 37 features against the oracle; one message per disagreement.
pub fn oracle_mismatches(s: &SampleSet, seed: u64) -> Vec<String> {
    let got = ela::extract_all(s, seed).raw();
    let want = ela_oracle::all(s, seed);
    let mut bad = Vec::new();
    for (k, (g, w)) in got.iter().zip(&want).enumerate() {
        let ok = match (g, w) {
            (None, None) => true,
            (Some(a), Some(b)) => feature_close(*a, *b),
            _ => false,
        };
        if !ok {
            bad.push(format!("{}: got {g:?}, oracle {w:?}", FEATURE_NAMES[k]));
        }
    }
    bad
}

/// The constant-`y` and duplicated-point cases.
pub fn degenerate_samples() -> Vec<(SampleSet, u64)> {
    use elacomp::problem::{BoxBounds, ProblemId};
    use elacomp::sampling::{build_design, SamplePlan};
    let x = build_design(&SamplePlan::latin(50, 3), &BoxBounds::domain(2));
    let flat = SampleSet::new(ProblemId::generated(0), x, vec![2.5; 50]).unwrap();
    let base = random_sample(7);
    let mut x = base.x[..25].to_vec();
    x.extend_from_slice(&base.x[..25]);
    let mut y = base.y[..25].to_vec();
    y.extend_from_slice(&base.y[..25]);
    let twice = SampleSet::new(base.problem_id, x, y).unwrap();
    vec![(flat, 0), (twice, 4)]
}
