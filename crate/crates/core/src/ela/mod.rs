//! Exploratory landscape analysis features computed from a [`SampleSet`].
//!
//! Thirty-seven features in six groups, always in the order of
//! [`FEATURE_NAMES`]. A feature that cannot be computed for a sample is
//! carried as `None` and never silently replaced. Classifier-based level-set
//! features are not part of this catalogue.

pub mod disp;
pub mod distr;
pub mod ic;
pub mod meta;
pub mod nbc;
pub mod pca;
pub mod stats;

use serde::{Deserialize, Serialize};

pub use disp::feat_disp;
pub use distr::feat_distr;
pub use ic::feat_ic;
pub use meta::feat_meta;
pub use nbc::feat_nbc;
pub use pca::feat_pca;

use crate::problem::ProblemId;
use crate::sampling::SampleSet;

pub const FEATURE_COUNT: usize = 37;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "distr.skewness",
    "distr.kurtosis",
    "distr.n_peaks",
    "meta.lin_adj_r2",
    "meta.lin_coef_min",
    "meta.lin_coef_max",
    "meta.lin_coef_ratio",
    "meta.quad_adj_r2",
    "meta.quad_cond",
    "disp.ratio_mean_02",
    "disp.ratio_mean_05",
    "disp.ratio_mean_10",
    "disp.ratio_mean_25",
    "disp.ratio_median_02",
    "disp.ratio_median_05",
    "disp.ratio_median_10",
    "disp.ratio_median_25",
    "disp.diff_mean_02",
    "disp.diff_mean_05",
    "disp.diff_mean_10",
    "disp.diff_mean_25",
    "disp.diff_median_02",
    "disp.diff_median_05",
    "disp.diff_median_10",
    "disp.diff_median_25",
    "ic.h_max",
    "ic.eps_s",
    "ic.m0",
    "ic.eps_max",
    "nbc.nn_nb_mean_ratio",
    "nbc.nn_nb_sd_ratio",
    "nbc.nb_nn_cor",
    "nbc.nb_fitness_cor",
    "pca.expl_var_x",
    "pca.expl_var_init",
    "pca.pc1_x",
    "pca.pc1_init",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub problem_id: ProblemId,
    /// `(name, value)` pairs; `None` marks an invalid feature.
    pub values: Vec<(String, Option<f64>)>,
}

impl FeatureVector {
    pub fn get(&self, name: &str) -> Option<Option<f64>> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn raw(&self) -> Vec<Option<f64>> {
        self.values.iter().map(|(_, v)| *v).collect()
    }
}

/// Computes all six groups for one sample.
pub fn extract_all(s: &SampleSet, tour_seed: u64) -> FeatureVector {
    let mut raw: Vec<Option<f64>> = Vec::with_capacity(FEATURE_COUNT);
    raw.extend(feat_distr(s));
    raw.extend(feat_meta(s));
    raw.extend(feat_disp(s));
    raw.extend(feat_ic(s, tour_seed));
    raw.extend(feat_nbc(s));
    raw.extend(feat_pca(s));
    debug_assert_eq!(raw.len(), FEATURE_COUNT);
    let values = FEATURE_NAMES
        .iter()
        .zip(raw)
        .map(|(name, v)| (name.to_string(), v.filter(|x| x.is_finite())))
        .collect();
    FeatureVector {
        problem_id: s.problem_id,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bbob::make_bbob;
    use crate::sampling::{build_design, evaluate_design, SamplePlan};

    #[test]
    fn sphere_all_valid() {
        let p = make_bbob(1, 2, 0).unwrap();
        let x = build_design(&SamplePlan::latin(400, 1), &p.bounds);
        let s = evaluate_design(&p, &x).unwrap();
        let f = extract_all(&s, 3);
        assert_eq!(f.values.len(), 37);
        for (name, v) in &f.values {
            assert!(v.is_some(), "{name} invalid");
        }
        assert_eq!(f, extract_all(&s, 3));
    }

    #[test]
    fn constant_sample_contract() {
        let x = build_design(&SamplePlan::latin(100, 1), &crate::problem::BoxBounds::domain(2));
        let s = SampleSet::new(ProblemId::generated(1), x, vec![4.0; 100]).unwrap();
        let f = extract_all(&s, 0);
        assert_eq!(f.get("distr.skewness"), Some(None));
        assert_eq!(f.get("ic.h_max"), Some(Some(0.0)));
    }

    #[test]
    fn names_are_unique() {
        let mut names = FEATURE_NAMES.to_vec();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), FEATURE_COUNT);
    }
}
