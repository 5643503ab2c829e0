//! Dispersion features: spread of the best sample points against the whole sample.

use super::stats;
use crate::sampling::SampleSet;

/// Best-subset sizes in percent of the sample.
pub const QUANTILES_PERCENT: [usize; 4] = [2, 5, 10, 25];

/// `⌈p·n/100⌉` without floating-point rounding.
pub fn subset_size(percent: usize, n: usize) -> usize {
    (percent * n).div_ceil(100)
}

/// Row indices ordered by objective value, ties broken by row index.
pub fn rank_rows(y: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]).then(a.cmp(&b)));
    order
}

fn mean_and_median(mut dists: Vec<f64>) -> (f64, f64) {
    let mean = stats::mean(&dists);
    let median = stats::median_in_place(&mut dists);
    (mean, median)
}

/// Sixteen values ordered `ratio_mean_*`, `ratio_median_*`, `diff_mean_*`,
/// `diff_median_*`, each over the quantiles 02, 05, 10, 25.
pub fn feat_disp(s: &SampleSet) -> [Option<f64>; 16] {
    let mut out = [None; 16];
    let n = s.n();
    if n < 2 {
        return out;
    }
    let all: Vec<usize> = (0..n).collect();
    let (mean_all, median_all) = mean_and_median(stats::pairwise_distances(&s.x, &all));
    let order = rank_rows(&s.y);
    for (q, &pct) in QUANTILES_PERCENT.iter().enumerate() {
        let size = subset_size(pct, n);
        if size < 2 {
            continue;
        }
        let (mean_b, median_b) = mean_and_median(stats::pairwise_distances(&s.x, &order[..size]));
        out[q] = (mean_all > 0.0).then(|| mean_b / mean_all);
        out[4 + q] = (median_all > 0.0).then(|| median_b / median_all);
        out[8 + q] = Some(mean_b - mean_all);
        out[12 + q] = Some(median_b - median_all);
    }
    out
}
