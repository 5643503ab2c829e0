//! Nearest-better clustering features (minimisation).

use super::stats::{self, distance};
use crate::sampling::SampleSet;

/// Per-point nearest-neighbour and nearest-better distances plus the
/// nearest-better indegree of every point.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestBetter {
    pub nn: Vec<f64>,
    pub nb: Vec<f64>,
    pub indegree: Vec<f64>,
}

/// Points without a strictly better neighbour take the distance to their
/// farthest point as `nb`. Ties in distance go to the lowest row index.
pub fn nearest_better(s: &SampleSet) -> NearestBetter {
    let n = s.n();
    let mut nn = vec![f64::INFINITY; n];
    let mut nb = vec![f64::INFINITY; n];
    let mut target = vec![None; n];
    let mut farthest = vec![0.0f64; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = distance(&s.x[i], &s.x[j]);
            nn[i] = nn[i].min(d);
            farthest[i] = farthest[i].max(d);
            if s.y[j] < s.y[i] && d < nb[i] {
                nb[i] = d;
                target[i] = Some(j);
            }
        }
    }
    let mut indegree = vec![0.0; n];
    for (i, t) in target.iter().enumerate() {
        match t {
            Some(j) => indegree[*j] += 1.0,
            None => nb[i] = farthest[i],
        }
    }
    NearestBetter { nn, nb, indegree }
}

/// `[nn_nb_mean_ratio, nn_nb_sd_ratio, nb_nn_cor, nb_fitness_cor]`
pub fn feat_nbc(s: &SampleSet) -> [Option<f64>; 4] {
    if s.n() < 2 || stats::all_equal(&s.y) {
        return [None; 4];
    }
    let NearestBetter { nn, nb, indegree } = nearest_better(s);
    let mean_nb = stats::mean(&nb);
    let sd_nb = stats::sd(&nb);
    [
        (mean_nb > 0.0).then(|| stats::mean(&nn) / mean_nb),
        (sd_nb > 0.0).then(|| stats::sd(&nn) / sd_nb),
        stats::pearson(&nn, &nb),
        stats::pearson(&s.y, &indegree),
    ]
}
