//! Information-content features along a nearest-neighbour tour of the sample.

use rand::Rng;

use super::disp::rank_rows;
use super::stats::distance;
use crate::rng::{self, tag};
use crate::sampling::SampleSet;

/// Entropy below which the landscape counts as settled.
pub const SETTLING: f64 = 0.05;
pub const EPS_COUNT: usize = 1000;
pub const EPS_LOG_RANGE: (f64, f64) = (-5.0, 15.0);

/// Sensitivity grid: `0` followed by `logspace(-5, 15, 1000)`.
pub fn epsilon_grid() -> Vec<f64> {
    let (lo, hi) = EPS_LOG_RANGE;
    std::iter::once(0.0)
        .chain((0..EPS_COUNT).map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (EPS_COUNT - 1) as f64)))
        .collect()
}

/// Starting row of the tour. The seed picks a rank in objective order, which
/// keeps the tour independent of how the rows are stored.
pub fn tour_start(y: &[f64], tour_seed: u64) -> usize {
    let rank = rng::stream(&[tag::TOUR, tour_seed]).random_range(0..y.len());
    rank_rows(y)[rank]
}

/// Greedy nearest-unvisited tour; ties go to the lowest row index.
pub fn nearest_neighbour_tour(x: &[Vec<f64>], start: usize) -> Vec<usize> {
    let n = x.len();
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut current = start;
    visited[current] = true;
    tour.push(current);
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, seen) in visited.iter().enumerate() {
            if !seen {
                let d = distance(&x[current], &x[j]);
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        visited[best] = true;
        tour.push(best);
        current = best;
    }
    tour
}

/// Distance-normalised slopes along the tour; zero-length hops are skipped.
pub fn tour_slopes(s: &SampleSet, tour: &[usize]) -> Vec<f64> {
    tour.windows(2)
        .filter_map(|w| {
            let d = distance(&s.x[w[0]], &s.x[w[1]]);
            (d > 0.0).then(|| (s.y[w[1]] - s.y[w[0]]) / d)
        })
        .collect()
}

fn symbol(slope: f64, eps: f64) -> usize {
    if slope < -eps {
        0
    } else if slope > eps {
        2
    } else {
        1
    }
}

/// Entropy of unequal consecutive symbol pairs (base 6) and the run count of
/// the zero-free symbol string divided by the number of slopes.
pub fn entropy_and_modality(slopes: &[f64], eps: f64) -> (f64, f64) {
    let mut counts = [[0usize; 3]; 3];
    let mut previous: Option<usize> = None;
    let mut runs = 0usize;
    let mut last_nonzero: Option<usize> = None;
    for &slope in slopes {
        let s = symbol(slope, eps);
        if let Some(p) = previous {
            counts[p][s] += 1;
        }
        previous = Some(s);
        if s != 1 && last_nonzero != Some(s) {
            runs += 1;
            last_nonzero = Some(s);
        }
    }
    let pairs = (slopes.len() - 1) as f64;
    let mut h = 0.0;
    for (a, row) in counts.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if a != b && c > 0 {
                let p = c as f64 / pairs;
                h -= p * p.ln() / 6f64.ln();
            }
        }
    }
    (h, runs as f64 / slopes.len() as f64)
}

/// `[ic.h_max, ic.eps_s, ic.m0, ic.eps_max]`
pub fn feat_ic(s: &SampleSet, tour_seed: u64) -> [Option<f64>; 4] {
    if s.n() < 3 {
        return [None; 4];
    }
    let tour = nearest_neighbour_tour(&s.x, tour_start(&s.y, tour_seed));
    let slopes = tour_slopes(s, &tour);
    if slopes.len() < 2 {
        return [None; 4];
    }
    let grid = epsilon_grid();
    let mut h_max = f64::NEG_INFINITY;
    let mut eps_max = 0.0;
    let mut eps_s = None;
    let mut m0 = 0.0;
    for (k, &eps) in grid.iter().enumerate() {
        let (h, m) = entropy_and_modality(&slopes, eps);
        if k == 0 {
            m0 = m;
        }
        if h > h_max {
            h_max = h;
            eps_max = eps;
        }
        if eps_s.is_none() && eps > 0.0 && h < SETTLING {
            eps_s = Some(eps.log10());
        }
    }
    [Some(h_max), eps_s, Some(m0), Some(eps_max)]
}
