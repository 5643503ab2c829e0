//! y-distribution features: skewness, excess kurtosis and KDE peak count.

use super::stats;
use crate::sampling::SampleSet;

pub const KDE_GRID: usize = 512;
/// Minimum share of total density mass a peak region needs to be counted.
pub const PEAK_MASS: f64 = 0.01;

/// `[distr.skewness, distr.kurtosis, distr.n_peaks]`
pub fn feat_distr(s: &SampleSet) -> [Option<f64>; 3] {
    let y = &s.y;
    if y.len() < 4 {
        return [None; 3];
    }
    if stats::all_equal(y) {
        return [None, None, Some(1.0)];
    }
    let n = y.len() as f64;
    let m = stats::mean(y);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in y {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let skewness = m3 / m2.powf(1.5);
    let kurtosis = m4 / (m2 * m2) - 3.0;
    [Some(skewness), Some(kurtosis), Some(count_peaks(y) as f64)]
}

/// Silverman's rule of thumb, `0.9 · min(sd, IQR/1.34) · n^(-1/5)`, with the
/// usual fallbacks when the robust spread is zero.
pub fn silverman_bandwidth(y: &[f64]) -> f64 {
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let sd = stats::sd(y);
    let iqr = stats::quantile_sorted(&sorted, 0.75) - stats::quantile_sorted(&sorted, 0.25);
    let mut lo = sd.min(iqr / 1.34);
    if lo <= 0.0 {
        lo = if sd > 0.0 {
            sd
        } else if sorted[0] != 0.0 {
            sorted[0].abs()
        } else {
            1.0
        };
    }
    0.9 * lo * (y.len() as f64).powf(-0.2)
}

/// Gaussian kernel density of `y` on an evenly spaced grid over `[min y, max y]`.
pub fn kde_grid(y: &[f64]) -> Vec<f64> {
    let h = silverman_bandwidth(y);
    let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let step = (hi - lo) / (KDE_GRID - 1) as f64;
    let norm = 1.0 / (y.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    (0..KDE_GRID)
        .map(|k| {
            let g = lo + k as f64 * step;
            norm * y
                .iter()
                .map(|v| {
                    let u = (g - v) / h;
                    (-0.5 * u * u).exp()
                })
                .sum::<f64>()
        })
        .collect()
}

/// Splits the density grid at its local minima and counts the regions
/// holding more than [`PEAK_MASS`] of the total mass.
pub fn count_peaks(y: &[f64]) -> usize {
    let density = kde_grid(y);
    let total: f64 = density.iter().sum();
    let mut cuts = vec![0];
    for k in 1..density.len() - 1 {
        if density[k] < density[k - 1] && density[k] <= density[k + 1] {
            cuts.push(k);
        }
    }
    cuts.push(density.len());
    cuts.windows(2)
        .filter(|w| density[w[0]..w[1]].iter().sum::<f64>() / total > PEAK_MASS)
        .count()
}
