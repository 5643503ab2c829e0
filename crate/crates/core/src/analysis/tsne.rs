//! Exact t-SNE with per-point perplexity calibration.
//!
//! Rows are processed in ascending problem-id order and every point's starting
//! position is drawn from a stream keyed by its id, so permuting the input
//! only permutes the output. Row-parallel loops reduce in a fixed order and
//! give the same bits for any thread count.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{ProblemId, SetLabel};
use crate::rng::{self, tag};

/// Allowed gap between a point's entropy and `log2(perplexity)`, in bits.
pub const ENTROPY_TOLERANCE: f64 = 1e-4;

const INIT_SD: f64 = 1e-4;
const P_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TsneParams {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub exaggeration_factor: f64,
    pub exaggeration_iters: usize,
    /// Momentum is 0.5 before this iteration and 0.8 from it on.
    pub momentum_switch: usize,
    pub seed: u64,
}

impl Default for TsneParams {
    fn default() -> Self {
        TsneParams {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            exaggeration_factor: 12.0,
            exaggeration_iters: 250,
            momentum_switch: 250,
            seed: 0,
        }
    }
}

impl TsneParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 5 {
            return Err(Error::InvalidInput(format!("t-SNE needs at least 5 points, got {n}")));
        }
        let max = (n as f64 - 1.0) / 3.0;
        if !(self.perplexity > 0.0 && self.perplexity < max) {
            return Err(Error::Perplexity {
                perplexity: self.perplexity,
                n,
                max,
            });
        }
        if !(self.learning_rate > 0.0) || !(self.exaggeration_factor >= 1.0) {
            return Err(Error::InvalidConfig(
                "t-SNE learning rate must be positive and exaggeration at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRow {
    pub id: ProblemId,
    pub x: f64,
    pub y: f64,
}

impl EmbeddingRow {
    pub fn set_label(&self) -> SetLabel {
        self.id.set_label
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding2D {
    /// In input order.
    pub rows: Vec<EmbeddingRow>,
    pub params: TsneParams,
    pub initial_kl: f64,
    pub final_kl: f64,
    /// Calibrated entropy of each point's conditional distribution, in bits, in input order.
    pub entropies: Vec<f64>,
}

impl Embedding2D {
    /// Largest `|H_i − log2(perplexity)|`.
    pub fn calibration_error(&self) -> f64 {
        let target = self.params.perplexity.log2();
        self.entropies
            .iter()
            .fold(0.0, |m, h| f64::max(m, (h - target).abs()))
    }
}

/// Conditional distribution `p_{j|i}` over one row of squared distances
/// (`self_index` excluded), tuned so its entropy is `log2(perplexity)`.
/// Returns the probabilities and the achieved entropy in bits.
pub fn calibrate_row(dist2: &[f64], self_index: usize, perplexity: f64) -> (Vec<f64>, f64) {
    let target = perplexity.log2();
    let floor = dist2
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != self_index)
        .fold(f64::INFINITY, |m, (_, d)| m.min(*d));
    let mut p = vec![0.0; dist2.len()];
    let eval = |beta: f64, p: &mut [f64]| -> f64 {
        let mut z = 0.0;
        for (j, d) in dist2.iter().enumerate() {
            p[j] = if j == self_index { 0.0 } else { (-beta * (d - floor)).exp() };
            z += p[j];
        }
        let mut h = 0.0;
        for v in p.iter_mut() {
            *v /= z;
            if *v > 0.0 {
                h -= *v * v.log2();
            }
        }
        h
    };
    // entropy falls monotonically as beta grows
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    let mut beta = 1.0 / dist2.iter().fold(0.0f64, |m, d| m.max(*d)).max(f64::MIN_POSITIVE);
    let mut h = eval(beta, &mut p);
    for _ in 0..200 {
        if (h - target).abs() <= ENTROPY_TOLERANCE * 0.1 {
            break;
        }
        if h > target {
            lo = beta;
            beta = if hi.is_finite() { (beta + hi) / 2.0 } else { beta * 2.0 };
        } else {
            hi = beta;
            beta = (beta + lo) / 2.0;
        }
        h = eval(beta, &mut p);
    }
    (p, h)
}

fn squared_distances(x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.par_iter()
        .map(|a| {
            x.iter()
                .map(|b| a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum())
                .collect()
        })
        .collect()
}

/// Student-t kernel row sums and matrix, plus the normalizer.
fn kernel(y: &[[f64; 2]]) -> (Vec<Vec<f64>>, f64) {
    let num: Vec<Vec<f64>> = y
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            y.iter()
                .enumerate()
                .map(|(j, b)| {
                    if i == j {
                        0.0
                    } else {
                        1.0 / (1.0 + (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2))
                    }
                })
                .collect()
        })
        .collect();
    let row_sums: Vec<f64> = num.par_iter().map(|r| r.iter().sum()).collect();
    let z = row_sums.iter().sum();
    (num, z)
}

fn kl_divergence(p: &[Vec<f64>], num: &[Vec<f64>], z: f64) -> f64 {
    let rows: Vec<f64> = p
        .par_iter()
        .zip(num)
        .enumerate()
        .map(|(i, (pr, nr))| {
            let mut s = 0.0;
            for j in 0..pr.len() {
                if i != j {
                    let q = (nr[j] / z).max(P_FLOOR);
                    s += pr[j] * (pr[j] / q).ln();
                }
            }
            s
        })
        .collect();
    rows.iter().sum::<f64>().max(0.0)
}

pub fn tsne(ids: &[ProblemId], coords: &[Vec<f64>], params: &TsneParams) -> Result<Embedding2D> {
    let n = coords.len();
    if ids.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            received: ids.len(),
        });
    }
    params.validate(n)?;
    if coords.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite t-SNE input coordinate".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| ids[i]);
    if order.windows(2).any(|w| ids[w[0]] == ids[w[1]]) {
        return Err(Error::InvalidInput("duplicate problem id in t-SNE input".into()));
    }
    let x: Vec<Vec<f64>> = order.iter().map(|&i| coords[i].clone()).collect();

    let d2 = squared_distances(&x);
    let rows: Vec<(Vec<f64>, f64)> = d2
        .par_iter()
        .enumerate()
        .map(|(i, r)| calibrate_row(r, i, params.perplexity))
        .collect();
    let target = params.perplexity.log2();
    let missed = rows.iter().filter(|r| (r.1 - target).abs() > ENTROPY_TOLERANCE).count();
    if missed > 0 {
        // more coincident neighbours than the perplexity puts a floor under the entropy
        log::warn!("t-SNE: entropy calibration missed for {missed} of {n} points (coincident inputs)");
    }
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                p[i][j] = ((rows[i].0[j] + rows[j].0[i]) / (2.0 * n as f64)).max(P_FLOOR);
            }
        }
    }

    let mut y: Vec<[f64; 2]> = order
        .iter()
        .map(|&i| {
            let id = ids[i];
            let mut s = rng::stream(&[tag::TSNE_INIT, params.seed, id.set_label as u64, id.index]);
            let a: f64 = s.sample(StandardNormal);
            let b: f64 = s.sample(StandardNormal);
            [a * INIT_SD, b * INIT_SD]
        })
        .collect();
    let (num, z) = kernel(&y);
    let initial_kl = kl_divergence(&p, &num, z);

    let mut update = vec![[0.0; 2]; n];
    let mut gains = vec![[1.0f64; 2]; n];
    for iter in 0..params.iterations {
        let exaggeration = if iter < params.exaggeration_iters {
            params.exaggeration_factor
        } else {
            1.0
        };
        let momentum = if iter < params.momentum_switch { 0.5 } else { 0.8 };
        let (num, z) = kernel(&y);
        if iter % 100 == 0 && log::log_enabled!(log::Level::Trace) {
            log::trace!("t-SNE iteration {iter}: KL {}", kl_divergence(&p, &num, z));
        }
        let grad: Vec<[f64; 2]> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut g = [0.0; 2];
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let q = (num[i][j] / z).max(P_FLOOR);
                    let w = (exaggeration * p[i][j] - q) * num[i][j];
                    g[0] += 4.0 * w * (y[i][0] - y[j][0]);
                    g[1] += 4.0 * w * (y[i][1] - y[j][1]);
                }
                g
            })
            .collect();
        for i in 0..n {
            for c in 0..2 {
                gains[i][c] = if (grad[i][c] > 0.0) != (update[i][c] > 0.0) {
                    gains[i][c] + 0.2
                } else {
                    (gains[i][c] * 0.8).max(0.01)
                };
                update[i][c] = momentum * update[i][c] - params.learning_rate * gains[i][c] * grad[i][c];
                y[i][c] += update[i][c];
            }
        }
        for c in 0..2 {
            let mean = y.iter().map(|r| r[c]).sum::<f64>() / n as f64;
            for r in y.iter_mut() {
                r[c] -= mean;
            }
        }
    }
    let (num, z) = kernel(&y);
    let final_kl = kl_divergence(&p, &num, z);
    if y.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("t-SNE diverged to non-finite coordinates".into()));
    }

    let mut out_rows = vec![
        EmbeddingRow {
            id: ids[0],
            x: 0.0,
            y: 0.0,
        };
        n
    ];
    let mut entropies = vec![0.0; n];
    for (pos, &i) in order.iter().enumerate() {
        out_rows[i] = EmbeddingRow {
            id: ids[i],
            x: y[pos][0],
            y: y[pos][1],
        };
        entropies[i] = rows[pos].1;
    }
    Ok(Embedding2D {
        rows: out_rows,
        params: *params,
        initial_kl,
        final_kl,
        entropies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs(n: usize) -> (Vec<ProblemId>, Vec<Vec<f64>>) {
        let mut s = rng::stream(&[99]);
        let ids = (0..n as u64).map(ProblemId::generated).collect();
        let x = (0..n)
            .map(|i| {
                let c = if i % 2 == 0 { 0.0 } else { 10.0 };
                (0..4).map(|_| c + s.sample::<f64, _>(StandardNormal)).collect()
            })
            .collect();
        (ids, x)
    }

    #[test]
    fn calibration_hits_target() {
        let d: Vec<f64> = (0..40).map(|j| (j as f64 * 0.37).sin().abs() * 5.0 + j as f64 * 0.01).collect();
        let (p, h) = calibrate_row(&d, 3, 10.0);
        assert!((h - 10f64.log2()).abs() <= ENTROPY_TOLERANCE);
        assert_eq!(p[3], 0.0);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_perplexity_reports_maximum() {
        let (ids, x) = blobs(10);
        let err = tsne(&ids, &x, &TsneParams::default()).unwrap_err();
        assert!(matches!(err, Error::Perplexity { max, .. } if max == 3.0));
    }

    #[test]
    fn clusters_stay_apart_and_kl_drops() {
        let (ids, x) = blobs(40);
        let params = TsneParams {
            perplexity: 5.0,
            iterations: 1000,
            ..TsneParams::default()
        };
        let e = tsne(&ids, &x, &params).unwrap();
        assert!(e.final_kl < e.initial_kl, "{} {}", e.initial_kl, e.final_kl);
        assert!(e.calibration_error() <= ENTROPY_TOLERANCE);
        let centre = |parity: usize| {
            let pts: Vec<_> = e.rows.iter().enumerate().filter(|(i, _)| i % 2 == parity).collect();
            let m = pts.len() as f64;
            (
                pts.iter().map(|(_, r)| r.x).sum::<f64>() / m,
                pts.iter().map(|(_, r)| r.y).sum::<f64>() / m,
            )
        };
        let (a, b) = (centre(0), centre(1));
        assert!(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() > 5.0);
    }

    #[test]
    fn permutation_equivariant() {
        let (ids, x) = blobs(20);
        let params = TsneParams {
            perplexity: 4.0,
            iterations: 120,
            ..TsneParams::default()
        };
        let a = tsne(&ids, &x, &params).unwrap();
        let rev_ids: Vec<_> = ids.iter().rev().copied().collect();
        let rev_x: Vec<_> = x.iter().rev().cloned().collect();
        let b = tsne(&rev_ids, &rev_x, &params).unwrap();
        for i in 0..20 {
            assert_eq!(a.rows[i], b.rows[19 - i]);
        }
        assert_eq!(a.final_kl, b.final_kl);
    }
}
