//! Principal-component features of the design and of the design joined with y.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::sampling::SampleSet;

/// Cumulative explained variance that `expl_var_*` targets.
pub const EXPLAINED: f64 = 0.9;

/// Sample covariance of the columns of `rows`.
pub fn covariance(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let p = rows[0].len();
    let means: Vec<f64> = (0..p)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = DMatrix::zeros(p, p);
    for r in rows {
        for a in 0..p {
            let da = r[a] - means[a];
            for b in a..p {
                cov[(a, b)] += da * (r[b] - means[b]);
            }
        }
    }
    for a in 0..p {
        for b in a..p {
            let v = cov[(a, b)] / (n as f64 - 1.0);
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    cov
}

/// Returns `(share of components needed for 90 % variance, share of the first component)`.
pub fn explained_variance(rows: &[Vec<f64>]) -> Option<(f64, f64)> {
    let cov = covariance(rows);
    let p = cov.nrows();
    let mut eig: Vec<f64> = SymmetricEigen::new(cov)
        .eigenvalues
        .iter()
        .map(|v| v.max(0.0))
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = eig.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let mut cumulative = 0.0;
    let mut k = p;
    for (i, v) in eig.iter().enumerate() {
        cumulative += v;
        if cumulative / total >= EXPLAINED {
            k = i + 1;
            break;
        }
    }
    Some((k as f64 / p as f64, eig[0] / total))
}

/// `[expl_var_x, expl_var_init, pc1_x, pc1_init]`
pub fn feat_pca(s: &SampleSet) -> [Option<f64>; 4] {
    let (n, d) = (s.n(), s.dimension());
    if n <= d + 1 {
        return [None; 4];
    }
    let joined: Vec<Vec<f64>> = s
        .x
        .iter()
        .zip(&s.y)
        .map(|(r, y)| {
            let mut row = r.clone();
            row.push(*y);
            row
        })
        .collect();
    let x = explained_variance(&s.x);
    let init = explained_variance(&joined);
    [x.map(|v| v.0), init.map(|v| v.0), x.map(|v| v.1), init.map(|v| v.1)]
}
