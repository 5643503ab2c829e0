//! Independent checks for subspace models, t-SNE and correlation output.

use std::collections::BTreeMap;
use std::path::Path;

use elacomp::analysis::{CorrMatrix, CorrelationGraph};
use elacomp::subspace::{FeatureMatrix, SvdModel};

use super::ela_oracle::jacobi_eigenvalues;

/// Min-max scaling recomputed from scratch.
pub fn scale_own(m: &FeatureMatrix) -> Vec<Vec<f64>> {
    let v = m.values().unwrap();
    let p = m.n_cols();
    let lo: Vec<f64> = (0..p).map(|j| v.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..p).map(|j| v.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    v.iter()
        .map(|r| {
            (0..p)
                .map(|j| if hi[j] == lo[j] { 0.5 } else { (r[j] - lo[j]) / (hi[j] - lo[j]) })
                .collect()
        })
        .collect()
}

fn basis(model: &SvdModel) -> Vec<Vec<f64>> {
    let p = model.columns().len();
    (0..p)
        .map(|j| (0..model.k).map(|t| model.basis[j * model.k + t]).collect())
        .collect()
}

pub fn orthonormality_error(model: &SvdModel) -> f64 {
    let b = basis(model);
    let mut worst = 0.0f64;
    for a in 0..model.k {
        for c in 0..model.k {
            let dot: f64 = b.iter().map(|row| row[a] * row[c]).sum();
            worst = worst.max((dot - if a == c { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

/// Squared singular values from the eigenvalues of `AᵀA`, descending.
pub fn energies(scaled: &[Vec<f64>]) -> Vec<f64> {
    let p = scaled[0].len();
    let mut g = vec![vec![0.0; p]; p];
    for r in scaled {
        for a in 0..p {
            for b in 0..p {
                g[a][b] += r[a] * r[b];
            }
        }
    }
    let mut e: Vec<f64> = jacobi_eigenvalues(g).into_iter().map(|v| v.max(0.0)).collect();
    e.sort_by(|a, b| b.partial_cmp(a).unwrap());
    e
}

/// `k` reaches the threshold and `k − 1` does not.
pub fn energy_rule_holds(model: &SvdModel, scaled: &[Vec<f64>]) -> Result<(), String> {
    let e = energies(scaled);
    let total: f64 = e.iter().sum();
    let upto = |k: usize| e[..k].iter().sum::<f64>() / total;
    let t = model.energy_threshold;
    // slack for the eigen solver near the boundary
    let slack = 1e-9;
    if upto(model.k) < t - slack {
        return Err(format!("k = {} holds {} < {t}", model.k, upto(model.k)));
    }
    if model.k > 1 && upto(model.k - 1) >= t + slack {
        return Err(format!("k − 1 = {} already holds {} >= {t}", model.k - 1, upto(model.k - 1)));
    }
    Ok(())
}

pub fn frobenius_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(u, v)| (u - v) * (u - v)))
        .sum::<f64>()
        .sqrt()
}

/// Coordinates of the owner set must equal `U·Σ`: orthogonal columns whose
/// norms are the singular values. Returns the largest deviation.
pub fn u_sigma_error(coords: &[Vec<f64>], model: &SvdModel) -> f64 {
    let mut worst = 0.0f64;
    for a in 0..model.k {
        for b in 0..model.k {
            let dot: f64 = coords.iter().map(|r| r[a] * r[b]).sum();
            let target = if a == b { model.singular_values[a].powi(2) } else { 0.0 };
            worst = worst.max((dot - target).abs() / model.singular_values[0].powi(2));
        }
    }
    worst
}

/// `(nΣxy − ΣxΣy) / sqrt((nΣx² − (Σx)²)(nΣy² − (Σy)²))`
pub fn pearson_direct(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    (n * sxy - sx * sy) / ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt()
}

/// Every pair `i < j` with `|r| >= threshold`, by a plain scan.
pub fn brute_filter(m: &CorrMatrix, threshold: f64) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..m.n() {
        for j in 0..m.n() {
            if i < j {
                if let Some(r) = m.values[i][j] {
                    if r.abs() >= threshold {
                        out.push((i, j, r));
                    }
                }
            }
        }
    }
    out
}

pub fn graph_edges(g: &CorrelationGraph) -> Vec<(usize, usize, f64)> {
    g.edges.iter().map(|e| (e.i, e.j, e.r)).collect()
}

/// Relative path → bytes for every file under `root`.
pub fn tree_bytes(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}
