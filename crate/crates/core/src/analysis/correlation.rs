//! Pearson correlation between problem representations and the thresholded graph.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemId;

/// Symmetric `n × n` matrix; rows of zero-variance vectors are all `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrMatrix {
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrMatrix {
    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// Correlation between every pair of row vectors of `coords`.
pub fn pearson_matrix(coords: &[Vec<f64>]) -> Result<CorrMatrix> {
    let k = coords.first().map_or(0, Vec::len);
    if coords.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidInput("ragged coordinate matrix".into()));
    }
    if k < 2 {
        return Err(Error::InvalidInput(format!(
            "correlation of representation vectors needs at least 2 components, got {k}"
        )));
    }
    if k < 3 {
        log::warn!("correlating {k}-component vectors, values are nearly always ±1");
    }
    let centred: Vec<Option<(Vec<f64>, f64)>> = coords
        .iter()
        .map(|r| {
            let mean = r.iter().sum::<f64>() / k as f64;
            let c: Vec<f64> = r.iter().map(|v| v - mean).collect();
            let ss = c.iter().map(|v| v * v).sum::<f64>();
            (ss > 0.0 && r.iter().any(|v| *v != r[0])).then_some((c, ss))
        })
        .collect();
    let n = coords.len();
    let mut values = vec![vec![None; n]; n];
    for i in 0..n {
        let Some((ci, si)) = &centred[i] else { continue };
        values[i][i] = Some(1.0);
        for j in i + 1..n {
            let Some((cj, sj)) = &centred[j] else { continue };
            let dot: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
            // sqrt(s·s) == s exactly, so a vector correlates with itself at exactly 1
            let r = (dot / (si * sj).sqrt()).clamp(-1.0, 1.0);
            values[i][j] = Some(r);
            values[j][i] = Some(r);
        }
    }
    Ok(CorrMatrix { values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGraph {
    pub nodes: Vec<ProblemId>,
    /// `i < j`, `|r| >= threshold`, in row-major order.
    pub edges: Vec<Edge>,
    pub threshold: f64,
}

pub fn build_graph(m: &CorrMatrix, nodes: &[ProblemId], threshold: f64) -> Result<CorrelationGraph> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidConfig(format!(
            "correlation threshold {threshold} outside [0, 1]"
        )));
    }
    if nodes.len() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            received: nodes.len(),
        });
    }
    let mut edges = Vec::new();
    for i in 0..m.n() {
        for j in i + 1..m.n() {
            if let Some(r) = m.values[i][j] {
                if r.abs() >= threshold {
                    edges.push(Edge { i, j, r });
                }
            }
        }
    }
    Ok(CorrelationGraph {
        nodes: nodes.to_vec(),
        edges,
        threshold,
    })
}
