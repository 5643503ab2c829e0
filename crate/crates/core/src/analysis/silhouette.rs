//! Silhouette of the two set labels over representation coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{ProblemId, SetLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub mode: String,
    pub silhouette: f64,
    pub coco_mean: f64,
    pub generated_mean: f64,
    pub coco_count: usize,
    pub generated_count: usize,
    /// Whether COCO problems on average sit closer to each other than to generated ones.
    pub coco_positive: bool,
}

/// Per-point values `s(i) = (b − a) / max(a, b)` with Euclidean distance.
pub fn silhouette_values(coords: &[Vec<f64>], labels: &[SetLabel]) -> Result<Vec<f64>> {
    if coords.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: coords.len(),
            received: labels.len(),
        });
    }
    for l in [SetLabel::Coco, SetLabel::Generated] {
        let count = labels.iter().filter(|x| **x == l).count();
        if count < 2 {
            return Err(Error::InvalidInput(format!(
                "silhouette needs at least 2 {l} problems, got {count}"
            )));
        }
    }
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
    };
    Ok((0..coords.len())
        .map(|i| {
            let (mut own, mut own_n, mut other, mut other_n) = (0.0, 0usize, 0.0, 0usize);
            for j in 0..coords.len() {
                if i == j {
                    continue;
                }
                let d = dist(&coords[i], &coords[j]);
                if labels[j] == labels[i] {
                    own += d;
                    own_n += 1;
                } else {
                    other += d;
                    other_n += 1;
                }
            }
            let a = own / own_n as f64;
            let b = other / other_n as f64;
            let m = a.max(b);
            if m > 0.0 { (b - a) / m } else { 0.0 }
        })
        .collect())
}

pub fn silhouette(coords: &[Vec<f64>], ids: &[ProblemId], mode: &str) -> Result<SeparationReport> {
    let labels: Vec<SetLabel> = ids.iter().map(|id| id.set_label).collect();
    let s = silhouette_values(coords, &labels)?;
    let mean_of = |l: SetLabel| -> (f64, usize) {
        let v: Vec<f64> = s.iter().zip(&labels).filter(|(_, x)| **x == l).map(|(v, _)| *v).collect();
        (v.iter().sum::<f64>() / v.len() as f64, v.len())
    };
    let (coco_mean, coco_count) = mean_of(SetLabel::Coco);
    let (generated_mean, generated_count) = mean_of(SetLabel::Generated);
    Ok(SeparationReport {
        mode: mode.to_string(),
        silhouette: (s.iter().sum::<f64>() / s.len() as f64).clamp(-1.0, 1.0),
        coco_mean,
        generated_mean,
        coco_count,
        generated_count,
        coco_positive: coco_mean > 0.0,
    })
}
