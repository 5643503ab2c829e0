//! Min-max scaling, truncated SVD of feature matrices and the three
//! projection modes.
//!
//! Scaling parameters always belong to the set that owns the subspace. Values
//! of the other set are mapped with the owner's parameters and are not
//! clamped, so a value outside `[0, 1]` means "outside the owner's range".

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::ela::FeatureVector;
use crate::error::{Error, Result};
use crate::problem::{ProblemId, SetLabel};

/// Problems × named features, `None` marking an invalid value.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    row_ids: Vec<ProblemId>,
    columns: Vec<String>,
    data: Vec<Vec<Option<f64>>>,
}

impl FeatureMatrix {
    pub fn new(
        row_ids: Vec<ProblemId>,
        columns: Vec<String>,
        data: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        if row_ids.len() != data.len() {
            return Err(Error::DimensionMismatch {
                expected: row_ids.len(),
                received: data.len(),
            });
        }
        let mut seen = HashSet::new();
        for id in &row_ids {
            if !seen.insert(*id) {
                return Err(Error::InvalidInput(format!("duplicate row id {id}")));
            }
        }
        for (i, row) in data.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::DimensionMismatch {
                    expected: columns.len(),
                    received: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate() {
                if matches!(v, Some(x) if !x.is_finite()) {
                    return Err(Error::NonFiniteFeature {
                        row: i,
                        column: columns[j].clone(),
                    });
                }
            }
        }
        Ok(FeatureMatrix {
            row_ids,
            columns,
            data,
        })
    }

    /// Stacks feature vectors that share one column layout.
    pub fn from_vectors(vectors: &[FeatureVector]) -> Result<Self> {
        let columns: Vec<String> = match vectors.first() {
            Some(v) => v.values.iter().map(|(n, _)| n.clone()).collect(),
            None => Vec::new(),
        };
        let mut data = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.values.len() != columns.len()
                || v.values.iter().zip(&columns).any(|((n, _), c)| n != c)
            {
                return Err(Error::ColumnMismatch(format!(
                    "feature vector of {} has a different column layout",
                    v.problem_id
                )));
            }
            data.push(v.raw());
        }
        FeatureMatrix::new(vectors.iter().map(|v| v.problem_id).collect(), columns, data)
    }

    pub fn row_ids(&self) -> &[ProblemId] {
        &self.row_ids
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn data(&self) -> &[Vec<Option<f64>>] {
        &self.data
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Dense values; fails on the first invalid mark.
    pub fn values(&self) -> Result<Vec<Vec<f64>>> {
        self.data
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        v.ok_or_else(|| Error::NonFiniteFeature {
                            row: i,
                            column: self.columns[j].clone(),
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn concat(&self, other: &FeatureMatrix) -> Result<FeatureMatrix> {
        check_columns(&self.columns, &other.columns)?;
        let mut ids = self.row_ids.clone();
        ids.extend_from_slice(&other.row_ids);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        FeatureMatrix::new(ids, self.columns.clone(), data)
    }

    fn keep_columns(&self, keep: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            row_ids: self.row_ids.clone(),
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            data: self
                .data
                .iter()
                .map(|row| keep.iter().map(|&j| row[j]).collect())
                .collect(),
        }
    }
}

fn check_columns(expected: &[String], received: &[String]) -> Result<()> {
    if expected == received {
        return Ok(());
    }
    let missing: Vec<&str> = expected
        .iter()
        .filter(|c| !received.contains(c))
        .map(String::as_str)
        .collect();
    let extra: Vec<&str> = received
        .iter()
        .filter(|c| !expected.contains(c))
        .map(String::as_str)
        .collect();
    let msg = if missing.is_empty() && extra.is_empty() {
        "same columns in a different order".to_string()
    } else {
        format!("missing [{}], unexpected [{}]", missing.join(", "), extra.join(", "))
    };
    Err(Error::ColumnMismatch(msg))
}

/// Drops every column with an invalid mark in either matrix.
pub fn clean_columns(
    a: &FeatureMatrix,
    b: &FeatureMatrix,
) -> Result<(FeatureMatrix, FeatureMatrix, Vec<String>)> {
    check_columns(&a.columns, &b.columns)?;
    let invalid = |j: usize| {
        a.data.iter().chain(&b.data).any(|row| row[j].is_none())
    };
    let (keep, drop): (Vec<usize>, Vec<usize>) = (0..a.n_cols()).partition(|&j| !invalid(j));
    let dropped: Vec<String> = drop.iter().map(|&j| a.columns[j].clone()).collect();
    if !dropped.is_empty() {
        log::info!("dropping feature columns with invalid values: {}", dropped.join(", "));
    }
    if keep.len() < 3 {
        return Err(Error::TooFewColumns {
            surviving: keep.len(),
        });
    }
    Ok((a.keep_columns(&keep), b.keep_columns(&keep), dropped))
}

/// Owner of a scaling or subspace model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Owner {
    Coco,
    Generated,
    Joint,
}

impl From<SetLabel> for Owner {
    fn from(l: SetLabel) -> Self {
        match l {
            SetLabel::Coco => Owner::Coco,
            SetLabel::Generated => Owner::Generated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub owner: Owner,
    pub columns: Vec<String>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl ScalingParams {
    pub fn is_constant(&self, j: usize) -> bool {
        self.max[j] == self.min[j]
    }
}

pub fn minmax_fit(m: &FeatureMatrix, owner: Owner) -> Result<ScalingParams> {
    let values = m.values()?;
    if values.is_empty() {
        return Err(Error::InvalidInput("cannot fit scaling on zero rows".into()));
    }
    let p = m.n_cols();
    let mut min = vec![f64::INFINITY; p];
    let mut max = vec![f64::NEG_INFINITY; p];
    for row in &values {
        for j in 0..p {
            min[j] = min[j].min(row[j]);
            max[j] = max[j].max(row[j]);
        }
    }
    Ok(ScalingParams {
        owner,
        columns: m.columns.clone(),
        min,
        max,
    })
}

/// `(v − min) / (max − min)`, constant columns mapped to 0.5, no clamping.
pub fn minmax_apply(m: &FeatureMatrix, params: &ScalingParams) -> Result<Vec<Vec<f64>>> {
    check_columns(&params.columns, &m.columns)?;
    let values = m.values()?;
    Ok(values
        .into_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    if params.is_constant(j) {
                        0.5
                    } else {
                        (v - params.min[j]) / (params.max[j] - params.min[j])
                    }
                })
                .collect()
        })
        .collect())
}

/// Thin SVD `A = U Σ Vᵀ` with nonincreasing `σ` and the sign convention applied.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// `n × r`, row-major rows.
    pub u: Vec<Vec<f64>>,
    pub sigma: Vec<f64>,
    /// `p × r`, row-major rows.
    pub v: Vec<Vec<f64>>,
}

/// Every right-singular vector has its largest-magnitude entry positive
/// (first such entry on ties); the matching left vector is flipped with it.
pub fn decompose(a: &[Vec<f64>]) -> Result<Decomposition> {
    let n = a.len();
    let p = a.first().map_or(0, Vec::len);
    if n == 0 || p == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let m = DMatrix::from_fn(n, p, |i, j| a[i][j]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("left vectors requested");
    let vt = svd.v_t.expect("right vectors requested");
    let r = svd.singular_values.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| {
        svd.singular_values[y]
            .total_cmp(&svd.singular_values[x])
            .then(x.cmp(&y))
    });
    let mut out = Decomposition {
        u: vec![vec![0.0; r]; n],
        sigma: order.iter().map(|&c| svd.singular_values[c]).collect(),
        v: vec![vec![0.0; r]; p],
    };
    for (dst, &c) in order.iter().enumerate() {
        let mut lead = 0;
        for j in 1..p {
            if vt[(c, j)].abs() > vt[(c, lead)].abs() {
                lead = j;
            }
        }
        let sign = if vt[(c, lead)] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..p {
            out.v[j][dst] = sign * vt[(c, j)];
        }
        for i in 0..n {
            out.u[i][dst] = sign * u[(i, c)];
        }
    }
    Ok(out)
}

/// Smallest `k` whose leading `σ²` hold at least `threshold` of the energy.
///
/// Evaluated as "the discarded tail is at most `1 − threshold`", which keeps
/// `threshold = 1` exact in floating point.
pub fn energy_rank(sigma: &[f64], threshold: f64) -> usize {
    let energy: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    let total: f64 = energy.iter().sum();
    let allowed = (1.0 - threshold) * total;
    let mut tail = vec![0.0; energy.len() + 1];
    for i in (0..energy.len()).rev() {
        tail[i] = tail[i + 1] + energy[i];
    }
    (1..=energy.len())
        .find(|&k| tail[k] <= allowed)
        .unwrap_or(energy.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdModel {
    pub owner: Owner,
    pub scaling: ScalingParams,
    pub k: usize,
    pub energy_threshold: f64,
    pub singular_values: Vec<f64>,
    /// `features × k`, row-major.
    pub basis: Vec<f64>,
}

impl SvdModel {
    pub fn columns(&self) -> &[String] {
        &self.scaling.columns
    }

    pub fn basis_at(&self, feature: usize, component: usize) -> f64 {
        self.basis[feature * self.k + component]
    }

    /// Largest deviation of `basisᵀ basis` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let p = self.columns().len();
        let mut worst = 0.0f64;
        for a in 0..self.k {
            for b in 0..self.k {
                let dot: f64 = (0..p).map(|j| self.basis_at(j, a) * self.basis_at(j, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Maps coordinates back to scaled feature space through `basisᵀ`.
    pub fn reconstruct(&self, coords: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let p = self.columns().len();
        coords
            .iter()
            .map(|c| {
                (0..p)
                    .map(|j| (0..self.k).map(|t| c[t] * self.basis_at(j, t)).sum())
                    .collect()
            })
            .collect()
    }
}

/// Fits min-max scaling and the truncated right-singular basis on `m`.
pub fn svd_fit(m: &FeatureMatrix, owner: Owner, energy_threshold: f64) -> Result<SvdModel> {
    if !(energy_threshold > 0.0 && energy_threshold <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "energy threshold {energy_threshold} outside (0, 1]"
        )));
    }
    if m.n_rows() < 2 {
        return Err(Error::InvalidInput(format!(
            "SVD needs at least 2 rows, got {}",
            m.n_rows()
        )));
    }
    let scaling = minmax_fit(m, owner)?;
    let scaled = minmax_apply(m, &scaling)?;
    let dec = decompose(&scaled)?;
    let sigma_max = dec.sigma.first().copied().unwrap_or(0.0);
    let frob: f64 = scaled.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    if sigma_max <= f64::EPSILON * frob.max(f64::MIN_POSITIVE) || sigma_max < 1e-300 {
        return Err(Error::ZeroMatrix);
    }
    let k = energy_rank(&dec.sigma, energy_threshold);
    let p = scaling.columns.len();
    let mut basis = Vec::with_capacity(p * k);
    for row in &dec.v {
        basis.extend_from_slice(&row[..k]);
    }
    Ok(SvdModel {
        owner,
        scaling,
        k,
        energy_threshold,
        singular_values: dec.sigma[..k].to_vec(),
        basis,
    })
}

/// Scales `m` with the model's parameters and right-multiplies by its basis.
pub fn project(m: &FeatureMatrix, model: &SvdModel) -> Result<Vec<Vec<f64>>> {
    let scaled = minmax_apply(m, &model.scaling)?;
    let p = model.columns().len();
    Ok(scaled
        .iter()
        .map(|row| {
            (0..model.k)
                .map(|t| (0..p).map(|j| row[j] * model.basis_at(j, t)).sum())
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProjectionMode {
    CocoIntoGenerated,
    GeneratedIntoCoco,
    Joint,
}

impl ProjectionMode {
    pub const ALL: [ProjectionMode; 3] = [
        ProjectionMode::CocoIntoGenerated,
        ProjectionMode::GeneratedIntoCoco,
        ProjectionMode::Joint,
    ];

    /// Short name used for flags and output directories.
    pub fn slug(self) -> &'static str {
        match self {
            ProjectionMode::CocoIntoGenerated => "coco-into-gen",
            ProjectionMode::GeneratedIntoCoco => "gen-into-coco",
            ProjectionMode::Joint => "joint",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ProjectionMode::CocoIntoGenerated => "COCO_INTO_GENERATED",
            ProjectionMode::GeneratedIntoCoco => "GENERATED_INTO_COCO",
            ProjectionMode::Joint => "JOINT",
        }
    }
}

impl fmt::Display for ProjectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for ProjectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProjectionMode::ALL
            .into_iter()
            .find(|m| m.slug() == s || m.label() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown projection mode {s:?}, expected coco-into-gen, gen-into-coco or joint"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedSet {
    pub mode: ProjectionMode,
    /// COCO rows first, then generated rows.
    pub row_ids: Vec<ProblemId>,
    pub coordinates: Vec<Vec<f64>>,
    pub model: SvdModel,
}

impl ProjectedSet {
    pub fn k(&self) -> usize {
        self.model.k
    }
}

pub fn run_projection(
    mode: ProjectionMode,
    coco: &FeatureMatrix,
    generated: &FeatureMatrix,
    energy_threshold: f64,
) -> Result<ProjectedSet> {
    let model = match mode {
        ProjectionMode::CocoIntoGenerated => svd_fit(generated, Owner::Generated, energy_threshold)?,
        ProjectionMode::GeneratedIntoCoco => svd_fit(coco, Owner::Coco, energy_threshold)?,
        ProjectionMode::Joint => svd_fit(&coco.concat(generated)?, Owner::Joint, energy_threshold)?,
    };
    let mut coordinates = project(coco, &model)?;
    coordinates.extend(project(generated, &model)?);
    let mut row_ids = coco.row_ids.clone();
    row_ids.extend_from_slice(&generated.row_ids);
    Ok(ProjectedSet {
        mode,
        row_ids,
        coordinates,
        model,
    })
}
