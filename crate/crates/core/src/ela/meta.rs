//! Linear and quadratic meta-model features.

use nalgebra::{DMatrix, DVector};

use super::stats;
use crate::sampling::SampleSet;

/// Result of an ordinary least-squares fit with an intercept.
#[derive(Debug, Clone)]
pub struct Fit {
    /// Intercept first, then one coefficient per design column.
    pub coefficients: Vec<f64>,
    pub r2: f64,
}

/// Fits `y ~ 1 + columns`. Returns `None` for a rank-deficient design.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Option<Fit> {
    let n = y.len();
    let p = columns.len() + 1;
    if n < p {
        return None;
    }
    let a = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { columns[j - 1][i] });
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let tol = sigma_max * f64::EPSILON * n.max(p) as f64;
    if svd.singular_values.iter().any(|&s| s <= tol) {
        return None;
    }
    let coef = svd.solve(&b, tol).ok()?;
    let fitted = &a * &coef;
    let mean = stats::mean(y);
    let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let ss_res: f64 = y.iter().zip(fitted.iter()).map(|(v, f)| (v - f) * (v - f)).sum();
    Some(Fit {
        coefficients: coef.iter().copied().collect(),
        r2: 1.0 - ss_res / ss_tot,
    })
}

fn adjusted(r2: f64, n: usize, predictors: usize) -> Option<f64> {
    let dof = n as f64 - predictors as f64 - 1.0;
    (dof > 0.0).then(|| 1.0 - (1.0 - r2) * (n as f64 - 1.0) / dof)
}

/// Coefficients at round-off level relative to the largest slope of the
/// same model are treated as exact zeros.
const COEF_ZERO: f64 = 1e-8;

/// Smallest and largest `|coef|` over `pick`, after zeroing round-off.
fn abs_extremes(slopes: &[f64], pick: std::ops::Range<usize>) -> (f64, f64) {
    let scale = slopes.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    slopes[pick].iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), c| {
        let a = if c.abs() <= COEF_ZERO * scale { 0.0 } else { c.abs() };
        (lo.min(a), hi.max(a))
    })
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

/// `[lin_adj_r2, lin_coef_min, lin_coef_max, lin_coef_ratio, quad_adj_r2, quad_cond]`
///
/// A constant `y` makes every fit uninformative, so all six are invalid then.
pub fn feat_meta(s: &SampleSet) -> [Option<f64>; 6] {
    let mut out = [None; 6];
    let (n, d) = (s.n(), s.dimension());
    if n < 2 || stats::all_equal(&s.y) {
        return out;
    }
    let linear: Vec<Vec<f64>> = (0..d).map(|j| s.x.iter().map(|r| r[j]).collect()).collect();
    if let Some(fit) = least_squares(&linear, &s.y) {
        let (lo, hi) = abs_extremes(&fit.coefficients[1..], 0..d);
        out[0] = adjusted(fit.r2, n, d);
        out[1] = Some(lo);
        out[2] = Some(hi);
        out[3] = ratio(hi, lo);
    }
    let mut quadratic = linear.clone();
    quadratic.extend(linear.iter().map(|c| c.iter().map(|v| v * v).collect::<Vec<_>>()));
    if let Some(fit) = least_squares(&quadratic, &s.y) {
        let (lo, hi) = abs_extremes(&fit.coefficients[1..], d..2 * d);
        out[4] = adjusted(fit.r2, n, 2 * d);
        out[5] = ratio(hi, lo);
    }
    out
}
