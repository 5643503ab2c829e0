//! Brute-force reference implementations of the 37 landscape features.
//!
//! Written straight from the feature definitions with no shared code beyond
//! the seeded stream that picks the tour start.

use std::collections::HashMap;

use elacomp::rng::{self, tag};
use elacomp::sampling::SampleSet;
use rand::Rng;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        s += (a[k] - b[k]).powi(2);
    }
    s.sqrt()
}

fn avg(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in v {
        s += x;
    }
    s / v.len() as f64
}

fn sample_sd(v: &[f64]) -> f64 {
    let m = avg(v);
    let mut s = 0.0;
    for x in v {
        s += (x - m).powi(2);
    }
    (s / (v.len() - 1) as f64).sqrt()
}

fn constant(v: &[f64]) -> bool {
    v.iter().all(|x| *x == v[0])
}

fn corr(a: &[f64], b: &[f64]) -> Option<f64> {
    if constant(a) || constant(b) {
        return None;
    }
    let (ma, mb) = (avg(a), avg(b));
    let n = a.len();
    let cov: f64 = (0..n).map(|i| (a[i] - ma) * (b[i] - mb)).sum();
    let va: f64 = (0..n).map(|i| (a[i] - ma).powi(2)).sum();
    let vb: f64 = (0..n).map(|i| (b[i] - mb).powi(2)).sum();
    Some(cov / (va.sqrt() * vb.sqrt()))
}

fn sorted_median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

// ---------------------------------------------------------------- distr

fn type7(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let below = pos.floor();
    let frac = pos - below;
    let i = below as usize;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

fn n_peaks(y: &[f64]) -> f64 {
    let n = y.len();
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let s = sample_sd(y);
    let iqr = type7(&sorted, 0.75) - type7(&sorted, 0.25);
    let mut spread = if s < iqr / 1.34 { s } else { iqr / 1.34 };
    if spread <= 0.0 {
        spread = if s > 0.0 { s } else if sorted[0] != 0.0 { sorted[0].abs() } else { 1.0 };
    }
    let h = 0.9 * spread / (n as f64).powf(0.2);
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    let grid = 512;
    let mut dens = vec![0.0; grid];
    for (k, d) in dens.iter_mut().enumerate() {
        let g = lo + (hi - lo) * k as f64 / (grid - 1) as f64;
        for v in y {
            let u = (g - v) / h;
            *d += (-u * u / 2.0).exp() / (h * (2.0 * std::f64::consts::PI).sqrt());
        }
        *d /= n as f64;
    }
    let total: f64 = dens.iter().sum();
    // a region ends right before a grid point where a strict descent turns
    // into a non-descent
    let mut count = 0;
    let mut mass = dens[0];
    for k in 1..grid {
        let is_min = k < grid - 1 && dens[k] < dens[k - 1] && dens[k + 1] >= dens[k];
        if is_min {
            if mass / total > 0.01 {
                count += 1;
            }
            mass = 0.0;
        }
        mass += dens[k];
    }
    if mass / total > 0.01 {
        count += 1;
    }
    count as f64
}

pub fn distr(s: &SampleSet) -> Vec<Option<f64>> {
    let y = &s.y;
    if constant(y) {
        return vec![None, None, Some(1.0)];
    }
    let n = y.len() as f64;
    let m = avg(y);
    let m2 = y.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m3 = y.iter().map(|v| (v - m).powi(3)).sum::<f64>() / n;
    let m4 = y.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    vec![
        Some(m3 / m2.sqrt().powi(3)),
        Some(m4 / m2.powi(2) - 3.0),
        Some(n_peaks(y)),
    ]
}

// ---------------------------------------------------------------- meta

/// Normal equations solved by Gauss-Jordan elimination with partial pivoting.
fn ols(design: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let p = design[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, yi) in design.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * yi;
        }
    }
    let scale = (0..p).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-10 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..p {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=p {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let beta: Vec<f64> = (0..p).map(|i| a[i][p] / a[i][i]).collect();
    let m = avg(y);
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (row, yi) in design.iter().zip(y) {
        let fit: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
        ss_res += (yi - fit).powi(2);
        ss_tot += (yi - m).powi(2);
    }
    Some((beta, 1.0 - ss_res / ss_tot))
}

/// `|β|` for the chosen slopes, with anything below `1e-8` of the model's
/// largest slope counted as zero.
fn zeroed(slopes: &[f64], pick: std::ops::Range<usize>) -> Vec<f64> {
    let mut big = 0.0f64;
    for b in slopes {
        big = big.max(b.abs());
    }
    slopes[pick]
        .iter()
        .map(|b| if b.abs() <= 1e-8 * big { 0.0 } else { b.abs() })
        .collect()
}

pub fn meta(s: &SampleSet) -> Vec<Option<f64>> {
    let mut out = vec![None; 6];
    if constant(&s.y) {
        return out;
    }
    let n = s.y.len() as f64;
    let d = s.x[0].len();
    let lin: Vec<Vec<f64>> = s
        .x
        .iter()
        .map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect())
        .collect();
    if let Some((beta, r2)) = ols(&lin, &s.y) {
        let abs = zeroed(&beta[1..], 0..d);
        let lo = abs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = abs.iter().copied().fold(0.0, f64::max);
        out[0] = Some(1.0 - (1.0 - r2) * (n - 1.0) / (n - d as f64 - 1.0));
        out[1] = Some(lo);
        out[2] = Some(hi);
        out[3] = if lo > 0.0 { Some(hi / lo) } else { None };
    }
    let quad: Vec<Vec<f64>> = s
        .x
        .iter()
        .map(|r| {
            std::iter::once(1.0)
                .chain(r.iter().copied())
                .chain(r.iter().map(|v| v * v))
                .collect()
        })
        .collect();
    if let Some((beta, r2)) = ols(&quad, &s.y) {
        let abs = zeroed(&beta[1..], d..2 * d);
        let lo = abs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = abs.iter().copied().fold(0.0, f64::max);
        out[4] = Some(1.0 - (1.0 - r2) * (n - 1.0) / (n - 2.0 * d as f64 - 1.0));
        out[5] = if lo > 0.0 { Some(hi / lo) } else { None };
    }
    out
}

// ---------------------------------------------------------------- disp

pub fn disp(s: &SampleSet) -> Vec<Option<f64>> {
    let n = s.y.len();
    let mut ranked: Vec<(f64, usize)> = s.y.iter().copied().zip(0..n).collect();
    ranked.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dists_of = |idx: &[usize]| -> Vec<f64> {
        let mut v = Vec::new();
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                v.push(dist(&s.x[idx[a]], &s.x[idx[b]]));
            }
        }
        v
    };
    let everyone: Vec<usize> = (0..n).collect();
    let all = dists_of(&everyone);
    let (mean_all, med_all) = (avg(&all), sorted_median(all.clone()));
    let mut out = vec![None; 16];
    for (q, pct) in [2usize, 5, 10, 25].iter().enumerate() {
        let mut size = pct * n / 100;
        if size * 100 < pct * n {
            size += 1;
        }
        if size < 2 {
            continue;
        }
        let best: Vec<usize> = ranked[..size].iter().map(|r| r.1).collect();
        let sub = dists_of(&best);
        let (mean_b, med_b) = (avg(&sub), sorted_median(sub));
        out[q] = if mean_all > 0.0 { Some(mean_b / mean_all) } else { None };
        out[4 + q] = if med_all > 0.0 { Some(med_b / med_all) } else { None };
        out[8 + q] = Some(mean_b - mean_all);
        out[12 + q] = Some(med_b - med_all);
    }
    out
}

// ---------------------------------------------------------------- ic

pub fn eps_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    for k in 0..1000 {
        g.push(10f64.powf(-5.0 + 20.0 * k as f64 / 999.0));
    }
    g
}

pub fn tour(s: &SampleSet, seed: u64) -> Vec<usize> {
    let n = s.y.len();
    let rank = rng::stream(&[tag::TOUR, seed]).random_range(0..n);
    let mut ranked: Vec<(f64, usize)> = s.y.iter().copied().zip(0..n).collect();
    ranked.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut order = vec![ranked[rank].1];
    let mut left: Vec<usize> = (0..n).filter(|&i| i != order[0]).collect();
    while !left.is_empty() {
        let cur = *order.last().unwrap();
        let mut pick = 0;
        for k in 1..left.len() {
            if dist(&s.x[cur], &s.x[left[k]]) < dist(&s.x[cur], &s.x[left[pick]]) {
                pick = k;
            }
        }
        order.push(left.remove(pick));
    }
    order
}

pub fn slopes(s: &SampleSet, seed: u64) -> Vec<f64> {
    let t = tour(s, seed);
    let mut out = Vec::new();
    for w in t.windows(2) {
        let d = dist(&s.x[w[0]], &s.x[w[1]]);
        if d != 0.0 {
            out.push((s.y[w[1]] - s.y[w[0]]) / d);
        }
    }
    out
}

/// `H(ε)` recounted from the explicit symbol string.
pub fn entropy(slopes: &[f64], eps: f64) -> f64 {
    let symbols: Vec<i8> = slopes
        .iter()
        .map(|&v| if v > eps { 1 } else if v < -eps { -1 } else { 0 })
        .collect();
    let mut counts: HashMap<(i8, i8), usize> = HashMap::new();
    for w in symbols.windows(2) {
        if w[0] != w[1] {
            *counts.entry((w[0], w[1])).or_default() += 1;
        }
    }
    let pairs = (symbols.len() - 1) as f64;
    let mut keys: Vec<_> = counts.keys().copied().collect();
    keys.sort();
    keys.iter()
        .map(|k| {
            let p = counts[k] as f64 / pairs;
            -p * p.log(6.0)
        })
        .sum()
}

fn modality(slopes: &[f64], eps: f64) -> f64 {
    let mut compressed: Vec<i8> = Vec::new();
    for &v in slopes {
        let sym = if v > eps { 1 } else if v < -eps { -1 } else { 0 };
        if sym != 0 && compressed.last() != Some(&sym) {
            compressed.push(sym);
        }
    }
    compressed.len() as f64 / slopes.len() as f64
}

pub fn ic(s: &SampleSet, seed: u64) -> Vec<Option<f64>> {
    let sl = slopes(s, seed);
    if sl.len() < 2 {
        return vec![None; 4];
    }
    let grid = eps_grid();
    let curve: Vec<f64> = grid.iter().map(|&e| entropy(&sl, e)).collect();
    let mut arg = 0;
    for k in 1..curve.len() {
        if curve[k] > curve[arg] {
            arg = k;
        }
    }
    let settled = (1..grid.len()).find(|&k| curve[k] < 0.05);
    vec![
        Some(curve[arg]),
        settled.map(|k| grid[k].log10()),
        Some(modality(&sl, 0.0)),
        Some(grid[arg]),
    ]
}

// ---------------------------------------------------------------- nbc

pub fn nbc(s: &SampleSet) -> Vec<Option<f64>> {
    let n = s.y.len();
    if constant(&s.y) {
        return vec![None; 4];
    }
    let mut nn = Vec::new();
    let mut nb = Vec::new();
    let mut indeg = vec![0.0; n];
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let dmin = others
            .iter()
            .map(|&j| dist(&s.x[i], &s.x[j]))
            .fold(f64::INFINITY, f64::min);
        nn.push(dmin);
        let better: Vec<usize> = others.iter().copied().filter(|&j| s.y[j] < s.y[i]).collect();
        if better.is_empty() {
            let dmax = others
                .iter()
                .map(|&j| dist(&s.x[i], &s.x[j]))
                .fold(0.0, f64::max);
            nb.push(dmax);
        } else {
            let mut pick = better[0];
            for &j in &better[1..] {
                if dist(&s.x[i], &s.x[j]) < dist(&s.x[i], &s.x[pick]) {
                    pick = j;
                }
            }
            nb.push(dist(&s.x[i], &s.x[pick]));
            indeg[pick] += 1.0;
        }
    }
    let sd_nb = sample_sd(&nb);
    vec![
        Some(avg(&nn) / avg(&nb)),
        if sd_nb > 0.0 { Some(sample_sd(&nn) / sd_nb) } else { None },
        corr(&nn, &nb),
        corr(&s.y, &indeg),
    ]
}

// ---------------------------------------------------------------- pca

/// Cyclic Jacobi eigenvalues of a symmetric matrix.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let p = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..p)
            .flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for i in 0..p {
            for j in i + 1..p {
                if a[i][j].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[j][j] - a[i][i]) / (2.0 * a[i][j]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..p {
                    let (aki, akj) = (a[k][i], a[k][j]);
                    a[k][i] = c * aki - s * akj;
                    a[k][j] = s * aki + c * akj;
                }
                for k in 0..p {
                    let (aik, ajk) = (a[i][k], a[j][k]);
                    a[i][k] = c * aik - s * ajk;
                    a[j][k] = s * aik + c * ajk;
                }
            }
        }
    }
    (0..p).map(|i| a[i][i]).collect()
}

fn pca_pair(rows: &[Vec<f64>]) -> Option<(f64, f64)> {
    let n = rows.len();
    let p = rows[0].len();
    let means: Vec<f64> = (0..p).map(|j| avg(&rows.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    let mut cov = vec![vec![0.0; p]; p];
    for a in 0..p {
        for b in 0..p {
            cov[a][b] = rows.iter().map(|r| (r[a] - means[a]) * (r[b] - means[b])).sum::<f64>()
                / (n - 1) as f64;
        }
    }
    let mut eig: Vec<f64> = jacobi_eigenvalues(cov).into_iter().map(|v| v.max(0.0)).collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let total: f64 = eig.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut k = 0;
    let mut acc = 0.0;
    while acc / total < 0.9 {
        acc += eig[k];
        k += 1;
    }
    Some((k as f64 / p as f64, eig[0] / total))
}

pub fn pca(s: &SampleSet) -> Vec<Option<f64>> {
    let joined: Vec<Vec<f64>> = s
        .x
        .iter()
        .zip(&s.y)
        .map(|(r, y)| r.iter().copied().chain([*y]).collect())
        .collect();
    let x = pca_pair(&s.x);
    let init = pca_pair(&joined);
    vec![x.map(|v| v.0), init.map(|v| v.0), x.map(|v| v.1), init.map(|v| v.1)]
}

/// All 37 features in catalogue order.
pub fn all(s: &SampleSet, seed: u64) -> Vec<Option<f64>> {
    let mut out = distr(s);
    out.extend(meta(s));
    out.extend(disp(s));
    out.extend(ic(s, seed));
    out.extend(nbc(s));
    out.extend(pca(s));
    out.into_iter().map(|v| v.filter(|x| x.is_finite())).collect()
}
