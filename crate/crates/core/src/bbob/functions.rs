use std::f64::consts::PI;

use super::transforms::{apply_lambda, f_pen, lambda, t_asy, t_osz, t_osz_all};
use super::{rosenbrock_scale, BbobInstance, LUNACEK_MU0};

pub(super) fn evaluate(inst: &BbobInstance, x: &[f64]) -> f64 {
    let raw = match inst.function_id {
        1 => sphere(inst, x),
        2 => ellipsoidal(inst, x),
        3 => rastrigin(inst, x),
        4 => bueche_rastrigin(inst, x),
        5 => linear_slope(inst, x),
        6 => attractive_sector(inst, x),
        7 => step_ellipsoidal(inst, x),
        8 => rosenbrock(inst, x),
        9 => rosenbrock_rotated(inst, x),
        10 => ellipsoidal_rotated(inst, x),
        11 => discus(inst, x),
        12 => bent_cigar(inst, x),
        13 => sharp_ridge(inst, x),
        14 => different_powers(inst, x),
        15 => rastrigin_rotated(inst, x),
        16 => weierstrass(inst, x),
        17 => schaffers(inst, x, 10.0),
        18 => schaffers(inst, x, 1000.0),
        19 => griewank_rosenbrock(inst, x),
        20 => schwefel(inst, x),
        21 | 22 => gallagher(inst, x),
        23 => katsuura(inst, x),
        24 => lunacek(inst, x),
        _ => unreachable!("function id validated at construction"),
    };
    raw + inst.f_opt
}

fn shifted(inst: &BbobInstance, x: &[f64]) -> Vec<f64> {
    x.iter().zip(&inst.shift).map(|(a, b)| a - b).collect()
}

fn rotated_shift(inst: &BbobInstance, x: &[f64]) -> Vec<f64> {
    inst.r.apply(&shifted(inst, x))
}

/// `10^(exponent · i / (D − 1))` weights.
fn power_weight(exponent: f64, i: usize, d: usize) -> f64 {
    10f64.powf(exponent * i as f64 / (d - 1) as f64)
}

fn rastrigin_core(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let cos_sum: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
    10.0 * (d - cos_sum) + z.iter().map(|v| v * v).sum::<f64>()
}

fn rosenbrock_core(z: &[f64]) -> f64 {
    z.windows(2)
        .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

fn sphere(inst: &BbobInstance, x: &[f64]) -> f64 {
    shifted(inst, x).iter().map(|v| v * v).sum()
}

fn ellipsoidal(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = shifted(inst, x);
    t_osz_all(&mut z);
    let d = z.len();
    z.iter()
        .enumerate()
        .map(|(i, v)| power_weight(6.0, i, d) * v * v)
        .sum()
}

fn rastrigin(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = shifted(inst, x);
    t_osz_all(&mut z);
    t_asy(0.2, &mut z);
    apply_lambda(10.0, &mut z);
    rastrigin_core(&z)
}

fn bueche_rastrigin(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len();
    let mut z = shifted(inst, x);
    t_osz_all(&mut z);
    for (i, v) in z.iter_mut().enumerate() {
        let mut s = lambda(10.0, i, d);
        if *v > 0.0 && i % 2 == 0 {
            s *= 10.0;
        }
        *v *= s;
    }
    rastrigin_core(&z) + 100.0 * f_pen(x)
}

fn linear_slope(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .zip(&inst.shift)
        .enumerate()
        .map(|(i, (&xi, &opt))| {
            let z = if opt * xi < 25.0 { xi } else { opt };
            let s = opt.signum() * power_weight(1.0, i, d);
            5.0 * s.abs() - s * z
        })
        .sum()
}

fn attractive_sector(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = rotated_shift(inst, x);
    apply_lambda(10.0, &mut z);
    let z = inst.q.apply(&z);
    let sum: f64 = z
        .iter()
        .zip(&inst.shift)
        .map(|(v, opt)| {
            let s = if v * opt > 0.0 { 100.0 } else { 1.0 };
            (s * v).powi(2)
        })
        .sum();
    t_osz(sum).powf(0.9)
}

fn step_ellipsoidal(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len();
    let mut zhat = rotated_shift(inst, x);
    apply_lambda(10.0, &mut zhat);
    let ztilde: Vec<f64> = zhat
        .iter()
        .map(|&v| {
            if v.abs() > 0.5 {
                (0.5 + v).floor()
            } else {
                (0.5 + 10.0 * v).floor() / 10.0
            }
        })
        .collect();
    let z = inst.q.apply(&ztilde);
    let weighted: f64 = z
        .iter()
        .enumerate()
        .map(|(i, v)| power_weight(2.0, i, d) * v * v)
        .sum();
    0.1 * (zhat[0].abs() / 1e4).max(weighted) + f_pen(x)
}

fn rosenbrock(inst: &BbobInstance, x: &[f64]) -> f64 {
    let c = rosenbrock_scale(x.len());
    let z: Vec<f64> = shifted(inst, x).iter().map(|v| c * v + 1.0).collect();
    rosenbrock_core(&z)
}

fn rosenbrock_rotated(inst: &BbobInstance, x: &[f64]) -> f64 {
    let c = rosenbrock_scale(x.len());
    let z: Vec<f64> = inst.r.apply(x).iter().map(|v| c * v + 0.5).collect();
    rosenbrock_core(&z)
}

fn ellipsoidal_rotated(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = rotated_shift(inst, x);
    t_osz_all(&mut z);
    let d = z.len();
    z.iter()
        .enumerate()
        .map(|(i, v)| power_weight(6.0, i, d) * v * v)
        .sum()
}

fn discus(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = rotated_shift(inst, x);
    t_osz_all(&mut z);
    1e6 * z[0] * z[0] + z[1..].iter().map(|v| v * v).sum::<f64>()
}

fn bent_cigar(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = rotated_shift(inst, x);
    t_asy(0.5, &mut z);
    let z = inst.r.apply(&z);
    z[0] * z[0] + 1e6 * z[1..].iter().map(|v| v * v).sum::<f64>()
}

fn sharp_ridge(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = rotated_shift(inst, x);
    apply_lambda(10.0, &mut z);
    let z = inst.q.apply(&z);
    z[0] * z[0] + 100.0 * z[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn different_powers(inst: &BbobInstance, x: &[f64]) -> f64 {
    let z = rotated_shift(inst, x);
    let d = z.len();
    z.iter()
        .enumerate()
        .map(|(i, v)| v.abs().powf(2.0 + 4.0 * i as f64 / (d - 1) as f64))
        .sum::<f64>()
        .sqrt()
}

fn rastrigin_rotated(inst: &BbobInstance, x: &[f64]) -> f64 {
    let mut z = rotated_shift(inst, x);
    t_osz_all(&mut z);
    t_asy(0.2, &mut z);
    let mut z = inst.q.apply(&z);
    apply_lambda(10.0, &mut z);
    let z = inst.r.apply(&z);
    rastrigin_core(&z)
}

fn weierstrass(inst: &BbobInstance, x: &[f64]) -> f64 {
    const TERMS: i32 = 12;
    let d = x.len() as f64;
    let mut z = rotated_shift(inst, x);
    t_osz_all(&mut z);
    let mut z = inst.q.apply(&z);
    apply_lambda(0.01, &mut z);
    let z = inst.r.apply(&z);
    let f0: f64 = (0..TERMS)
        .map(|k| 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * 0.5).cos())
        .sum();
    let total: f64 = z
        .iter()
        .map(|v| {
            (0..TERMS)
                .map(|k| 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * (v + 0.5)).cos())
                .sum::<f64>()
        })
        .sum();
    10.0 * (total / d - f0).powi(3) + 10.0 / d * f_pen(x)
}

fn schaffers(inst: &BbobInstance, x: &[f64], conditioning: f64) -> f64 {
    let mut z = rotated_shift(inst, x);
    t_asy(0.5, &mut z);
    let mut z = inst.q.apply(&z);
    apply_lambda(conditioning, &mut z);
    let d = z.len();
    let mean: f64 = z
        .windows(2)
        .map(|w| {
            let s = (w[0] * w[0] + w[1] * w[1]).sqrt();
            let root = s.sqrt();
            root + root * (50.0 * s.powf(0.2)).sin().powi(2)
        })
        .sum::<f64>()
        / (d - 1) as f64;
    mean * mean + 10.0 * f_pen(x)
}

fn griewank_rosenbrock(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len();
    let c = rosenbrock_scale(d);
    let z: Vec<f64> = inst.r.apply(x).iter().map(|v| c * v + 0.5).collect();
    let sum: f64 = z
        .windows(2)
        .map(|w| {
            let s = 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2);
            s / 4000.0 - s.cos()
        })
        .sum();
    10.0 / (d - 1) as f64 * sum + 10.0
}

fn schwefel(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len();
    // x̂ = 2 · sign(x_opt) ⊗ x
    let xhat: Vec<f64> = x
        .iter()
        .zip(&inst.shift)
        .map(|(v, opt)| 2.0 * opt.signum() * v)
        .collect();
    let two_abs_opt: Vec<f64> = inst.shift.iter().map(|v| 2.0 * v.abs()).collect();
    let mut zhat = xhat.clone();
    for i in 1..d {
        zhat[i] += 0.25 * (xhat[i - 1] - two_abs_opt[i - 1]);
    }
    let mut diff: Vec<f64> = zhat.iter().zip(&two_abs_opt).map(|(a, b)| a - b).collect();
    apply_lambda(10.0, &mut diff);
    let z: Vec<f64> = diff
        .iter()
        .zip(&two_abs_opt)
        .map(|(a, b)| 100.0 * (a + b))
        .collect();
    let scaled: Vec<f64> = z.iter().map(|v| v / 100.0).collect();
    let sum: f64 = z.iter().map(|v| v * v.abs().sqrt().sin()).sum();
    -sum / (100.0 * d as f64) + 4.189_828_872_724_339 + 100.0 * f_pen(&scaled)
}

fn gallagher(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let rx = inst.r.apply(x);
    let best = inst
        .peaks
        .iter()
        .map(|peak| {
            let quad: f64 = rx
                .iter()
                .zip(&peak.center)
                .zip(&peak.scales)
                .map(|((a, b), c)| c * (a - b) * (a - b))
                .sum();
            peak.weight * (-quad / (2.0 * d)).exp()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    t_osz(10.0 - best).powi(2) + f_pen(x)
}

fn katsuura(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let mut z = rotated_shift(inst, x);
    apply_lambda(100.0, &mut z);
    let z = inst.q.apply(&z);
    let exponent = 10.0 / d.powf(1.2);
    let product: f64 = z
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let inner: f64 = (1..=32)
                .map(|j| {
                    let p = 2f64.powi(j);
                    (p * v - (p * v).round()).abs() / p
                })
                .sum();
            (1.0 + (i + 1) as f64 * inner).powf(exponent)
        })
        .product();
    10.0 / (d * d) * product - 10.0 / (d * d) + f_pen(x)
}

fn lunacek(inst: &BbobInstance, x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let mu0 = LUNACEK_MU0;
    let s = 1.0 - 1.0 / (2.0 * (d + 20.0).sqrt() - 8.2);
    let mu1 = -((mu0 * mu0 - 1.0) / s).sqrt();
    let xhat: Vec<f64> = x
        .iter()
        .zip(&inst.shift)
        .map(|(v, opt)| 2.0 * opt.signum() * v)
        .collect();
    let centered: Vec<f64> = xhat.iter().map(|v| v - mu0).collect();
    let mut z = inst.r.apply(&centered);
    apply_lambda(100.0, &mut z);
    let z = inst.q.apply(&z);
    let first: f64 = centered.iter().map(|v| v * v).sum();
    let second: f64 = d + s * xhat.iter().map(|v| (v - mu1).powi(2)).sum::<f64>();
    let cos_sum: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
    first.min(second) + 10.0 * (d - cos_sum) + 1e4 * f_pen(x)
}
