//! The 24 noiseless BBOB functions with seeded instance transforms.
//!
//! Instance `0` is reserved for the identity instance: zero shift wherever the
//! function formula allows it, identity rotations and `f_opt = 0`. Any other
//! instance seed draws the optimum location uniformly from `[-4, 4]^D`, two
//! Haar-random rotations and a clipped Cauchy-like `f_opt`.

mod functions;
mod transforms;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use transforms::{f_pen, t_asy, t_osz, Rotation};

use crate::error::{Error, Result};
use crate::problem::{BoxBounds, Payload, Problem, ProblemId, SetLabel};
use crate::rng::{self, tag};

pub const FUNCTION_COUNT: u32 = 24;

pub const FUNCTION_NAMES: [&str; 24] = [
    "sphere",
    "ellipsoidal",
    "rastrigin",
    "bueche-rastrigin",
    "linear-slope",
    "attractive-sector",
    "step-ellipsoidal",
    "rosenbrock",
    "rosenbrock-rotated",
    "ellipsoidal-rotated",
    "discus",
    "bent-cigar",
    "sharp-ridge",
    "different-powers",
    "rastrigin-rotated",
    "weierstrass",
    "schaffers-f7",
    "schaffers-f7-ill",
    "griewank-rosenbrock",
    "schwefel",
    "gallagher-101",
    "gallagher-21",
    "katsuura",
    "lunacek-bi-rastrigin",
];

/// Optimum coordinate magnitude of the Schwefel function in `x` units.
const SCHWEFEL_OPT: f64 = 4.209_687_463_3 / 2.0;
const LUNACEK_MU0: f64 = 2.5;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Peak {
    /// `R · y_i`
    pub center: Vec<f64>,
    pub weight: f64,
    /// Diagonal of `C_i`.
    pub scales: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BbobInstance {
    pub function_id: u32,
    pub dimension: usize,
    pub instance_seed: u64,
    /// Location of the optimum.
    pub shift: Vec<f64>,
    /// Seeds both rotation matrices; `0` means identity rotations.
    pub rotation_seed: u64,
    pub f_opt: f64,
    pub(crate) r: Rotation,
    pub(crate) q: Rotation,
    pub(crate) peaks: Vec<Peak>,
}

/// Reconstructible description of a BBOB problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BbobMeta {
    pub set_label: SetLabel,
    pub index: u64,
    pub function_id: u32,
    pub dimension: usize,
    pub instance_seed: u64,
    pub f_opt: f64,
    pub shift: Vec<f64>,
    pub rotation_seed: u64,
}

impl BbobInstance {
    pub fn new(function_id: u32, dimension: usize, instance_seed: u64) -> Result<Self> {
        if !(1..=FUNCTION_COUNT).contains(&function_id) {
            return Err(Error::FunctionIdOutOfRange(function_id));
        }
        if dimension < 2 {
            return Err(Error::InvalidInput(format!(
                "BBOB functions need dimension >= 2, got {dimension}"
            )));
        }
        let d = dimension;
        let identity = instance_seed == 0;
        let mut rng = rng::stream(&[
            tag::BBOB_INSTANCE,
            u64::from(function_id),
            d as u64,
            instance_seed,
        ]);

        let f_opt = if identity {
            0.0
        } else {
            let num: f64 = rng.sample(StandardNormal);
            let den: f64 = rng.sample(StandardNormal);
            ((100.0 * 100.0 * num / den).round() / 100.0).clamp(-1000.0, 1000.0)
        };

        let rotation_seed = if identity {
            0
        } else {
            rng::derive_seed(&[tag::BBOB_INSTANCE, u64::from(function_id), d as u64, instance_seed, 1])
        };
        let (r, q) = if identity {
            (Rotation::identity(d), Rotation::identity(d))
        } else {
            (
                Rotation::random(d, &mut rng::stream(&[rotation_seed, 1])),
                Rotation::random(d, &mut rng::stream(&[rotation_seed, 2])),
            )
        };

        let mut uniform = |lo: f64, hi: f64| -> Vec<f64> {
            if identity {
                vec![0.0; d]
            } else {
                (0..d).map(|_| rng.random_range(lo..hi)).collect()
            }
        };
        let random_signs = |rng: &mut rng::Stream| -> Vec<f64> {
            (0..d)
                .map(|_| if identity || rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect()
        };

        let mut peaks = Vec::new();
        let shift = match function_id {
            4 => {
                let mut s = uniform(-4.0, 4.0);
                for v in s.iter_mut().step_by(2) {
                    *v = v.abs();
                }
                s
            }
            5 => random_signs(&mut rng).into_iter().map(|s| 5.0 * s).collect(),
            8 => uniform(-3.0, 3.0),
            9 | 19 => {
                let c = rosenbrock_scale(d);
                r.apply_transpose(&vec![0.5 / c; d])
            }
            20 => random_signs(&mut rng).into_iter().map(|s| SCHWEFEL_OPT * s).collect(),
            21 | 22 => {
                let (count, alpha_top, y1_range, y_range) = if function_id == 21 {
                    (101usize, 1000.0f64, 4.0, 5.0)
                } else {
                    (21usize, 1000.0f64 * 1000.0, 3.92, 4.9)
                };
                let mut peak_rng =
                    rng::stream(&[tag::BBOB_INSTANCE, u64::from(function_id), d as u64, instance_seed, 2]);
                peaks = gallagher_peaks(count, alpha_top, y_range, d, &r, &mut peak_rng);
                let y1 = if identity {
                    vec![0.0; d]
                } else {
                    (0..d).map(|_| peak_rng.random_range(-y1_range..y1_range)).collect()
                };
                peaks[0].center = r.apply(&y1);
                y1
            }
            24 => random_signs(&mut rng)
                .into_iter()
                .map(|s| 0.5 * LUNACEK_MU0 * s)
                .collect(),
            _ => uniform(-4.0, 4.0),
        };

        Ok(BbobInstance {
            function_id,
            dimension: d,
            instance_seed,
            shift,
            rotation_seed,
            f_opt,
            r,
            q,
            peaks,
        })
    }

    pub fn name(&self) -> &'static str {
        FUNCTION_NAMES[self.function_id as usize - 1]
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        functions::evaluate(self, x)
    }

    pub fn rotations(&self) -> (&Rotation, &Rotation) {
        (&self.r, &self.q)
    }

    pub fn meta(&self) -> BbobMeta {
        BbobMeta {
            set_label: SetLabel::Coco,
            index: u64::from(self.function_id),
            function_id: self.function_id,
            dimension: self.dimension,
            instance_seed: self.instance_seed,
            f_opt: self.f_opt,
            shift: self.shift.clone(),
            rotation_seed: self.rotation_seed,
        }
    }
}

impl BbobMeta {
    pub fn instantiate(&self) -> Result<Problem> {
        make_bbob(self.function_id, self.dimension, self.instance_seed)
    }
}

fn rosenbrock_scale(d: usize) -> f64 {
    (d as f64).sqrt().max(8.0) / 8.0
}

fn gallagher_peaks<R: Rng>(
    count: usize,
    alpha_top: f64,
    y_range: f64,
    d: usize,
    r: &Rotation,
    rng: &mut R,
) -> Vec<Peak> {
    let others = count - 1;
    // conditioning levels 1000^(2j / (count - 2)), shuffled over peaks 2..count
    let mut alphas: Vec<f64> = (0..others)
        .map(|j| 1000f64.powf(2.0 * j as f64 / (others - 1) as f64))
        .collect();
    shuffle(&mut alphas, rng);

    let mut peaks = Vec::with_capacity(count);
    for i in 0..count {
        let (alpha, weight) = if i == 0 {
            (alpha_top, 10.0)
        } else {
            (alphas[i - 1], 1.1 + 8.0 * (i - 1) as f64 / (others - 1) as f64)
        };
        let mut order: Vec<usize> = (0..d).collect();
        shuffle(&mut order, rng);
        let norm = alpha.powf(0.25);
        let scales = order
            .iter()
            .map(|&k| transforms::lambda(alpha, k, d) / norm)
            .collect();
        let y: Vec<f64> = (0..d).map(|_| rng.random_range(-y_range..y_range)).collect();
        peaks.push(Peak {
            center: r.apply(&y),
            weight,
            scales,
        });
    }
    peaks
}

fn shuffle<T, R: Rng>(v: &mut [T], rng: &mut R) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
}

/// Builds BBOB function `function_id` in `dimension` dimensions.
pub fn make_bbob(function_id: u32, dimension: usize, instance_seed: u64) -> Result<Problem> {
    let inst = BbobInstance::new(function_id, dimension, instance_seed)?;
    Ok(Problem {
        id: ProblemId::coco(function_id),
        bounds: BoxBounds::domain(dimension),
        payload: Payload::Bbob(inst),
    })
}

/// All 24 functions, ids in order, sharing one instance seed.
pub fn bbob_suite(dimension: usize, instance_seed: u64) -> Result<Vec<Problem>> {
    (1..=FUNCTION_COUNT)
        .map(|fid| make_bbob(fid, dimension, instance_seed))
        .collect()
}
