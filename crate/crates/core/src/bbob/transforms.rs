//! Coordinate transformations shared by the BBOB functions.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    dim: usize,
    data: Vec<f64>,
}

impl Rotation {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Rotation { dim, data }
    }

    /// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
    /// signs of `Q` fixed so that `R` has a positive diagonal.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let gauss = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
        let qr = gauss.qr();
        let (q, r) = (qr.q(), qr.r());
        let mut data = vec![0.0; dim * dim];
        for j in 0..dim {
            let sign = if r[(j, j)] < 0.0 { -1.0 } else { 1.0 };
            for i in 0..dim {
                data[i * dim + j] = sign * q[(i, j)];
            }
        }
        Rotation { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    /// `max |RᵀR − I|` over all entries.
    pub fn orthogonality_error(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| self.get(k, i) * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Diagonal entry `i` of the conditioning matrix `Λ^α`.
pub fn lambda(alpha: f64, i: usize, dim: usize) -> f64 {
    alpha.powf(0.5 * i as f64 / (dim - 1) as f64)
}

pub fn apply_lambda(alpha: f64, v: &mut [f64]) {
    let d = v.len();
    for (i, x) in v.iter_mut().enumerate() {
        *x *= lambda(alpha, i, d);
    }
}

/// Oscillation transform `T_osz` on one coordinate.
pub fn t_osz(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let xhat = x.abs().ln();
    let (c1, c2) = if x > 0.0 { (10.0, 7.9) } else { (5.5, 3.1) };
    x.signum() * (xhat + 0.049 * ((c1 * xhat).sin() + (c2 * xhat).sin())).exp()
}

pub fn t_osz_all(v: &mut [f64]) {
    v.iter_mut().for_each(|x| *x = t_osz(*x));
}

/// Asymmetry transform `T_asy^β`.
pub fn t_asy(beta: f64, v: &mut [f64]) {
    let d = v.len();
    for (i, x) in v.iter_mut().enumerate() {
        if *x > 0.0 {
            *x = x.powf(1.0 + beta * (i as f64 / (d - 1) as f64) * x.sqrt());
        }
    }
}

/// Boundary penalty `Σ max(0, |x_i| − 5)²`.
pub fn f_pen(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| {
            let over = v.abs() - 5.0;
            if over > 0.0 {
                over * over
            } else {
                0.0
            }
        })
        .sum()
}
