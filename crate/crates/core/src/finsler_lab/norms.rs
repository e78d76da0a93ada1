//! Minkowski norms on `ℝⁿ`.

use nalgebra::DMatrix;

use super::fd::norm;

pub trait MinkowskiNorm: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, y: &[f64]) -> f64;
}

pub struct Euclidean(pub usize);

impl MinkowskiNorm for Euclidean {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&self, y: &[f64]) -> f64 {
        norm(y)
    }
}

/// `√(yᵀ A y)` for a positive definite `A`.
pub struct Quadratic(pub DMatrix<f64>);

impl Quadratic {
    pub fn diagonal(d: &[f64]) -> Quadratic {
        Quadratic(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }
}

pub fn quad_form(a: &DMatrix<f64>, y: &[f64]) -> f64 {
    let n = y.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * y[i] * y[j];
        }
    }
    s
}

impl MinkowskiNorm for Quadratic {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn eval(&self, y: &[f64]) -> f64 {
        quad_form(&self.0, y).sqrt()
    }
}

/// `(Σ |y_i|^p)^{1/p}`.
pub struct Lp {
    pub p: f64,
    pub n: usize,
}

impl MinkowskiNorm for Lp {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, y: &[f64]) -> f64 {
        y.iter().map(|x| x.abs().powf(self.p)).sum::<f64>().powf(1.0 / self.p)
    }
}

/// `√(yᵀ A y) + ⟨b, y⟩` with `‖b‖_A < 1`.
pub struct Randers {
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
}

impl Randers {
    pub fn euclidean(b: &[f64]) -> Randers {
        Randers {
            a: DMatrix::identity(b.len(), b.len()),
            b: b.to_vec(),
        }
    }

    /// Closed-form fundamental tensor
    /// `g_ij = (F/α)(a_ij − α_i α_j) + (α_i + b_i)(α_j + b_j)`, `α_i = a_ij y^j / α`.
    pub fn analytic_hessian(&self, y: &[f64]) -> DMatrix<f64> {
        let n = y.len();
        let alpha = quad_form(&self.a, y).sqrt();
        let f = alpha + self.b.iter().zip(y).map(|(b, y)| b * y).sum::<f64>();
        let ai: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| self.a[(i, j)] * y[j]).sum::<f64>() / alpha)
            .collect();
        DMatrix::from_fn(n, n, |i, j| {
            f / alpha * (self.a[(i, j)] - ai[i] * ai[j]) + (ai[i] + self.b[i]) * (ai[j] + self.b[j])
        })
    }
}

impl MinkowskiNorm for Randers {
    fn dim(&self) -> usize {
        self.b.len()
    }
    fn eval(&self, y: &[f64]) -> f64 {
        quad_form(&self.a, y).sqrt() + self.b.iter().zip(y).map(|(b, y)| b * y).sum::<f64>()
    }
}

/// A norm given by a closure.
pub struct FnNorm<F: Fn(&[f64]) -> f64 + Send + Sync> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> MinkowskiNorm for FnNorm<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, y: &[f64]) -> f64 {
        (self.f)(y)
    }
}
