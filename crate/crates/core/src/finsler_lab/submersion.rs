//! Subduced norms of linear submersions and the flag-curvature inequality
//! for horizontal lifts.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::curvature::{flag_curvature_with, hessian_g_with, FdConfig};
use super::fd::{self, norm};
use super::metrics::{AtPoint, ChartMetric};
use super::norms::MinkowskiNorm;
use super::FinslerError;

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX: usize = 60;

/// Orthonormal basis of `ker P` as the columns of an `n × (n − m)` matrix.
fn kernel(p: &DMatrix<f64>) -> Result<DMatrix<f64>, FinslerError> {
    let (m, n) = p.shape();
    let svd = p.transpose().svd(true, false);
    let u = svd.u.ok_or(FinslerError::SingularSubmersion)?;
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|s| **s > 1e-12 * smax.max(1.0)).count();
    if rank != m {
        return Err(FinslerError::SingularSubmersion);
    }
    let mut basis: Vec<DVector<f64>> = (0..m).map(|j| u.column(j).into_owned()).collect();
    let mut out = Vec::new();
    for e in 0..n {
        let mut v = DVector::from_fn(n, |i, _| if i == e { 1.0 } else { 0.0 });
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let l = v.norm();
        if l > 1e-8 {
            v /= l;
            basis.push(v.clone());
            out.push(v);
        }
        if out.len() == n - m {
            break;
        }
    }
    Ok(DMatrix::from_columns(&out))
}

/// Minimizer of `F` on the affine fibre `P v = w`, by damped Newton on
/// `½ F²(v0 + K c)` with finite-difference gradient and Hessian.
pub fn horizontal_lift(f: &dyn MinkowskiNorm, p: &DMatrix<f64>, w: &[f64]) -> Result<Vec<f64>, FinslerError> {
    if p.ncols() != f.dim() || p.nrows() != w.len() {
        return Err(FinslerError::Dimension(f.dim()));
    }
    let n = f.dim();
    if norm(w) == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let k = kernel(p)?;
    let pp = p * p.transpose();
    let v0 = p.transpose() * pp.lu().solve(&DVector::from_column_slice(w)).ok_or(FinslerError::SingularSubmersion)?;
    if k.ncols() == 0 {
        return Ok(v0.as_slice().to_vec());
    }
    let phi = |v: &DVector<f64>| 0.5 * f.eval(v.as_slice()).powi(2);
    let mut v = v0.clone();
    for _ in 0..NEWTON_MAX {
        let s = v.norm();
        let h = FdConfig::default().h * s;
        let grad = DVector::from_vec(fd::gradient(|z| 0.5 * f.eval(z).powi(2), v.as_slice(), h));
        let rg = k.transpose() * &grad;
        if rg.norm() <= NEWTON_TOL * s.max(1.0) {
            return Ok(v.as_slice().to_vec());
        }
        let g = hessian_g_with(f, v.as_slice(), FdConfig::default().h)?;
        let rh = k.transpose() * g * &k;
        let step = rh.cholesky().ok_or(FinslerError::NotPositiveDefinite)?.solve(&rg);
        let base = phi(&v);
        let mut t = 1.0;
        loop {
            let cand = &v - &k * (&step * t);
            if phi(&cand) <= base || t < 1e-6 {
                v = cand;
                break;
            }
            t *= 0.5;
        }
    }
    Err(FinslerError::NonConvergence("horizontal lift"))
}

/// `F₂(w) = min { F(v) : P v = w }`.
pub fn subduced_norm(f: &dyn MinkowskiNorm, p: &DMatrix<f64>, w: &[f64]) -> Result<f64, FinslerError> {
    Ok(f.eval(&horizontal_lift(f, p, w)?))
}

/// `max |⟨v, k⟩_v|` over an orthonormal basis of `ker P`, relative to `F(v) ‖g_v‖^½`.
pub fn orthogonality_residual(f: &dyn MinkowskiNorm, p: &DMatrix<f64>, v: &[f64]) -> Result<f64, FinslerError> {
    let k = kernel(p)?;
    let g = hessian_g_with(f, v, FdConfig::default().h)?;
    let gv = &g * DVector::from_column_slice(v);
    let r = (k.transpose() * gv).amax();
    let gmax = g.amax();
    Ok(r / (f.eval(v) * gmax.sqrt()))
}

/// The subduced norm of a Minkowski norm, usable as a norm itself.
pub struct Subduced<'a> {
    pub f: &'a dyn MinkowskiNorm,
    pub p: DMatrix<f64>,
}

impl MinkowskiNorm for Subduced<'_> {
    fn dim(&self) -> usize {
        self.p.nrows()
    }
    fn eval(&self, w: &[f64]) -> f64 {
        subduced_norm(self.f, &self.p, w).unwrap_or(f64::NAN)
    }
}

/// `g` of the subduced norm at `w` predicted from the lift: `(P g_v⁻¹ Pᵀ)⁻¹`.
pub fn predicted_quotient_g(f: &dyn MinkowskiNorm, p: &DMatrix<f64>, w: &[f64]) -> Result<DMatrix<f64>, FinslerError> {
    let v = horizontal_lift(f, p, w)?;
    let gi = hessian_g_with(f, &v, FdConfig::default().h)?
        .try_inverse()
        .ok_or(FinslerError::NotPositiveDefinite)?;
    (p * gi * p.transpose()).try_inverse().ok_or(FinslerError::SingularSubmersion)
}

/// Lift of `w` that is `g_y`-orthogonal to `ker P`: `g⁻¹ Pᵀ (P g⁻¹ Pᵀ)⁻¹ w`.
fn linear_lift(g: &DMatrix<f64>, p: &DMatrix<f64>, w: &[f64]) -> Result<Vec<f64>, FinslerError> {
    let gi = g.clone().try_inverse().ok_or(FinslerError::NotPositiveDefinite)?;
    let m = (p * &gi * p.transpose()).try_inverse().ok_or(FinslerError::SingularSubmersion)?;
    Ok((gi * p.transpose() * m * DVector::from_column_slice(w)).as_slice().to_vec())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubmersionSample {
    pub x1: Vec<f64>,
    pub y2: Vec<f64>,
    pub v2: Vec<f64>,
    pub y_lift: Vec<f64>,
    pub v_lift: Vec<f64>,
    pub k_total: f64,
    pub k_base: f64,
    /// `|F₂(y₂) − F₁(ŷ)| / F₁(ŷ)`: the base metric agrees with the subduced one.
    pub norm_mismatch: f64,
    pub orthogonality: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubmersionReport {
    pub samples: Vec<SubmersionSample>,
    pub tolerance: f64,
    pub violations: usize,
    pub max_norm_mismatch: f64,
}

impl SubmersionReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// For a map that is linear in the charts, `x₂ = P x₁`, check
/// `K₂(y₂, v₂) ≥ K₁(ŷ, v̂)` at each sample, with `ŷ` the horizontal lift of `y₂`
/// and `v̂` the lift of `v₂` that is `g_ŷ`-orthogonal to the fibre.
pub fn submersion_inequality_check(
    total: &dyn ChartMetric,
    base: &dyn ChartMetric,
    p: &DMatrix<f64>,
    samples: &[(Vec<f64>, Vec<f64>, Vec<f64>)],
    cfg: FdConfig,
) -> Result<SubmersionReport, FinslerError> {
    const TOL: f64 = 1e-4;
    let mut out = Vec::with_capacity(samples.len());
    for (x1, y2, v2) in samples {
        let at = AtPoint {
            metric: total,
            x: x1.clone(),
        };
        let x2: Vec<f64> = (p * DVector::from_column_slice(x1)).as_slice().to_vec();
        let y_lift = horizontal_lift(&at, p, y2)?;
        let orthogonality = orthogonality_residual(&at, p, &y_lift)?;
        if orthogonality > 1e-8 {
            return Err(FinslerError::Orthogonality(orthogonality));
        }
        let g = hessian_g_with(&at, &y_lift, cfg.h)?;
        let v_lift = linear_lift(&g, p, v2)?;
        let k_total = flag_curvature_with(total, x1, &y_lift, &v_lift, cfg)?.k.unwrap_or(f64::NAN);
        let k_base = flag_curvature_with(base, &x2, y2, v2, cfg)?.k.unwrap_or(f64::NAN);
        let f1 = at.eval(&y_lift);
        out.push(SubmersionSample {
            x1: x1.clone(),
            y2: y2.clone(),
            v2: v2.clone(),
            y_lift,
            v_lift,
            k_total,
            k_base,
            norm_mismatch: (base.eval(&x2, y2) - f1).abs() / f1,
            orthogonality,
        });
    }
    let violations = out.iter().filter(|s| s.k_total > s.k_base + TOL).count();
    let max_norm_mismatch = out.iter().fold(0.0f64, |a, s| a.max(s.norm_mismatch));
    Ok(SubmersionReport {
        samples: out,
        tolerance: TOL,
        violations,
        max_norm_mismatch,
    })
}
