//! Fundamental tensor, geodesic spray, Riemann curvature and flag curvature
//! by nested finite differences.

use std::cell::RefCell;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::fd::{self, d1, d11, d11_vec, d1_vec, d2_vec, norm, shift, shift2};
use super::metrics::ChartMetric;
use super::norms::MinkowskiNorm;
use super::FinslerError;
use crate::par::Exec;

/// Step sizes. `h` is the step for derivatives of `F²` (relative to `|y|` in
/// the `y` directions); `h_outer` is used for derivatives of the spray, whose
/// values already carry the roundoff of the inner stencil.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FdConfig {
    pub h: f64,
    pub h_outer: f64,
    /// Relative tolerance of the self-adjointness diagnostic.
    pub self_adjoint_tol: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            h: 5e-2,
            h_outer: 1e-2,
            self_adjoint_tol: 1e-4,
        }
    }
}

fn to_matrix(m: Vec<Vec<f64>>) -> DMatrix<f64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| m[i][j])
}

fn positive_definite(m: &DMatrix<f64>) -> bool {
    m.clone().cholesky().is_some()
}

/// `g_ij(y) = ½ [F²]_{y^i y^j}(y)`.
pub fn hessian_g(f: &dyn MinkowskiNorm, y: &[f64]) -> Result<DMatrix<f64>, FinslerError> {
    hessian_g_with(f, y, FdConfig::default().h)
}

pub fn hessian_g_with(f: &dyn MinkowskiNorm, y: &[f64], h: f64) -> Result<DMatrix<f64>, FinslerError> {
    let s = norm(y);
    if s == 0.0 {
        return Err(FinslerError::ZeroVector);
    }
    let m = to_matrix(fd::hessian(|z| 0.5 * f.eval(z).powi(2), y, h * s));
    if !positive_definite(&m) {
        return Err(FinslerError::NotPositiveDefinite);
    }
    Ok(m)
}

/// `g_ij(x, y)` of a chart metric.
pub fn metric_g(m: &dyn ChartMetric, x: &[f64], y: &[f64], h: f64) -> Result<DMatrix<f64>, FinslerError> {
    let s = norm(y);
    if s == 0.0 {
        return Err(FinslerError::ZeroVector);
    }
    let g = to_matrix(fd::hessian(|z| 0.5 * m.eval(x, z).powi(2), y, h * s));
    if !positive_definite(&g) {
        return Err(FinslerError::NotPositiveDefinite);
    }
    Ok(g)
}

fn inner(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += g[(i, j)] * u[i] * v[j];
        }
    }
    s
}

/// `G^i = ¼ g^{il} ([F²]_{x^k y^l} y^k − [F²]_{x^l})`.
pub fn spray(m: &dyn ChartMetric, x: &[f64], y: &[f64]) -> Result<Vec<f64>, FinslerError> {
    spray_with(m, x, y, FdConfig::default())
}

pub fn spray_with(m: &dyn ChartMetric, x: &[f64], y: &[f64], cfg: FdConfig) -> Result<Vec<f64>, FinslerError> {
    if !m.contains(x) {
        return Err(FinslerError::OutsideChart);
    }
    let n = m.dim();
    let hy = cfg.h * norm(y);
    let hx = cfg.h_outer;
    let g = metric_g(m, x, y, cfg.h)?;
    let f2 = |x: &[f64], y: &[f64]| m.eval(x, y).powi(2);
    let mut rhs = vec![0.0; n];
    for (l, r) in rhs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, yk) in y.iter().enumerate() {
            if *yk != 0.0 {
                acc += yk * d11(|s, t| f2(&shift(x, k, s), &shift(y, l, t)), hx, hy);
            }
        }
        *r = acc - d1(|s| f2(&shift(x, l, s), y), hx);
    }
    let ginv = g.try_inverse().ok_or(FinslerError::NotPositiveDefinite)?;
    Ok((0..n)
        .map(|i| 0.25 * (0..n).map(|l| ginv[(i, l)] * rhs[l]).sum::<f64>())
        .collect())
}

/// Step in `x` for the stencils at `(x, y)`: `h_outer`, shrunk where the
/// metric varies on a shorter length scale `F / |∂ₓF|`.
pub fn x_step(m: &dyn ChartMetric, x: &[f64], y: &[f64], cfg: FdConfig) -> f64 {
    let f = m.eval(x, y);
    let grad = fd::gradient(|z| m.eval(z, y), x, 1e-4);
    let gn = norm(&grad);
    if gn == 0.0 || !gn.is_finite() {
        return cfg.h_outer;
    }
    cfg.h_outer * (1.0 * f / gn).clamp(0.05, 1.0)
}

/// One evaluated flag pole: spray, curvature operator and diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub v: Option<Vec<f64>>,
    pub spray: Vec<f64>,
    /// `R^i_k`, row `i`.
    pub r: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
    pub k: Option<f64>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `|R_y y|_∞ / (F² |y|_∞)`.
    pub pole_residual: f64,
    /// `max |g R − (g R)ᵀ| / (F² ‖g‖_∞)`.
    pub self_adjoint_residual: f64,
}

/// `R^i_k = 2∂_{x^k}G^i − y^j ∂²_{x^j y^k}G^i + 2G^j ∂²_{y^j y^k}G^i − ∂_{y^j}G^i ∂_{y^k}G^j`.
pub fn riemann_curvature(m: &dyn ChartMetric, x: &[f64], y: &[f64]) -> Result<CurvatureSample, FinslerError> {
    riemann_curvature_with(m, x, y, FdConfig::default())
}

pub fn riemann_curvature_with(
    m: &dyn ChartMetric,
    x: &[f64],
    y: &[f64],
    cfg: FdConfig,
) -> Result<CurvatureSample, FinslerError> {
    let n = m.dim();
    if x.len() != n || y.len() != n {
        return Err(FinslerError::Dimension(n));
    }
    if !m.contains(x) {
        return Err(FinslerError::OutsideChart);
    }
    let hx = x_step(m, x, y, cfg);
    let inner = FdConfig { h_outer: hx, ..cfg };
    let sp = |x: &[f64], y: &[f64]| spray_with(m, x, y, inner);
    let g0 = sp(x, y)?;
    let hy = cfg.h_outer * norm(y);
    let err = RefCell::new(None);
    let call = |x: &[f64], y: &[f64]| match sp(x, y) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            vec![0.0; n]
        }
    };
    let gx: Vec<Vec<f64>> = (0..n).map(|k| d1_vec(|s| call(&shift(x, k, s), y), hx)).collect();
    let gy: Vec<Vec<f64>> = (0..n).map(|k| d1_vec(|t| call(x, &shift(y, k, t)), hy)).collect();
    let mut gxy = vec![vec![Vec::new(); n]; n];
    let mut gyy = vec![vec![Vec::new(); n]; n];
    for j in 0..n {
        for k in 0..n {
            gxy[j][k] = d11_vec(|s, t| call(&shift(x, j, s), &shift(y, k, t)), hx, hy);
            if k == j {
                gyy[j][k] = d2_vec(|t| call(x, &shift(y, j, t)), hy);
            } else if k < j {
                gyy[j][k] = gyy[k][j].clone();
            } else {
                gyy[j][k] = d11_vec(|s, t| call(x, &shift2(y, j, s, k, t)), hy, hy);
            }
        }
    }
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let mut r = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let mut v = 2.0 * gx[k][i];
            for j in 0..n {
                v -= y[j] * gxy[j][k][i];
                v += 2.0 * g0[j] * gyy[j][k][i];
                v -= gy[j][i] * gy[k][j];
            }
            r[i][k] = v;
        }
    }
    let g = metric_g(m, x, y, cfg.h)?;
    let f2 = m.eval(x, y).powi(2);
    let ymax = y.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let ry: Vec<f64> = (0..n).map(|i| (0..n).map(|k| r[i][k] * y[k]).sum()).collect();
    let pole_residual = ry.iter().fold(0.0f64, |a, b| a.max(b.abs())) / (f2 * ymax);
    let gr = DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| g[(j, i)] * r[i][k]).sum::<f64>());
    let gmax = g.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut asym = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            asym = asym.max((gr[(j, k)] - gr[(k, j)]).abs());
        }
    }
    let self_adjoint_residual = asym / (f2 * gmax);
    if self_adjoint_residual > cfg.self_adjoint_tol {
        return Err(FinslerError::SelfAdjointness(self_adjoint_residual));
    }
    Ok(CurvatureSample {
        x: x.to_vec(),
        y: y.to_vec(),
        v: None,
        spray: g0,
        r,
        g: (0..n).map(|i| (0..n).map(|j| g[(i, j)]).collect()).collect(),
        k: None,
        diagnostics: Diagnostics {
            pole_residual,
            self_adjoint_residual,
        },
    })
}

/// `K = ⟨R_y v, v⟩_y / (⟨y,y⟩_y ⟨v,v⟩_y − ⟨y,v⟩²_y)`.
pub fn flag_curvature(m: &dyn ChartMetric, x: &[f64], y: &[f64], v: &[f64]) -> Result<CurvatureSample, FinslerError> {
    flag_curvature_with(m, x, y, v, FdConfig::default())
}

pub fn flag_curvature_with(
    m: &dyn ChartMetric,
    x: &[f64],
    y: &[f64],
    v: &[f64],
    cfg: FdConfig,
) -> Result<CurvatureSample, FinslerError> {
    let mut s = riemann_curvature_with(m, x, y, cfg)?;
    let n = y.len();
    let g = DMatrix::from_fn(n, n, |i, j| s.g[i][j]);
    let (yy, vv, yv) = (inner(&g, y, y), inner(&g, v, v), inner(&g, y, v));
    let den = yy * vv - yv * yv;
    if den < 1e-8 * yy * vv {
        return Err(FinslerError::DegenerateFlag);
    }
    let rv: Vec<f64> = (0..n).map(|i| (0..n).map(|k| s.r[i][k] * v[k]).sum()).collect();
    s.k = Some(inner(&g, &rv, v) / den);
    s.v = Some(v.to_vec());
    Ok(s)
}

/// Flag curvature at many `(x, y, v)`, in input order.
pub fn flag_curvature_batch(
    m: &dyn ChartMetric,
    flags: &[(Vec<f64>, Vec<f64>, Vec<f64>)],
    cfg: FdConfig,
    exec: Exec,
) -> Vec<Result<CurvatureSample, FinslerError>> {
    exec.map(flags, |(x, y, v)| flag_curvature_with(m, x, y, v, cfg))
}
