//! Busemann–Hausdorff volume density, distortion and S-curvature along
//! numerically integrated geodesics.

use serde::{Deserialize, Serialize};

use super::curvature::{hessian_g_with, spray_with, FdConfig};
use super::fd;
use super::metrics::{AtPoint, ChartMetric};
use super::norms::MinkowskiNorm;
use super::FinslerError;
use crate::par::Exec;

use std::f64::consts::PI;

/// Nodes and weights of `n`-point Gauss–Legendre on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn ball_volume_fixed(f: &dyn MinkowskiNorm, m: usize) -> f64 {
    match f.dim() {
        1 => 1.0 / f.eval(&[1.0]) + 1.0 / f.eval(&[-1.0]),
        2 => {
            let h = 2.0 * PI / m as f64;
            0.5 * h
                * (0..m)
                    .map(|k| {
                        let t = k as f64 * h;
                        f.eval(&[t.cos(), t.sin()]).powi(-2)
                    })
                    .sum::<f64>()
        }
        _ => {
            let h = 2.0 * PI / m as f64;
            let mut s = 0.0;
            for (c, w) in gauss_legendre(m / 2) {
                let r = (1.0 - c * c).sqrt();
                for k in 0..m {
                    let t = k as f64 * h;
                    s += w * h * f.eval(&[r * t.cos(), r * t.sin(), c]).powi(-3);
                }
            }
            s / 3.0
        }
    }
}

/// Volume of `{F < 1}`, doubling the quadrature until it settles to 1e-13.
pub fn unit_ball_volume(f: &dyn MinkowskiNorm) -> Result<f64, FinslerError> {
    let n = f.dim();
    if n > 3 {
        return Err(FinslerError::DimensionTooHigh(n));
    }
    let mut m = 32;
    let mut prev = ball_volume_fixed(f, m);
    if n == 1 {
        return Ok(prev);
    }
    while m < 8192 {
        m *= 2;
        let v = ball_volume_fixed(f, m);
        if (v - prev).abs() <= 1e-13 * v.abs() {
            return Ok(v);
        }
        prev = v;
    }
    Err(FinslerError::NonConvergence("unit ball quadrature"))
}

fn euclidean_ball(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => PI,
        _ => 4.0 * PI / 3.0,
    }
}

/// Busemann–Hausdorff density `σ(x) = vol(Bⁿ) / vol{y : F(x, y) < 1}`.
pub fn busemann_hausdorff_volume(m: &dyn ChartMetric, x: &[f64]) -> Result<f64, FinslerError> {
    let at = AtPoint {
        metric: m,
        x: x.to_vec(),
    };
    Ok(euclidean_ball(m.dim()) / unit_ball_volume(&at)?)
}

/// Distortion `τ(x, y) = ln(√det g_y / σ(x))`.
pub fn distortion(m: &dyn ChartMetric, x: &[f64], y: &[f64], h: f64) -> Result<f64, FinslerError> {
    let at = AtPoint {
        metric: m,
        x: x.to_vec(),
    };
    let g = hessian_g_with(&at, y, h)?;
    Ok(0.5 * g.determinant().ln() - busemann_hausdorff_volume(m, x)?.ln())
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// State `(x, ẋ)` of the geodesic `ẍ + 2 G(x, ẋ) = 0` at time `t` (negative
/// times integrate backwards), by adaptive Dormand–Prince 5(4).
pub fn geodesic(m: &dyn ChartMetric, x: &[f64], y: &[f64], t: f64, cfg: FdConfig) -> Result<(Vec<f64>, Vec<f64>), FinslerError> {
    let n = x.len();
    let rhs = |s: &[f64]| -> Result<Vec<f64>, FinslerError> {
        let g = spray_with(m, &s[..n], &s[n..], cfg)?;
        let mut d = s[n..].to_vec();
        d.extend(g.iter().map(|g| -2.0 * g));
        Ok(d)
    };
    let mut s: Vec<f64> = x.iter().chain(y).copied().collect();
    if t == 0.0 {
        return Ok((x.to_vec(), y.to_vec()));
    }
    let dir = t.signum();
    let mut done = 0.0;
    let mut dt = (t.abs() / 4.0).min(0.05);
    let tol = 1e-11;
    let mut steps = 0;
    while done < t.abs() {
        steps += 1;
        if steps > 10_000 {
            return Err(FinslerError::NonConvergence("geodesic integration"));
        }
        dt = dt.min(t.abs() - done);
        let hs = dir * dt;
        let mut k: Vec<Vec<f64>> = vec![rhs(&s)?];
        for a in A.iter() {
            let st: Vec<f64> = (0..2 * n)
                .map(|i| s[i] + hs * k.iter().zip(a).map(|(k, a)| a * k[i]).sum::<f64>())
                .collect();
            k.push(rhs(&st)?);
        }
        let s5: Vec<f64> = (0..2 * n)
            .map(|i| s[i] + hs * (0..7).map(|j| B5[j] * k[j][i]).sum::<f64>())
            .collect();
        let err = (0..2 * n)
            .map(|i| (hs * (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>()).abs() / (1.0 + s[i].abs()))
            .fold(0.0f64, f64::max);
        if err <= tol {
            s = s5;
            done += dt;
        }
        dt *= (0.9 * (tol / err.max(1e-300)).powf(0.2)).clamp(0.2, 5.0);
    }
    Ok((s[..n].to_vec(), s[n..].to_vec()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SCurvatureSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: f64,
    /// The same derivative taken with half the step.
    pub s_half_step: f64,
    /// Relative drift of `F` along the integrated geodesic segment.
    pub f_drift: f64,
}

/// `S(x, y) = d/dt τ(γ(t), γ̇(t))` at `t = 0`.
pub fn s_curvature(m: &dyn ChartMetric, x: &[f64], y: &[f64]) -> Result<SCurvatureSample, FinslerError> {
    s_curvature_with(m, x, y, FdConfig::default())
}

pub fn s_curvature_with(m: &dyn ChartMetric, x: &[f64], y: &[f64], cfg: FdConfig) -> Result<SCurvatureSample, FinslerError> {
    if m.dim() > 3 {
        return Err(FinslerError::DimensionTooHigh(m.dim()));
    }
    let f0 = m.eval(x, y);
    let step = cfg.h_outer * 2.0 / f0;
    let run = |t: f64| -> Result<(f64, f64), FinslerError> {
        let (xt, yt) = geodesic(m, x, y, t, cfg)?;
        Ok((distortion(m, &xt, &yt, cfg.h)?, m.eval(&xt, &yt)))
    };
    let mut err = None;
    let mut drift = 0.0f64;
    let mut deriv = |h: f64| {
        let cell = std::cell::RefCell::new((None::<FinslerError>, 0.0f64));
        let v = fd::d1(
            |t| match run(t) {
                Ok((tau, f)) => {
                    let mut c = cell.borrow_mut();
                    c.1 = c.1.max((f - f0).abs() / f0);
                    tau
                }
                Err(e) => {
                    cell.borrow_mut().0.get_or_insert(e);
                    0.0
                }
            },
            h,
        );
        let (e, d) = cell.into_inner();
        if let Some(e) = e {
            err.get_or_insert(e);
        }
        drift = drift.max(d);
        v
    };
    let s = deriv(step);
    let s_half_step = deriv(step / 2.0);
    if let Some(e) = err {
        return Err(e);
    }
    Ok(SCurvatureSample {
        x: x.to_vec(),
        y: y.to_vec(),
        s,
        s_half_step,
        f_drift: drift,
    })
}

/// S-curvature at many points, in input order.
pub fn s_curvature_batch(
    m: &dyn ChartMetric,
    pts: &[(Vec<f64>, Vec<f64>)],
    exec: Exec,
) -> Vec<Result<SCurvatureSample, FinslerError>> {
    exec.map(pts, |(x, y)| s_curvature(m, x, y))
}
