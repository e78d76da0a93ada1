//! Seven-point central differences, exact for polynomials of degree six.
//! Compared with Richardson extrapolation at the same order they reach
//! fewer, wider nodes, which keeps roundoff amplification low when the
//! stencils are nested.

const D1: [(f64, f64); 6] = [
    (-3.0, -1.0 / 60.0),
    (-2.0, 9.0 / 60.0),
    (-1.0, -45.0 / 60.0),
    (1.0, 45.0 / 60.0),
    (2.0, -9.0 / 60.0),
    (3.0, 1.0 / 60.0),
];

const D2: [(f64, f64); 7] = [
    (-3.0, 2.0 / 180.0),
    (-2.0, -27.0 / 180.0),
    (-1.0, 270.0 / 180.0),
    (0.0, -490.0 / 180.0),
    (1.0, 270.0 / 180.0),
    (2.0, -27.0 / 180.0),
    (3.0, 2.0 / 180.0),
];

fn axpy(acc: &mut Vec<f64>, a: f64, x: &[f64]) {
    if acc.is_empty() {
        acc.resize(x.len(), 0.0);
    }
    for (s, x) in acc.iter_mut().zip(x) {
        *s += a * x;
    }
}

/// `f'(0)`.
pub fn d1(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    D1.iter().map(|(k, c)| c * f(k * h)).sum::<f64>() / h
}

/// `f''(0)`.
pub fn d2(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    D2.iter().map(|(k, c)| c * f(k * h)).sum::<f64>() / (h * h)
}

/// `∂s ∂t f(0, 0)` with separate steps in `s` and `t`.
pub fn d11(f: impl Fn(f64, f64) -> f64, hs: f64, ht: f64) -> f64 {
    let mut s = 0.0;
    for (a, ca) in D1 {
        for (b, cb) in D1 {
            s += ca * cb * f(a * hs, b * ht);
        }
    }
    s / (hs * ht)
}

pub fn d1_vec(f: impl Fn(f64) -> Vec<f64>, h: f64) -> Vec<f64> {
    let mut acc = Vec::new();
    for (k, c) in D1 {
        axpy(&mut acc, c / h, &f(k * h));
    }
    acc
}

pub fn d2_vec(f: impl Fn(f64) -> Vec<f64>, h: f64) -> Vec<f64> {
    let mut acc = Vec::new();
    for (k, c) in D2 {
        axpy(&mut acc, c / (h * h), &f(k * h));
    }
    acc
}

pub fn d11_vec(f: impl Fn(f64, f64) -> Vec<f64>, hs: f64, ht: f64) -> Vec<f64> {
    let mut acc = Vec::new();
    for (a, ca) in D1 {
        for (b, cb) in D1 {
            axpy(&mut acc, ca * cb / (hs * ht), &f(a * hs, b * ht));
        }
    }
    acc
}

/// `v + t e_i`.
pub fn shift(v: &[f64], i: usize, t: f64) -> Vec<f64> {
    let mut w = v.to_vec();
    w[i] += t;
    w
}

/// `v + s e_i + t e_j`.
pub fn shift2(v: &[f64], i: usize, s: f64, j: usize, t: f64) -> Vec<f64> {
    let mut w = v.to_vec();
    w[i] += s;
    w[j] += t;
    w
}

/// Symmetric Hessian of `f` at `y` with step `h`.
pub fn hessian(f: impl Fn(&[f64]) -> f64, y: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = y.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = d2(|t| f(&shift(y, i, t)), h);
        for j in 0..i {
            let v = d11(|s, t| f(&shift2(y, i, s, j, t)), h, h);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

pub fn gradient(f: impl Fn(&[f64]) -> f64, y: &[f64], h: f64) -> Vec<f64> {
    (0..y.len()).map(|i| d1(|t| f(&shift(y, i, t)), h)).collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives_are_exact_to_roundoff() {
        let f = |t: f64| 3.0 * t.powi(4) - t.powi(3) + 2.0 * t;
        assert!((d1(f, 1e-2) - 2.0).abs() < 1e-10);
        assert!(d2(f, 1e-2).abs() < 1e-8);
        let g = |s: f64, t: f64| (s + 1.0).powi(2) * (t - 2.0).powi(3);
        assert!((d11(g, 1e-2, 2e-2) - 24.0).abs() < 1e-7);
    }
}
