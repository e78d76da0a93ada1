//! Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::Rational;

pub type RatMatrix = Vec<Vec<Rational>>;

/// Reduce `m` to reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            for x in m[r].iter_mut().skip(c) {
                *x *= &inv;
            }
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                if m[r][j].is_zero() {
                    continue;
                }
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}`; `cols` is needed when `m` has no rows.
pub fn nullspace(m: &RatMatrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -a[row][f].clone();
            }
            x
        })
        .collect()
}

/// Solve `m x = b`, returning one solution if the system is consistent.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: RatMatrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Row basis of the span of the given vectors.
pub fn row_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut a = vectors.to_vec();
    let k = rref(&mut a).len();
    a.truncate(k);
    a
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersect(u: &[Vec<Rational>], v: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    // columns: u_1..u_p, -v_1..-v_q ; kernel gives coefficients
    let p = u.len();
    let q = v.len();
    let m: RatMatrix = (0..dim)
        .map(|i| {
            u.iter()
                .map(|x| x[i].clone())
                .chain(v.iter().map(|y| -y[i].clone()))
                .collect()
        })
        .collect();
    let ker = nullspace(&m, p + q);
    let vecs: Vec<Vec<Rational>> = ker
        .iter()
        .map(|k| {
            let mut w = vec![Rational::zero(); dim];
            for (j, c) in k.iter().take(p).enumerate() {
                if c.is_zero() {
                    continue;
                }
                for i in 0..dim {
                    w[i] += c * &u[j][i];
                }
            }
            w
        })
        .collect();
    row_basis(&vecs)
}
