//! Square matrices over the Gaussian rationals `Q(i)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_arith::Rational;

pub type GaussRat = Complex<Rational>;

pub fn gq(re: Rational, im: Rational) -> GaussRat {
    Complex::new(re, im)
}

pub fn gq_int(re: i64, im: i64) -> GaussRat {
    Complex::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CMatrix {
    n: usize,
    e: Vec<GaussRat>,
}

impl CMatrix {
    pub fn zero(n: usize) -> Self {
        CMatrix {
            n,
            e: vec![GaussRat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.e[i * n + i] = GaussRat::one();
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> GaussRat) -> Self {
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                e.push(f(i, j));
            }
        }
        CMatrix { n, e }
    }

    /// Entries given as `(re, im)` integer pairs, row-major.
    pub fn from_int_pairs(rows: &[&[(i64, i64)]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| gq_int(rows[i][j].0, rows[i][j].1))
    }

    /// Real integer matrix.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| gq_int(rows[i][j], 0))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRat) {
        self.e[i * self.n + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &GaussRat) {
        let x = &mut self.e[i * self.n + j];
        *x = &*x + v;
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, q: &Rational) -> CMatrix {
        CMatrix {
            n: self.n,
            e: self.e.iter().map(|x| x * q).collect(),
        }
    }

    pub fn scale_c(&self, q: &GaussRat) -> CMatrix {
        CMatrix {
            n: self.n,
            e: self.e.iter().map(|x| x * q).collect(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> GaussRat {
        (0..self.n).fold(GaussRat::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn bracket(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    /// `−Re tr(XY)`, the bi-invariant inner product of the catalog.
    pub fn inner(&self, other: &CMatrix) -> Rational {
        let n = self.n;
        let mut acc = Rational::zero();
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                let b = other.get(k, i);
                acc -= &a.re * &b.re - &a.im * &b.im;
            }
        }
        acc
    }

    /// Real coordinates `(re, im)` of all entries, row-major.
    pub fn coords(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(2 * self.e.len());
        for x in &self.e {
            v.push(x.re.clone());
            v.push(x.im.clone());
        }
        v
    }

    /// Inverse of [`CMatrix::coords`].
    pub fn from_real_coords(n: usize, c: &[Rational]) -> CMatrix {
        CMatrix::from_fn(n, |i, j| {
            let k = 2 * (i * n + j);
            GaussRat::new(c[k].clone(), c[k + 1].clone())
        })
    }

    pub fn is_anti_hermitian(&self) -> bool {
        (self + &self.adjoint()).is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.e.iter().all(|x| x.im.is_zero())
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.e
            .iter()
            .map(|x| (x.re.to_f64().unwrap_or(f64::NAN), x.im.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Entries as `[re, im]` rational strings, for JSON export.
    pub fn to_string_pairs(&self) -> Vec<Vec<[String; 2]>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let x = self.get(i, j);
                        [x.re.to_string(), x.im.to_string()]
                    })
                    .collect()
            })
            .collect()
    }

    /// `Σ c_k B_k`.
    pub fn combination(basis: &[CMatrix], coeffs: &[Rational]) -> CMatrix {
        let n = basis.first().map_or(0, CMatrix::size);
        let mut out = CMatrix::zero(n);
        for (b, c) in basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.e.iter_mut().zip(&b.e) {
                *o = &*o + x * c;
            }
        }
        out
    }

    /// Block-diagonal embedding of `self` at offset `at` inside size `n`.
    pub fn embed(&self, n: usize, at: usize) -> CMatrix {
        let mut out = CMatrix::zero(n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(at + i, at + j, self.get(i, j).clone());
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            n: self.n,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            n: self.n,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix {
            n: self.n,
            e: self.e.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.e[idx] = &out.e[idx] + a * b;
                }
            }
        }
        out
    }
}

fn fmt_entry(x: &GaussRat) -> String {
    match (x.re.is_zero(), x.im.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => x.re.to_string(),
        (true, false) => format!("{}i", x.im),
        (false, false) => {
            let sign = if x.im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", x.re, sign, x.im.abs())
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| fmt_entry(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for CMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_string_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[String; 2]>> = Vec::deserialize(d)?;
        let n = rows.len();
        let mut m = CMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(serde::de::Error::custom("matrix is not square"));
            }
            for (j, [re, im]) in row.iter().enumerate() {
                let re: Rational = re.parse().map_err(serde::de::Error::custom)?;
                let im: Rational = im.parse().map_err(serde::de::Error::custom)?;
                m.set(i, j, gq(re, im));
            }
        }
        Ok(m)
    }
}
