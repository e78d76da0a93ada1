use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::qext::{QExt, Rational};
use super::ArithError;

/// A coordinate vector with entries in Q(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExactVector {
    pub coords: Vec<QExt>,
}

impl ExactVector {
    pub fn new(coords: Vec<QExt>) -> Self {
        ExactVector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        ExactVector {
            coords: vec![QExt::zero(); dim],
        }
    }

    /// Standard basis vector `e_{i+1}` (zero-based index).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = ExactVector::zero(dim);
        v.coords[i] = QExt::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        ExactVector {
            coords: xs.iter().map(|&x| QExt::from_int(x)).collect(),
        }
    }

    pub fn from_rationals(xs: &[Rational]) -> Self {
        ExactVector {
            coords: xs.iter().cloned().map(QExt::from_rational).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(QExt::is_zero)
    }

    pub fn scale(&self, q: &Rational) -> ExactVector {
        ExactVector {
            coords: self.coords.iter().map(|c| c.scale(q)).collect(),
        }
    }

    pub fn scale_q(&self, q: &QExt) -> ExactVector {
        ExactVector {
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inner(&self, other: &ExactVector) -> Result<QExt, ArithError> {
        if self.dim() != other.dim() {
            return Err(ArithError::DimensionMismatch(self.dim(), other.dim()));
        }
        let mut acc = QExt::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc += &(a * b);
        }
        Ok(acc)
    }

    /// Inner product for vectors already known to share a dimension.
    pub fn dot(&self, other: &ExactVector) -> QExt {
        self.inner(other).expect("dimension mismatch")
    }

    pub fn norm_sq(&self) -> QExt {
        self.dot(self)
    }

    /// Concatenate coordinates, used to build direct sums.
    pub fn concat(&self, other: &ExactVector) -> ExactVector {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        ExactVector { coords }
    }

    /// Exact lexicographic sign: the sign of the first nonzero coordinate.
    pub fn lex_sign(&self) -> i32 {
        self.coords
            .iter()
            .map(QExt::signum)
            .find(|&s| s != 0)
            .unwrap_or(0)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(QExt::to_f64).collect()
    }

    /// True when `self = c · other` for some scalar `c`.
    pub fn is_parallel(&self, other: &ExactVector) -> bool {
        let a = self.dot(self);
        let b = other.dot(other);
        let ab = self.dot(other);
        (&ab * &ab - &a * &b).is_zero()
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a ExactVector> for &'a ExactVector {
    type Output = ExactVector;
    fn add(self, o: &ExactVector) -> ExactVector {
        assert_eq!(self.dim(), o.dim(), "dimension mismatch");
        ExactVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactVector> for &'a ExactVector {
    type Output = ExactVector;
    fn sub(self, o: &ExactVector) -> ExactVector {
        assert_eq!(self.dim(), o.dim(), "dimension mismatch");
        ExactVector {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactVector {
    type Output = ExactVector;
    fn neg(self) -> ExactVector {
        ExactVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}
