//! Exact arithmetic in Q(√2, √3) and coordinate vectors over it.

pub mod linalg;
mod qext;
mod vector;

pub use qext::{rat, rat_int, QExt, Rational};
pub use vector::ExactVector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
}

/// Cartan integers of a pair and whether the pair could occur inside one
/// reduced crystallographic root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanPair {
    /// `2(λ,μ)/(μ,μ)`
    pub n1: QExt,
    /// `2(λ,μ)/(λ,λ)`
    pub n2: QExt,
    pub compatible: bool,
}

pub fn inner(u: &ExactVector, v: &ExactVector) -> Result<QExt, ArithError> {
    u.inner(v)
}

pub fn cartan_pair(lambda: &ExactVector, mu: &ExactVector) -> Result<CartanPair, ArithError> {
    let ll = lambda.inner(lambda)?;
    let mm = mu.inner(mu)?;
    if ll.is_zero() || mm.is_zero() {
        return Err(ArithError::ZeroVector);
    }
    let lm = lambda.inner(mu)?;
    let two_lm = &lm + &lm;
    let n1 = &two_lm / &mm;
    let n2 = &two_lm / &ll;
    Ok(CartanPair {
        compatible: crystallographic(&n1, &n2),
        n1,
        n2,
    })
}

/// Both Cartan integers integral with product in {0,1,2,3}, or the pair is
/// `±` the same vector.
pub fn crystallographic(n1: &QExt, n2: &QExt) -> bool {
    if !n1.is_integer() || !n2.is_integer() {
        return false;
    }
    let p = (n1 * n2).c1;
    let p: i64 = p.to_integer().try_into().unwrap_or(i64::MAX);
    match p {
        0..=3 => true,
        4 => n1 == n2 && n1.c1.numer().magnitude() == &2u32.into(),
        _ => false,
    }
}

/// Signed comparison of two exact values.
pub fn qext_sign(a: &QExt) -> i32 {
    a.signum()
}
