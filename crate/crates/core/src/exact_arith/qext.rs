use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

/// Build a rational from a numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element `c1 + s2·√2 + s3·√3 + s6·√6` of the biquadratic field Q(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QExt {
    pub c1: Rational,
    pub s2: Rational,
    pub s3: Rational,
    pub s6: Rational,
}

impl QExt {
    pub fn new(c1: Rational, s2: Rational, s3: Rational, s6: Rational) -> Self {
        QExt { c1, s2, s3, s6 }
    }

    pub fn zero() -> Self {
        QExt::default()
    }

    pub fn one() -> Self {
        QExt::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        QExt::from_rational(rat_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QExt::from_rational(rat(n, d))
    }

    pub fn from_rational(r: Rational) -> Self {
        QExt {
            c1: r,
            ..QExt::default()
        }
    }

    /// `q · √2`
    pub fn sqrt2_times(q: Rational) -> Self {
        QExt {
            s2: q,
            ..QExt::default()
        }
    }

    /// `q · √3`
    pub fn sqrt3_times(q: Rational) -> Self {
        QExt {
            s3: q,
            ..QExt::default()
        }
    }

    /// `q · √6`
    pub fn sqrt6_times(q: Rational) -> Self {
        QExt {
            s6: q,
            ..QExt::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.s2.is_zero() && self.s3.is_zero() && self.s6.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.s2.is_zero() && self.s3.is_zero() && self.s6.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.c1)
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.c1.is_integer()
    }

    pub fn scale(&self, q: &Rational) -> QExt {
        if q.is_zero() {
            return QExt::zero();
        }
        QExt {
            c1: &self.c1 * q,
            s2: &self.s2 * q,
            s3: &self.s3 * q,
            s6: &self.s6 * q,
        }
    }

    /// Galois conjugate flipping the sign of √2 (and therefore √6).
    pub fn conj2(&self) -> QExt {
        QExt {
            c1: self.c1.clone(),
            s2: -&self.s2,
            s3: self.s3.clone(),
            s6: -&self.s6,
        }
    }

    /// Galois conjugate flipping the sign of √3 (and therefore √6).
    pub fn conj3(&self) -> QExt {
        QExt {
            c1: self.c1.clone(),
            s2: self.s2.clone(),
            s3: -&self.s3,
            s6: -&self.s6,
        }
    }

    /// Field norm down to Q, the product of all four conjugates.
    pub fn norm(&self) -> Rational {
        let a = self * &self.conj3();
        let n = &a * &a.conj2();
        debug_assert!(n.is_rational());
        n.c1
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<QExt> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(QExt::from_rational(self.c1.recip()));
        }
        let a = self.conj3();
        let r = self * &a;
        let b = r.conj2();
        let n = (&r * &b).c1;
        Some((&a * &b).scale(&n.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.c1)
            + f(&self.s2) * std::f64::consts::SQRT_2
            + f(&self.s3) * 3f64.sqrt()
            + f(&self.s6) * 6f64.sqrt()
    }

    /// Exact sign. Structural zero is decided first; otherwise the value is
    /// enclosed in rational intervals of shrinking width until the enclosure
    /// excludes zero, which must happen because the basis is linearly
    /// independent over Q.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return sign_of(&self.c1);
        }
        let mut bits = 32u32;
        loop {
            let (lo, hi) = self.enclose(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Rational interval `[lo, hi]` containing the value, with the square
    /// roots approximated to `bits` binary digits.
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = self.c1.clone();
        let mut hi = self.c1.clone();
        for (coef, n) in [(&self.s2, 2u32), (&self.s3, 3), (&self.s6, 6)] {
            if coef.is_zero() {
                continue;
            }
            let (rlo, rhi) = sqrt_enclosure(n, bits);
            if coef.is_positive() {
                lo += coef * &rlo;
                hi += coef * &rhi;
            } else {
                lo += coef * &rhi;
                hi += coef * &rlo;
            }
        }
        (lo, hi)
    }

    pub fn abs(&self) -> QExt {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn cmp_exact(&self, other: &QExt) -> Ordering {
        (self - other).signum().cmp(&0)
    }

    /// Coefficients as strings `[c1, s2, s3, s6]`, used for serialization.
    pub fn to_strings(&self) -> [String; 4] {
        [
            self.c1.to_string(),
            self.s2.to_string(),
            self.s3.to_string(),
            self.s6.to_string(),
        ]
    }

    pub fn from_strings(s: &[String; 4]) -> Result<QExt, String> {
        let p = |x: &String| x.parse::<Rational>().map_err(|e| format!("{x}: {e}"));
        Ok(QExt::new(p(&s[0])?, p(&s[1])?, p(&s[2])?, p(&s[3])?))
    }
}

fn sign_of(q: &Rational) -> i32 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn sqrt_enclosure(n: u32, bits: u32) -> (Rational, Rational) {
    let scale = BigInt::one() << bits;
    let radicand = BigInt::from(n) * &scale * &scale;
    let s = radicand.sqrt();
    let den = scale;
    let lo = Rational::new(s.clone(), den.clone());
    let hi = if &s * &s == radicand {
        lo.clone()
    } else {
        Rational::new(s + 1, den)
    };
    (lo, hi)
}

impl fmt::Display for QExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (coef, unit) in [
            (&self.c1, ""),
            (&self.s2, "√2"),
            (&self.s3, "√3"),
            (&self.s6, "√6"),
        ] {
            if coef.is_zero() {
                continue;
            }
            let neg = coef.is_negative();
            let mag = coef.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if unit.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{unit}")?;
            } else if mag.numer().is_one() {
                write!(f, "{unit}/{}", mag.denom())?;
            } else {
                write!(f, "{mag}·{unit}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for QExt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = <[String; 4]>::deserialize(d)?;
        QExt::from_strings(&raw).map_err(serde::de::Error::custom)
    }
}

fn mul_ref(a: &QExt, b: &QExt) -> QExt {
    if a.is_rational() {
        return b.scale(&a.c1);
    }
    if b.is_rational() {
        return a.scale(&b.c1);
    }
    let (a1, a2, a3, a6) = (&a.c1, &a.s2, &a.s3, &a.s6);
    let (b1, b2, b3, b6) = (&b.c1, &b.s2, &b.s3, &b.s6);
    let two = rat_int(2);
    let three = rat_int(3);
    let six = rat_int(6);
    QExt {
        c1: a1 * b1 + &two * a2 * b2 + &three * a3 * b3 + &six * a6 * b6,
        s2: a1 * b2 + a2 * b1 + &three * (a3 * b6 + a6 * b3),
        s3: a1 * b3 + a3 * b1 + &two * (a2 * b6 + a6 * b2),
        s6: a1 * b6 + a6 * b1 + a2 * b3 + a3 * b2,
    }
}

impl<'a> Add<&'a QExt> for &'a QExt {
    type Output = QExt;
    fn add(self, o: &QExt) -> QExt {
        QExt {
            c1: &self.c1 + &o.c1,
            s2: &self.s2 + &o.s2,
            s3: &self.s3 + &o.s3,
            s6: &self.s6 + &o.s6,
        }
    }
}

impl<'a> Sub<&'a QExt> for &'a QExt {
    type Output = QExt;
    fn sub(self, o: &QExt) -> QExt {
        QExt {
            c1: &self.c1 - &o.c1,
            s2: &self.s2 - &o.s2,
            s3: &self.s3 - &o.s3,
            s6: &self.s6 - &o.s6,
        }
    }
}

impl<'a> Mul<&'a QExt> for &'a QExt {
    type Output = QExt;
    fn mul(self, o: &QExt) -> QExt {
        mul_ref(self, o)
    }
}

impl<'a> Div<&'a QExt> for &'a QExt {
    type Output = QExt;
    fn div(self, o: &QExt) -> QExt {
        self * &o.inv().expect("division by zero in QExt")
    }
}

impl Neg for &QExt {
    type Output = QExt;
    fn neg(self) -> QExt {
        QExt {
            c1: -&self.c1,
            s2: -&self.s2,
            s3: -&self.s3,
            s6: -&self.s6,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QExt> for QExt {
            type Output = QExt;
            fn $m(self, o: QExt) -> QExt {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QExt> for QExt {
            type Output = QExt;
            fn $m(self, o: &QExt) -> QExt {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QExt {
    type Output = QExt;
    fn neg(self) -> QExt {
        -&self
    }
}

impl AddAssign<&QExt> for QExt {
    fn add_assign(&mut self, o: &QExt) {
        self.c1 += &o.c1;
        self.s2 += &o.s2;
        self.s3 += &o.s3;
        self.s6 += &o.s6;
    }
}

impl SubAssign<&QExt> for QExt {
    fn sub_assign(&mut self, o: &QExt) {
        self.c1 -= &o.c1;
        self.s2 -= &o.s2;
        self.s3 -= &o.s3;
        self.s6 -= &o.s6;
    }
}

impl From<i64> for QExt {
    fn from(n: i64) -> Self {
        QExt::from_int(n)
    }
}

impl From<Rational> for QExt {
    fn from(r: Rational) -> Self {
        QExt::from_rational(r)
    }
}
