//! Dense univariate polynomials over Q, with Sturm-sequence root isolation.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact_arith::Rational;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return (Poly(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let l = d.lead();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &l;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.divrem(&y).1;
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Yun's algorithm: `self = lead · Π f_k^k` with square-free, coprime `f_k`.
    pub fn squarefree(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = Poly::gcd(&f, &fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut k = 1;
        while b.degree() >= 1 {
            let a = Poly::gcd(&b, &d);
            if a.degree() >= 1 {
                out.push((a.clone(), k));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Cauchy bound on the absolute value of the roots.
    pub fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &l)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    let a = self.0.get(k).cloned().unwrap_or_else(Rational::zero);
                    let b = rhs.0.get(k).cloned().unwrap_or_else(Rational::zero);
                    a - b
                })
                .collect(),
        )
    }
}

/// Sturm chain of a square-free polynomial.
pub struct Sturm(Vec<Poly>);

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let k = chain.len();
            let r = chain[k - 2].divrem(&chain[k - 1]).1;
            chain.push(Poly(r.0.iter().map(|c| -c).collect()));
        }
        chain.pop();
        Sturm(chain)
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for p in &self.0 {
            let s = p.eval(x);
            let s = if s.is_zero() {
                continue;
            } else if s.is_positive() {
                1
            } else {
                -1
            };
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Isolating intervals `(lo, hi]` of width at most `eps` for the real roots of
/// a square-free polynomial, ascending.
pub fn isolate_real_roots(p: &Poly, eps: &Rational) -> Vec<(Rational, Rational)> {
    if p.degree() < 1 {
        return Vec::new();
    }
    let sturm = Sturm::new(p);
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = sturm.count(&lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 && &hi - &lo <= *eps {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}
