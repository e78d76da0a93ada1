//! Eigenvalue sequences and the Condition (R) test: exact characteristic
//! polynomials, certified root isolation, and proportionality of spectra.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::algebra::{orth_complement, random_element};
use super::catalog::{build_model, coords_in, quaternionic, MatrixAlgebra, ModelName};
use super::matrix::{gq_int, CMatrix, GaussRat};
use super::poly::{isolate_real_roots, Poly};
use super::ModelError;
use crate::exact_arith::{rat, rat_int, Rational};

/// `det(λI − X)`, ascending coefficients, by Faddeev–LeVerrier.
pub fn charpoly(x: &CMatrix) -> Vec<GaussRat> {
    let n = x.size();
    let mut c = vec![GaussRat::zero(); n + 1];
    c[n] = GaussRat::one();
    let id = CMatrix::identity(n);
    let mut mk = CMatrix::zero(n);
    for k in 1..=n {
        mk = &(x * &mk) + &id.scale_c(&c[n - k + 1]);
        let tr = (x * &mk).trace();
        c[n - k] = -tr / GaussRat::new(rat_int(k as i64), Rational::zero());
    }
    c
}

fn i_pow(m: i64) -> GaussRat {
    match m.rem_euclid(4) {
        0 => gq_int(1, 0),
        1 => gq_int(0, 1),
        2 => gq_int(-1, 0),
        _ => gq_int(0, -1),
    }
}

/// `i^{−n} det(iμ − X)`: the monic real polynomial whose roots are the
/// imaginary parts of the eigenvalues of a skew matrix.
pub fn imaginary_charpoly(x: &CMatrix) -> Result<Poly, ModelError> {
    let n = x.size() as i64;
    let c = charpoly(x);
    let mut q = Vec::with_capacity(c.len());
    for (k, ck) in c.iter().enumerate() {
        let v = ck * i_pow(k as i64 - n);
        if !v.im.is_zero() {
            return Err(ModelError::NotSkew);
        }
        q.push(v.re);
    }
    Ok(Poly::new(q))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenSeq {
    /// Ascending coefficients of `i^{−n} det(iμ − X)`.
    pub charpoly: Vec<Rational>,
    /// Isolating intervals `(lo, hi]` of the distinct imaginary parts.
    pub roots: Vec<RootInterval>,
    /// Imaginary parts with multiplicity, ascending.
    pub values: Vec<f64>,
}

pub fn eigen_tolerance() -> Rational {
    Rational::new(1.into(), 1_000_000_000_000i64.into())
}

/// Certified, sorted imaginary parts of the eigenvalues of a skew matrix.
pub fn eigenvalue_sequence(x: &CMatrix) -> Result<EigenSeq, ModelError> {
    let q = imaginary_charpoly(x)?;
    let eps = eigen_tolerance();
    let mut roots = Vec::new();
    for (f, mult) in q.squarefree() {
        for (lo, hi) in isolate_real_roots(&f, &eps) {
            roots.push(RootInterval { lo, hi, multiplicity: mult });
        }
    }
    roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    if total != x.size() {
        return Err(ModelError::NotSkew);
    }
    let mut values = Vec::with_capacity(total);
    for r in &roots {
        let mid = ((&r.lo + &r.hi) / rat_int(2)).to_f64().unwrap_or(f64::NAN);
        values.extend(std::iter::repeat_n(mid, r.multiplicity));
    }
    Ok(EigenSeq {
        charpoly: q.0,
        roots,
        values,
    })
}

/// Power sums `p_1..p_n` of the roots of a monic polynomial, by Newton.
fn power_sums(q: &Poly) -> Vec<Rational> {
    let n = q.degree().max(0) as usize;
    let a = |k: usize| q.0[n - k].clone();
    let mut p = vec![Rational::zero(); n + 1];
    for k in 1..=n {
        let mut s = a(k) * rat_int(k as i64);
        for j in 1..k {
            s += a(j) * &p[k - j];
        }
        p[k] = -s;
    }
    p
}

fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

/// Whether the sorted eigenvalue sequences of `x` and `y` are linearly
/// dependent: `spec(y) = c · spec(x)` for some `c > 0`, or one is zero.
pub fn seq_dependent(x: &CMatrix, y: &CMatrix) -> Result<bool, ModelError> {
    if x.size() != y.size() {
        return Err(ModelError::Precondition("matrices of different size".into()));
    }
    if x.is_zero() || y.is_zero() {
        return Ok(true);
    }
    let px = power_sums(&imaginary_charpoly(x)?);
    let py = power_sums(&imaginary_charpoly(y)?);
    let n = x.size();
    if n < 2 || px[2].is_zero() || py[2].is_zero() {
        return Ok(px == py);
    }
    let c2 = &py[2] / &px[2];
    let odd = (1..=n).step_by(2).find(|&k| !px[k].is_zero());
    match odd {
        Some(k) => {
            let c = &py[k] / (&px[k] * pow(&c2, (k - 1) / 2));
            if !c.is_positive() || &c * &c != c2 {
                return Ok(false);
            }
            Ok((1..=n).all(|k| py[k] == pow(&c, k) * &px[k]))
        }
        None => Ok((1..=n).all(|k| {
            if k % 2 == 1 {
                py[k].is_zero()
            } else {
                py[k] == pow(&c2, k / 2) * &px[k]
            }
        })),
    }
}

/// The printed family `v(t) = base + t · dir` for the spaces whose non-
/// Riemannian normal metrics are exhibited through eigenvalue sequences.
pub fn printed_family(name: ModelName) -> Option<(CMatrix, CMatrix)> {
    match name {
        ModelName::SuSu(n) if n >= 3 => {
            let mut base = CMatrix::zero(n);
            for i in 0..n - 1 {
                base.set(i, i, gq_int(0, -1));
            }
            base.set(n - 1, n - 1, gq_int(0, n as i64 - 1));
            let mut dir = CMatrix::zero(n);
            dir.set(n - 2, n - 1, gq_int(1, 0));
            dir.set(n - 1, n - 2, gq_int(-1, 0));
            Some((base, dir))
        }
        ModelName::SpSp(n) if n >= 2 => {
            let base = quaternionic(n, &[(n - 1, n - 1, [0, 1, 0, 0])]);
            let dir = quaternionic(n, &[(n - 2, n - 1, [0, 0, 1, 0]), (n - 1, n - 2, [0, 0, 1, 0])]);
            Some((base, dir))
        }
        ModelName::Berger => {
            let base = CMatrix::from_int_pairs(&[
                &[(0, 1), (0, 0), (0, 0), (0, 0)],
                &[(0, 0), (0, -1), (0, 0), (0, 0)],
                &[(0, 0), (0, 0), (0, -3), (0, 0)],
                &[(0, 0), (0, 0), (0, 0), (0, 3)],
            ]);
            let dir = CMatrix::from_ints(&[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, 1, 0, 0], &[-1, 0, 0, 0]]);
            Some((base, dir))
        }
        ModelName::Su5Sp2 => {
            let mut base = CMatrix::zero(5);
            for (i, d) in [1, 1, -1, -1].into_iter().enumerate() {
                base.set(i, i, gq_int(0, d));
            }
            let mut dir = CMatrix::zero(5);
            dir.set(3, 4, gq_int(1, 0));
            dir.set(4, 3, gq_int(-1, 0));
            Some((base, dir))
        }
        ModelName::Spin9Family => {
            let mut base = CMatrix::zero(9);
            for p in [1, 3, 5, 7] {
                base.set(p, p + 1, gq_int(1, 0));
                base.set(p + 1, p, gq_int(-1, 0));
            }
            let mut dir = CMatrix::zero(9);
            dir.set(0, 1, gq_int(1, 0));
            dir.set(1, 0, gq_int(-1, 0));
            Some((base, dir))
        }
        _ => None,
    }
}

pub fn family_at(name: ModelName, t: &Rational) -> Option<CMatrix> {
    printed_family(name).map(|(b, d)| &b + &d.scale(t))
}

/// A subspace of `sp(2)` (quaternionic 2×2) containing the principal
/// `su(2)`: the torus element `diag(3i, i)`, and the root vectors of
/// `e1−e2` and `2e2` that its raising operator combines.
pub fn berger_h_envelope() -> Vec<CMatrix> {
    vec![
        quaternionic(2, &[(0, 0, [0, 3, 0, 0]), (1, 1, [0, 1, 0, 0])]),
        quaternionic(2, &[(0, 1, [1, 0, 0, 0]), (1, 0, [-1, 0, 0, 0])]),
        quaternionic(2, &[(0, 1, [0, 1, 0, 0]), (1, 0, [0, 1, 0, 0])]),
        quaternionic(2, &[(1, 1, [0, 0, 1, 0])]),
        quaternionic(2, &[(1, 1, [0, 0, 0, 1])]),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    /// `v(t) ∈ m` checked exactly in the model.
    Verified,
    /// Checked against a subspace that contains `h`.
    VerifiedSufficient,
    /// Taken as given.
    Unverified(String),
    Failed(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplePair {
    pub a: String,
    pub b: String,
    pub dependent: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionRReport {
    pub space: String,
    pub samples: Vec<String>,
    pub pairs: Vec<SamplePair>,
    pub dependent_pairs: usize,
    pub fails_condition_r: bool,
    pub family_membership: Option<Membership>,
    pub verdict: String,
}

fn family_membership(name: ModelName, model: &MatrixAlgebra, members: &[CMatrix]) -> Membership {
    match name {
        ModelName::Spin9Family => Membership::Unverified(
            "the spin(7) subalgebra is not constructed; membership of v(t) in m is taken as given".into(),
        ),
        ModelName::Berger => {
            let sp2 = build_model(ModelName::SpSp(2)).expect("sp(2) builds");
            let env = berger_h_envelope();
            let ok = members.iter().all(|v| {
                coords_in(&sp2.g_basis, v).is_some() && env.iter().all(|e| v.inner(e).is_zero())
            });
            if ok {
                Membership::VerifiedSufficient
            } else {
                Membership::Failed("v(t) meets the span containing su(2)".into())
            }
        }
        _ => {
            let ok = members
                .iter()
                .all(|v| model.contains(v) && model.h_basis.iter().all(|h| v.inner(h).is_zero()));
            if ok {
                Membership::Verified
            } else {
                Membership::Failed("v(t) is not in m".into())
            }
        }
    }
}

/// Eigenvalue-sequence test of Condition (R): the printed family (if any)
/// at `v(0)` against each `v(t)`, plus `random_pairs` random pairs from `m`.
pub fn condition_r_report(
    name: ModelName,
    t_samples: &[Rational],
    random_pairs: usize,
    seed: u64,
) -> Result<ConditionRReport, ModelError> {
    let model = build_model(name)?;
    let mut pairs = Vec::new();
    let mut membership = None;
    if let Some((base, _)) = printed_family(name) {
        let members: Vec<CMatrix> = std::iter::once(base.clone())
            .chain(t_samples.iter().filter_map(|t| family_at(name, t)))
            .collect();
        membership = Some(family_membership(name, &model, &members));
        for (t, vt) in t_samples.iter().zip(&members[1..]) {
            pairs.push(SamplePair {
                a: "v(0)".into(),
                b: format!("v({t})"),
                dependent: seq_dependent(&base, vt)?,
            });
        }
    }
    if model.h_known && random_pairs > 0 {
        let m = orth_complement(&model)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..random_pairs {
            let x = random_element(&m, &mut rng, 3);
            let y = random_element(&m, &mut rng, 3);
            pairs.push(SamplePair {
                a: format!("X{k}"),
                b: format!("Y{k}"),
                dependent: seq_dependent(&x, &y)?,
            });
        }
    }
    let dependent_pairs = pairs.iter().filter(|p| p.dependent).count();
    let fails = dependent_pairs < pairs.len();
    Ok(ConditionRReport {
        space: name.label(),
        samples: t_samples.iter().map(|t| t.to_string()).collect(),
        dependent_pairs,
        fails_condition_r: fails,
        family_membership: membership,
        verdict: if fails {
            "fails Condition (R): non-Riemannian normal metrics exist".into()
        } else {
            "no witness found".into()
        },
        pairs,
    })
}

pub fn default_t_samples() -> Vec<Rational> {
    vec![rat(1, 10), rat(1, 2)]
}
