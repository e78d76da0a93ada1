//! Exact linear algebra on matrix models: complements, centralizers, centers,
//! the flat-splitting test and the search for commuting pairs in `m`.

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::catalog::{coord_rows, coords_in, gram, MatrixAlgebra};
use super::matrix::CMatrix;
use super::ModelError;
use crate::exact_arith::linalg::{self, RatMatrix};
use crate::exact_arith::{rat_int, Rational};
use crate::par::Exec;

fn combos(basis: &[CMatrix], coeffs: &[Vec<Rational>]) -> Vec<CMatrix> {
    coeffs.iter().map(|c| CMatrix::combination(basis, c)).collect()
}

/// Matrix whose columns are the real coordinates of `f(b)` for `b` in `basis`.
fn column_system(basis: &[CMatrix], f: impl Fn(&CMatrix) -> Vec<Rational>) -> RatMatrix {
    let cols: Vec<Vec<Rational>> = basis.iter().map(f).collect();
    let rows = cols.first().map_or(0, Vec::len);
    (0..rows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Exact basis of the orthogonal complement `m` of `h` in `g`.
pub fn orth_complement(model: &MatrixAlgebra) -> Result<Vec<CMatrix>, ModelError> {
    if !model.h_known {
        return Err(ModelError::NoSubalgebra(model.name.clone()));
    }
    let rows: RatMatrix = model
        .h_basis
        .iter()
        .map(|h| model.g_basis.iter().map(|g| g.inner(h)).collect())
        .collect();
    let ker = linalg::nullspace(&rows, model.dim_g());
    if ker.len() + model.dim_h() != model.dim_g() {
        return Err(ModelError::Degenerate(model.name.clone()));
    }
    Ok(combos(&model.g_basis, &ker))
}

/// `{Y ∈ span(space) : [X, Y] = 0 for all X in xs}`.
pub fn centralizer_in(space: &[CMatrix], xs: &[CMatrix]) -> Vec<CMatrix> {
    if space.is_empty() {
        return Vec::new();
    }
    let m = column_system(space, |b| xs.iter().flat_map(|x| x.bracket(b).coords()).collect());
    combos(space, &linalg::nullspace(&m, space.len()))
}

pub fn centralizer(model: &MatrixAlgebra, xs: &[CMatrix]) -> Vec<CMatrix> {
    centralizer_in(&model.g_basis, xs)
}

/// Center of the Lie algebra spanned by `basis`.
pub fn center(basis: &[CMatrix]) -> Vec<CMatrix> {
    centralizer_in(basis, basis)
}

/// `center(centralizer(xs))`: the intersection of all Cartan subalgebras
/// containing the abelian span of `xs`.
pub fn cartan_intersection(model: &MatrixAlgebra, xs: &[CMatrix]) -> Vec<CMatrix> {
    center(&centralizer(model, xs))
}

pub fn span_dim(xs: &[CMatrix]) -> usize {
    linalg::rank(&coord_rows(xs))
}

pub fn in_span(basis: &[CMatrix], x: &CMatrix) -> bool {
    coords_in(basis, x).is_some()
}

fn orthogonal_to(x: &CMatrix, ys: &[CMatrix]) -> bool {
    ys.iter().all(|y| x.inner(y).is_zero())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatWitness {
    pub u: CMatrix,
    pub v: CMatrix,
    pub s0_basis: Vec<CMatrix>,
    pub split_ok: bool,
    pub dim_m_part: usize,
    pub dim_h_part: usize,
}

impl FlatWitness {
    /// Re-derive every claimed property from scratch.
    pub fn check(&self, model: &MatrixAlgebra) -> bool {
        let s0 = cartan_intersection(model, &[self.u.clone(), self.v.clone()]);
        self.u.bracket(&self.v).is_zero()
            && orthogonal_to(&self.u, &model.h_basis)
            && orthogonal_to(&self.v, &model.h_basis)
            && span_dim(&s0) == span_dim(&self.s0_basis)
            && self.s0_basis.iter().all(|x| in_span(&s0, x))
            && in_span(&s0, &self.u)
            && in_span(&s0, &self.v)
            && splitting(model, &s0).is_some_and(|(ok, dm, _)| ok && dm == self.dim_m_part && dm >= 2)
    }
}

/// For `s ⊂ g`: whether `s = (s∩h) + (s∩m)`, with `dim s∩m` and `dim s∩h`.
fn splitting(model: &MatrixAlgebra, s: &[CMatrix]) -> Option<(bool, usize, usize)> {
    let h = &model.h_basis;
    let gh = gram(h);
    let rows: RatMatrix = h
        .iter()
        .map(|hj| s.iter().map(|x| x.inner(hj)).collect())
        .collect();
    let dim_m = if h.is_empty() {
        s.len()
    } else {
        linalg::nullspace(&rows, s.len()).len()
    };
    let mut split = true;
    for x in s {
        let rhs: Vec<Rational> = h.iter().map(|hj| x.inner(hj)).collect();
        let a = if h.is_empty() { Vec::new() } else { linalg::solve(&gh, &rhs)? };
        let ph = CMatrix::combination(h, &a);
        if !in_span(s, &ph) {
            split = false;
            break;
        }
    }
    let dim_h = s.len() - dim_m;
    Some((split, dim_m, if split { dim_h } else { 0 }))
}

/// Flat-splitting test for a commuting independent pair `u, v ∈ m`.
pub fn flat_splitting_test(
    model: &MatrixAlgebra,
    u: &CMatrix,
    v: &CMatrix,
) -> Result<Option<FlatWitness>, ModelError> {
    if !model.h_known {
        return Err(ModelError::NoSubalgebra(model.name.clone()));
    }
    let pre = |what: &str| Err(ModelError::Precondition(what.to_string()));
    if !model.contains(u) || !model.contains(v) {
        return pre("u and v must lie in g");
    }
    if !orthogonal_to(u, &model.h_basis) || !orthogonal_to(v, &model.h_basis) {
        return pre("u and v must lie in m");
    }
    if !u.bracket(v).is_zero() {
        return pre("[u, v] must vanish");
    }
    if span_dim(&[u.clone(), v.clone()]) != 2 {
        return pre("u and v must be linearly independent");
    }
    let s0 = cartan_intersection(model, &[u.clone(), v.clone()]);
    let Some((split_ok, dim_m_part, dim_h_part)) = splitting(model, &s0) else {
        return Err(ModelError::Degenerate(model.name.clone()));
    };
    if split_ok && dim_m_part >= 2 {
        Ok(Some(FlatWitness {
            u: u.clone(),
            v: v.clone(),
            s0_basis: s0,
            split_ok,
            dim_m_part,
            dim_h_part,
        }))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStage {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutingSearch {
    pub pair: Option<(CMatrix, CMatrix)>,
    pub stage: Option<SearchStage>,
    /// Stage (i) found a pair.
    pub exact_found: bool,
    /// Smallest `‖[X,Y]‖²` over orthonormal `X, Y ∈ m` seen by stage (ii).
    pub numeric_min: f64,
    /// Stage (ii) reached the tolerance.
    pub numeric_zero: bool,
    /// Stage (ii) produced an exactly verified pair after rationalization.
    pub numeric_certified: bool,
    pub candidates_tried: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub max_terms: usize,
    pub starts: usize,
    pub iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub max_denominator: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_terms: 3,
            starts: 24,
            iterations: 4000,
            tolerance: 1e-10,
            seed: 0x5eed,
            max_denominator: 1_000_000,
        }
    }
}

/// Coefficient vectors with at most `k` nonzero entries in `{±1}`, first
/// nonzero entry `+1`.
fn sign_combinations(d: usize, k: usize) -> Vec<Vec<i64>> {
    fn rec(d: usize, k: usize, start: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let used = cur.iter().filter(|&&x| x != 0).count();
        if used > 0 {
            out.push(cur.clone());
        }
        if used == k {
            return;
        }
        for i in start..d {
            let signs: &[i64] = if used == 0 { &[1] } else { &[1, -1] };
            for &s in signs {
                cur[i] = s;
                rec(d, k, i + 1, cur, out);
                cur[i] = 0;
            }
        }
    }
    let mut out = Vec::new();
    rec(d, k, 0, &mut vec![0; d], &mut out);
    out.sort_by_key(|c| c.iter().filter(|&&x| x != 0).count());
    out
}

/// A partner for `u` in `span(m)`, independent of `u`, commuting with it.
pub fn commuting_partner(m: &[CMatrix], u: &CMatrix) -> Option<CMatrix> {
    let ker = centralizer_in(m, std::slice::from_ref(u));
    ker.into_iter()
        .find(|w| span_dim(&[u.clone(), w.clone()]) == 2)
}

fn exact_stage(m: &[CMatrix], cfg: &SearchConfig, exec: Exec) -> (Option<(CMatrix, CMatrix)>, usize) {
    let cands = sign_combinations(m.len(), cfg.max_terms);
    let found = exec.map_range(cands.len(), |i| {
        let c: Vec<Rational> = cands[i].iter().map(|&x| rat_int(x)).collect();
        let u = CMatrix::combination(m, &c);
        commuting_partner(m, &u).map(|v| (u, v))
    });
    (found.into_iter().flatten().next(), cands.len())
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    Rational::new((h1 as i64).into(), (k1 as i64).into())
}

struct NumericProblem {
    d: usize,
    /// `T` with coefficients `c = T x̃` for orthonormal coordinates `x̃`.
    t: DMatrix<f64>,
    /// `B̃_ab` flattened, each of length `len`.
    b: Vec<Vec<f64>>,
    len: usize,
}

impl NumericProblem {
    fn new(m: &[CMatrix]) -> Option<Self> {
        let d = m.len();
        let g = gram(m);
        let gf = DMatrix::from_fn(d, d, |i, j| g[i][j].to_f64().unwrap_or(f64::NAN));
        let chol = gf.cholesky()?;
        let t = chol.l().transpose().try_inverse()?;
        let raw: Vec<Vec<f64>> = (0..d * d)
            .map(|k| {
                let (i, j) = (k / d, k % d);
                m[i].bracket(&m[j])
                    .to_f64()
                    .into_iter()
                    .flat_map(|(a, b)| [a, b])
                    .collect()
            })
            .collect();
        let len = raw.first().map_or(0, Vec::len);
        let mut b = vec![vec![0.0; len]; d * d];
        for a in 0..d {
            for bb in 0..d {
                let out = &mut b[a * d + bb];
                for i in 0..d {
                    let tia = t[(i, a)];
                    if tia == 0.0 {
                        continue;
                    }
                    for j in 0..d {
                        let w = tia * t[(j, bb)];
                        if w == 0.0 {
                            continue;
                        }
                        for (o, r) in out.iter_mut().zip(&raw[i * d + j]) {
                            *o += w * r;
                        }
                    }
                }
            }
        }
        Some(NumericProblem { d, t, b, len })
    }

    fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.len];
        for a in 0..self.d {
            for bb in 0..self.d {
                let w = x[a] * y[bb];
                if w == 0.0 {
                    continue;
                }
                for (o, r) in c.iter_mut().zip(&self.b[a * self.d + bb]) {
                    *o += w * r;
                }
            }
        }
        c
    }

    fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        self.bracket(x, y).iter().map(|v| v * v).sum()
    }

    fn grad(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let c = self.bracket(x, y);
        let mut gx = vec![0.0; self.d];
        let mut gy = vec![0.0; self.d];
        for a in 0..self.d {
            for bb in 0..self.d {
                let ip: f64 = c.iter().zip(&self.b[a * self.d + bb]).map(|(p, q)| p * q).sum();
                gx[a] += 2.0 * y[bb] * ip;
                gy[bb] += 2.0 * x[a] * ip;
            }
        }
        (gx, gy)
    }

    fn coefficients(&self, x: &[f64]) -> Vec<f64> {
        (0..self.d)
            .map(|i| (0..self.d).map(|a| self.t[(i, a)] * x[a]).sum())
            .collect()
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|a| *a /= n);
    }
}

fn retract(x: &mut [f64], y: &mut [f64]) {
    normalize(x);
    let p: f64 = x.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
    y.iter_mut().zip(x.iter()).for_each(|(b, a)| *b -= p * a);
    normalize(y);
}

fn descend(p: &NumericProblem, mut x: Vec<f64>, mut y: Vec<f64>, cfg: &SearchConfig) -> (f64, Vec<f64>, Vec<f64>) {
    retract(&mut x, &mut y);
    let mut f = p.value(&x, &y);
    let mut eta = 0.1;
    for _ in 0..cfg.iterations {
        if f < cfg.tolerance * 1e-2 {
            break;
        }
        let (gx, gy) = p.grad(&x, &y);
        let mut accepted = false;
        for _ in 0..40 {
            let mut nx: Vec<f64> = x.iter().zip(&gx).map(|(a, g)| a - eta * g).collect();
            let mut ny: Vec<f64> = y.iter().zip(&gy).map(|(a, g)| a - eta * g).collect();
            retract(&mut nx, &mut ny);
            let nf = p.value(&nx, &ny);
            if nf < f {
                x = nx;
                y = ny;
                f = nf;
                eta *= 1.5;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f, x, y)
}

fn numeric_stage(
    m: &[CMatrix],
    cfg: &SearchConfig,
    exec: Exec,
) -> (f64, Option<(CMatrix, CMatrix)>) {
    let Some(p) = NumericProblem::new(m) else {
        return (f64::NAN, None);
    };
    let d = p.d;
    if d < 2 {
        return (f64::INFINITY, None);
    }
    let runs = exec.map_range(cfg.starts, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(s as u64));
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        descend(&p, x, y, cfg)
    });
    let (best_i, best) = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)))
        .expect("at least one start");
    let _ = best_i;
    let (fmin, x, y) = best.clone();
    if fmin >= cfg.tolerance {
        return (fmin, None);
    }
    let cx = p.coefficients(&x);
    let cy = p.coefficients(&y);
    let mut den = 10;
    while den <= cfg.max_denominator {
        let rx: Vec<Rational> = cx.iter().map(|&v| rationalize(v, den)).collect();
        let ry: Vec<Rational> = cy.iter().map(|&v| rationalize(v, den)).collect();
        let u = CMatrix::combination(m, &rx);
        let v = CMatrix::combination(m, &ry);
        if span_dim(&[u.clone(), v.clone()]) == 2 && u.bracket(&v).is_zero() {
            return (fmin, Some((u, v)));
        }
        if !u.is_zero() {
            if let Some(w) = commuting_partner(m, &u) {
                return (fmin, Some((u, w)));
            }
        }
        den *= 10;
    }
    (fmin, None)
}

/// Search `m` for a linearly independent commuting pair: exact candidate
/// search first, then multistart descent with exact re-verification.
pub fn commuting_pair_search(
    model: &MatrixAlgebra,
    cfg: &SearchConfig,
    exec: Exec,
) -> Result<CommutingSearch, ModelError> {
    let m = orth_complement(model)?;
    Ok(search_in(&m, cfg, exec))
}

pub fn search_in(m: &[CMatrix], cfg: &SearchConfig, exec: Exec) -> CommutingSearch {
    let (exact, tried) = exact_stage(m, cfg, exec);
    let (numeric_min, numeric_pair) = numeric_stage(m, cfg, exec);
    let exact_found = exact.is_some();
    let numeric_certified = numeric_pair.is_some();
    let (pair, stage) = match (exact, numeric_pair) {
        (Some(p), _) => (Some(p), Some(SearchStage::Exact)),
        (None, Some(p)) => (Some(p), Some(SearchStage::Numeric)),
        (None, None) => (None, None),
    };
    CommutingSearch {
        pair,
        stage,
        exact_found,
        numeric_min,
        numeric_zero: numeric_min < cfg.tolerance,
        numeric_certified,
        candidates_tried: tried,
    }
}

/// Random element of `span(basis)` with integer coefficients in `[-k, k]`.
pub fn random_element(basis: &[CMatrix], rng: &mut impl Rng, k: i64) -> CMatrix {
    loop {
        let c: Vec<Rational> = basis.iter().map(|_| rat_int(rng.gen_range(-k..=k))).collect();
        let x = CMatrix::combination(basis, &c);
        if !x.is_zero() {
            return x;
        }
    }
}
