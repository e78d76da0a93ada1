//! The catalog of matrix models `(g, h)` and helpers for root planes of the
//! classical algebras in their defining representations.

use num_traits::Zero;
use regex::Regex;
use serde::{Deserialize, Serialize};

use super::matrix::{gq_int, CMatrix, GaussRat};
use super::ModelError;
use crate::exact_arith::linalg::{self, RatMatrix};
use crate::exact_arith::{rat_int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelName {
    /// `su(n)/su(n−1)`
    SuSu(usize),
    /// `su(n)/s(u(n−1)⊕u(1))`
    SuSu1(usize),
    /// `u(n)/u(n−1)`
    UU(usize),
    /// `sp(n)/sp(n−1)`
    SpSp(usize),
    /// `so(n)/so(n−1)`
    SoSo(usize),
    /// `sp(2)/su(2)` with the principal `su(2)`
    Berger,
    /// `su(5)/sp(2)⊕ℝ`
    Su5Sp2,
    /// `su(3)/t`
    Su3Torus,
    /// the printed `v(t)` matrices in `so(9)`; no `h` basis
    Spin9Family,
}

impl ModelName {
    pub fn parse(s: &str) -> Option<ModelName> {
        let t: String = s
            .to_lowercase()
            .replace('⊕', "+")
            .replace('ℝ', "r")
            .replace('−', "-")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        match t.as_str() {
            "sp(2)/su(2)-berger" | "sp(2)/su(2)" | "berger" => return Some(ModelName::Berger),
            "su(5)/sp(2)+r" | "su(5)/sp(2)+u(1)" => return Some(ModelName::Su5Sp2),
            "su(3)/t" | "su(3)/t2" => return Some(ModelName::Su3Torus),
            "spin9-vt-family" | "spin(9)/spin(7)" | "spin9" => return Some(ModelName::Spin9Family),
            _ => {}
        }
        let re = Regex::new(r"^(su|u|sp|so)\((\d+)\)/(su|u|sp|so|s\(u)\((\d+)\)(\+u\(1\)\))?$").ok()?;
        let c = re.captures(&t)?;
        let n: usize = c[2].parse().ok()?;
        let m: usize = c[4].parse().ok()?;
        if m + 1 != n {
            return None;
        }
        let name = match (&c[1], &c[3], c.get(5).is_some()) {
            ("su", "su", false) if n >= 2 => ModelName::SuSu(n),
            ("su", "s(u", true) if n >= 2 => ModelName::SuSu1(n),
            ("u", "u", false) if n >= 1 => ModelName::UU(n),
            ("sp", "sp", false) if n >= 1 => ModelName::SpSp(n),
            ("so", "so", false) if n >= 3 => ModelName::SoSo(n),
            _ => return None,
        };
        Some(name)
    }

    pub fn label(&self) -> String {
        match self {
            ModelName::SuSu(n) => format!("su({n})/su({})", n - 1),
            ModelName::SuSu1(n) => format!("su({n})/s(u({})⊕u(1))", n - 1),
            ModelName::UU(n) => format!("u({n})/u({})", n - 1),
            ModelName::SpSp(n) => format!("sp({n})/sp({})", n - 1),
            ModelName::SoSo(n) => format!("so({n})/so({})", n - 1),
            ModelName::Berger => "sp(2)/su(2)-Berger".into(),
            ModelName::Su5Sp2 => "su(5)/sp(2)⊕ℝ".into(),
            ModelName::Su3Torus => "su(3)/t".into(),
            ModelName::Spin9Family => "spin9-vt-family".into(),
        }
    }

    /// Models with a printed `v(t)` family.
    pub fn has_printed_family(&self) -> bool {
        matches!(
            self,
            ModelName::SuSu(_) | ModelName::SpSp(_) | ModelName::Berger | ModelName::Su5Sp2 | ModelName::Spin9Family
        )
    }
}

/// A compact matrix Lie algebra `g` with a subalgebra `h`. Elements satisfy
/// `X*G + G X = 0` for the diagonal form `G` (identity when `form` is `None`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixAlgebra {
    pub name: String,
    pub realization: String,
    pub dim_ambient: usize,
    pub g_basis: Vec<CMatrix>,
    pub h_basis: Vec<CMatrix>,
    pub h_known: bool,
    pub form: Option<Vec<Rational>>,
}

impl MatrixAlgebra {
    pub fn dim_g(&self) -> usize {
        self.g_basis.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h_basis.len()
    }

    /// Coordinates of `x` in `g_basis`, if `x ∈ g`.
    pub fn coords_in_g(&self, x: &CMatrix) -> Option<Vec<Rational>> {
        coords_in(&self.g_basis, x)
    }

    pub fn contains(&self, x: &CMatrix) -> bool {
        self.skew_for_form(x) && self.coords_in_g(x).is_some()
    }

    fn skew_for_form(&self, x: &CMatrix) -> bool {
        match &self.form {
            None => x.is_anti_hermitian(),
            Some(g) => {
                let n = self.dim_ambient;
                (0..n).all(|i| {
                    (0..n).all(|j| {
                        let a = x.get(j, i).conj() * &g[j];
                        let b = x.get(i, j) * &g[i];
                        (a + b).is_zero()
                    })
                })
            }
        }
    }

    /// Exact structural checks: bases lie in the skew set, `g` closes under
    /// brackets, `h ⊂ g` closes, and the inner product is positive on `g`.
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |what: &str| ModelError::InvalidModel(format!("{}: {what}", self.name));
        if self.g_basis.iter().any(|x| !self.skew_for_form(x)) {
            return Err(bad("g basis element is not skew for the form"));
        }
        if linalg::rank(&coord_rows(&self.g_basis)) != self.dim_g() {
            return Err(bad("g basis is dependent"));
        }
        for (i, a) in self.g_basis.iter().enumerate() {
            for b in &self.g_basis[i + 1..] {
                if self.coords_in_g(&a.bracket(b)).is_none() {
                    return Err(bad("g does not close under brackets"));
                }
            }
        }
        if self.h_known {
            if self.h_basis.iter().any(|x| self.coords_in_g(x).is_none()) {
                return Err(bad("h is not inside g"));
            }
            for (i, a) in self.h_basis.iter().enumerate() {
                for b in &self.h_basis[i + 1..] {
                    if coords_in(&self.h_basis, &a.bracket(b)).is_none() {
                        return Err(bad("h does not close under brackets"));
                    }
                }
            }
        }
        let gram: RatMatrix = gram(&self.g_basis);
        if !positive_definite(&gram) {
            return Err(bad("inner product is not positive definite on g"));
        }
        Ok(())
    }
}

pub(crate) fn coord_rows(xs: &[CMatrix]) -> RatMatrix {
    xs.iter().map(CMatrix::coords).collect()
}

/// Coordinates of `x` in the span of `basis`.
pub fn coords_in(basis: &[CMatrix], x: &CMatrix) -> Option<Vec<Rational>> {
    if basis.is_empty() {
        return x.is_zero().then(Vec::new);
    }
    let cols = coord_rows(basis);
    let target = x.coords();
    let m: RatMatrix = (0..target.len())
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    linalg::solve(&m, &target)
}

pub fn gram(xs: &[CMatrix]) -> RatMatrix {
    xs.iter()
        .map(|a| xs.iter().map(|b| a.inner(b)).collect())
        .collect()
}

/// Sylvester's criterion by exact elimination without pivoting.
fn positive_definite(m: &RatMatrix) -> bool {
    let mut a = m.clone();
    let n = a.len();
    for k in 0..n {
        if a[k][k] <= Rational::zero() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

fn unit(n: usize, i: usize, j: usize, v: GaussRat) -> CMatrix {
    let mut m = CMatrix::zero(n);
    m.set(i, j, v);
    m
}

/// `E_qp − E_pq`: the rotation generator turning coordinate `p` toward `q`.
pub fn rotation(n: usize, p: usize, q: usize) -> CMatrix {
    let mut m = CMatrix::zero(n);
    m.set(q, p, gq_int(1, 0));
    m.set(p, q, gq_int(-1, 0));
    m
}

pub fn so_basis(n: usize) -> Vec<CMatrix> {
    let mut v = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            v.push(rotation(n, p, q));
        }
    }
    v
}

/// Off-diagonal part of `su(n)`: `E_jk − E_kj` and `i(E_jk + E_kj)`.
fn su_offdiag(n: usize, upto: usize) -> Vec<CMatrix> {
    let mut v = Vec::new();
    for j in 0..upto {
        for k in j + 1..upto {
            v.push(rotation(n, k, j));
            let mut b = unit(n, j, k, gq_int(0, 1));
            b.set(k, j, gq_int(0, 1));
            v.push(b);
        }
    }
    v
}

fn diag_i(n: usize, d: &[i64]) -> CMatrix {
    CMatrix::from_fn(n, |i, j| if i == j { gq_int(0, d[i]) } else { GaussRat::zero() })
}

/// Torus of `su(k)` inside size `n`: `i(E_jj − E_{j+1,j+1})`.
fn su_torus(n: usize, k: usize) -> Vec<CMatrix> {
    (0..k.saturating_sub(1))
        .map(|j| {
            let mut d = vec![0; n];
            d[j] = 1;
            d[j + 1] = -1;
            diag_i(n, &d)
        })
        .collect()
}

pub fn su_basis(n: usize) -> Vec<CMatrix> {
    let mut v = su_offdiag(n, n);
    v.extend(su_torus(n, n));
    v
}

fn su_sub(n: usize, k: usize) -> Vec<CMatrix> {
    let mut v = su_offdiag(n, k);
    v.extend(su_torus(n, k));
    v
}

/// Quaternion `a + bi + cj + dk` as the 2×2 block `[[a+bi, c+di], [−c+di, a−bi]]`.
pub fn quaternion(q: [i64; 4]) -> [[GaussRat; 2]; 2] {
    let [a, b, c, d] = q;
    [[gq_int(a, b), gq_int(c, d)], [gq_int(-c, d), gq_int(a, -b)]]
}

/// Complex `2n × 2n` matrix of a quaternionic `n × n` matrix with entries
/// given sparsely as `(row, col, quaternion)`.
pub fn quaternionic(n: usize, entries: &[(usize, usize, [i64; 4])]) -> CMatrix {
    let mut m = CMatrix::zero(2 * n);
    for &(r, c, q) in entries {
        let b = quaternion(q);
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.add_at(2 * r + i, 2 * c + j, x);
            }
        }
    }
    m
}

const QI: [i64; 4] = [0, 1, 0, 0];
const QJ: [i64; 4] = [0, 0, 1, 0];
const QK: [i64; 4] = [0, 0, 0, 1];
const Q1: [i64; 4] = [1, 0, 0, 0];

fn conj_neg(q: [i64; 4]) -> [i64; 4] {
    [-q[0], q[1], q[2], q[3]]
}

/// `sp(k)` on the first `k` quaternionic coordinates of `H^n`.
fn sp_sub(n: usize, k: usize) -> Vec<CMatrix> {
    let mut v = Vec::new();
    for r in 0..k {
        for q in [QI, QJ, QK] {
            v.push(quaternionic(n, &[(r, r, q)]));
        }
    }
    for r in 0..k {
        for c in r + 1..k {
            for q in [Q1, QI, QJ, QK] {
                v.push(quaternionic(n, &[(r, c, q), (c, r, conj_neg(q))]));
            }
        }
    }
    v
}

pub fn sp_basis(n: usize) -> Vec<CMatrix> {
    sp_sub(n, n)
}

/// Torus element `Σ c_k H_{e_k}` of `sp(n)`: quaternionic `diag(c_k i)`.
pub fn sp_torus(n: usize, c: &[Rational]) -> CMatrix {
    let mut m = CMatrix::zero(2 * n);
    for (k, ck) in c.iter().enumerate() {
        m.set(2 * k, 2 * k, GaussRat::new(Rational::zero(), ck.clone()));
        m.set(2 * k + 1, 2 * k + 1, GaussRat::new(Rational::zero(), -ck.clone()));
    }
    m
}

/// The two real basis vectors of the root plane `g_{±γ}` of `sp(n)`, with
/// `γ` among `±2e_k`, `±e_k ± e_l` in standard coordinates.
pub fn sp_root_plane(n: usize, root: &[i64]) -> Option<[CMatrix; 2]> {
    let nz: Vec<usize> = (0..root.len()).filter(|&i| root[i] != 0).collect();
    match nz.as_slice() {
        [k] if root[*k].abs() == 2 && *k < n => {
            Some([quaternionic(n, &[(*k, *k, QJ)]), quaternionic(n, &[(*k, *k, QK)])])
        }
        [k, l] if root[*k].abs() == 1 && root[*l].abs() == 1 && *l < n => {
            let qs = if root[*k] * root[*l] < 0 { [Q1, QI] } else { [QJ, QK] };
            Some(qs.map(|q| quaternionic(n, &[(*k, *l, q), (*l, *k, conj_neg(q))])))
        }
        _ => None,
    }
}

/// Torus element `Σ c_k H_{e_k}` of `so(2n+1)` or `so(2n)`: rotation by
/// `c_k` in the coordinate plane `(2k, 2k+1)`.
pub fn so_torus(size: usize, c: &[Rational]) -> CMatrix {
    let mut m = CMatrix::zero(size);
    for (k, ck) in c.iter().enumerate() {
        let r = rotation(size, 2 * k, 2 * k + 1).scale(ck);
        m = &m + &r;
    }
    m
}

/// The two real basis vectors of the root plane `g_{±γ}` of `so(size)` for
/// `γ` among `±e_k` (odd size only) and `±e_k ± e_l`.
pub fn so_root_plane(size: usize, root: &[i64]) -> Option<[CMatrix; 2]> {
    let rank = size / 2;
    let nz: Vec<usize> = (0..root.len()).filter(|&i| root[i] != 0).collect();
    match nz.as_slice() {
        [k] if size % 2 == 1 && root[*k].abs() == 1 && *k < rank => Some([
            rotation(size, 2 * k, size - 1),
            rotation(size, 2 * k + 1, size - 1),
        ]),
        [k, l] if root[*k].abs() == 1 && root[*l].abs() == 1 && *l < rank => {
            // M acts from plane k to plane l; commuting with J gives e_k − e_l
            let ms: [[[i64; 2]; 2]; 2] = if root[*k] * root[*l] < 0 {
                [[[1, 0], [0, 1]], [[0, -1], [1, 0]]]
            } else {
                [[[1, 0], [0, -1]], [[0, 1], [1, 0]]]
            };
            Some(ms.map(|mm| {
                let mut x = CMatrix::zero(size);
                for (b, row) in mm.iter().enumerate() {
                    for (a, &v) in row.iter().enumerate() {
                        if v != 0 {
                            let r = rotation(size, 2 * k + a, 2 * l + b).scale(&rat_int(v));
                            x = &x + &r;
                        }
                    }
                }
                x
            }))
        }
        _ => None,
    }
}

/// The commuting pair printed in the proof that two `m`-roots at angle π/3
/// force a root of `h`.
pub fn lemma_pair_su3() -> (CMatrix, CMatrix) {
    let u = CMatrix::from_ints(&[&[0, 1, 1], &[-1, 0, 1], &[-1, -1, 0]]);
    let v = CMatrix::from_int_pairs(&[
        &[(0, 0), (0, 1), (0, -1)],
        &[(0, 1), (0, 0), (0, 1)],
        &[(0, -1), (0, 1), (0, 0)],
    ]);
    (u, v)
}

/// Traceless symmetric 3×3 matrices `S1..S5` and the coordinates of such a
/// matrix in that basis.
fn sym_basis() -> Vec<[[i64; 3]; 3]> {
    vec![
        [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
        [[1, 0, 0], [0, 1, 0], [0, 0, -2]],
        [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    ]
}

fn sym_coords(m: &[[Rational; 3]; 3]) -> [Rational; 5] {
    let b = -m[2][2].clone() / rat_int(2);
    let a = &m[0][0] - &b;
    [a, b, m[0][1].clone(), m[0][2].clone(), m[1][2].clone()]
}

/// The irreducible 5-dimensional representation of `so(3)` on traceless
/// symmetric matrices, `S ↦ LS − SL`, in the basis `S1..S5`.
fn berger_h() -> Vec<CMatrix> {
    let gens: [[[i64; 3]; 3]; 3] = [
        [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
        [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
    ];
    let basis = sym_basis();
    gens.iter()
        .map(|l| {
            let mut out = CMatrix::zero(5);
            for (col, s) in basis.iter().enumerate() {
                let mut c = [[0i64; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        c[i][j] = (0..3).map(|k| l[i][k] * s[k][j] - s[i][k] * l[k][j]).sum();
                    }
                }
                let cr: [[Rational; 3]; 3] = c.map(|row| row.map(rat_int));
                for (row, x) in sym_coords(&cr).into_iter().enumerate() {
                    out.set(row, col, GaussRat::new(x, Rational::zero()));
                }
            }
            out
        })
        .collect()
}

/// The diagonal Gram matrix `tr(S_a S_b)` of the basis `S1..S5`.
fn berger_form() -> Vec<Rational> {
    vec![rat_int(2), rat_int(6), rat_int(2), rat_int(2), rat_int(2)]
}

/// `so(G)` for diagonal `G`: the matrices `G⁻¹(E_pq − E_qp)`.
fn so_form_basis(form: &[Rational]) -> Vec<CMatrix> {
    let n = form.len();
    let mut v = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let mut m = CMatrix::zero(n);
            m.set(p, q, GaussRat::new(form[p].recip(), Rational::zero()));
            m.set(q, p, GaussRat::new(-form[q].recip(), Rational::zero()));
            v.push(m);
        }
    }
    v
}

pub fn build_model(name: ModelName) -> Result<MatrixAlgebra, ModelError> {
    let mk = |realization: &str, n: usize, g: Vec<CMatrix>, h: Vec<CMatrix>| MatrixAlgebra {
        name: name.label(),
        realization: realization.into(),
        dim_ambient: n,
        g_basis: g,
        h_basis: h,
        h_known: true,
        form: None,
    };
    let model = match name {
        ModelName::SuSu(n) => mk("complex n×n, h upper-left block", n, su_basis(n), su_sub(n, n - 1)),
        ModelName::SuSu1(n) => {
            let mut h = su_sub(n, n - 1);
            let mut d = vec![1; n];
            d[n - 1] = -(n as i64 - 1);
            h.push(diag_i(n, &d));
            mk("complex n×n, h block-diagonal", n, su_basis(n), h)
        }
        ModelName::UU(n) => {
            let mut g = su_basis(n);
            g.push(diag_i(n, &vec![1; n]));
            let mut h = su_sub(n, n - 1);
            if n >= 2 {
                let mut d = vec![1; n];
                d[n - 1] = 0;
                h.push(diag_i(n, &d));
            }
            mk("complex n×n, h upper-left block", n, g, h)
        }
        ModelName::SpSp(n) => mk(
            "quaternionic n×n as complex 2n×2n, h upper-left block",
            2 * n,
            sp_basis(n),
            sp_sub(n, n - 1),
        ),
        ModelName::SoSo(n) => {
            let h = so_basis(n - 1).iter().map(|x| x.embed(n, 0)).collect();
            mk("real n×n, h upper-left block", n, so_basis(n), h)
        }
        ModelName::Su3Torus => mk("complex 3×3, h diagonal", 3, su_basis(3), su_torus(3, 3)),
        ModelName::Su5Sp2 => {
            let mut h: Vec<CMatrix> = sp_basis(2).iter().map(|x| x.embed(5, 0)).collect();
            h.push(diag_i(5, &[1, 1, 1, 1, -4]));
            mk("complex 5×5, sp(2) quaternionic in the upper-left 4×4", 5, su_basis(5), h)
        }
        ModelName::Berger => {
            let form = berger_form();
            MatrixAlgebra {
                name: name.label(),
                realization: "so(5) ≅ sp(2) on traceless symmetric 3×3 matrices, skew for tr(ST); h the irreducible so(3)".into(),
                dim_ambient: 5,
                g_basis: so_form_basis(&form),
                h_basis: berger_h(),
                h_known: true,
                form: Some(form),
            }
        }
        ModelName::Spin9Family => MatrixAlgebra {
            name: name.label(),
            realization: "real 9×9; the spin(7) subalgebra is not constructed".into(),
            dim_ambient: 9,
            g_basis: so_basis(9),
            h_basis: Vec::new(),
            h_known: false,
            form: None,
        },
    };
    Ok(model)
}

/// Parse and build.
pub fn build_model_named(name: &str) -> Result<MatrixAlgebra, ModelError> {
    let n = ModelName::parse(name).ok_or_else(|| ModelError::Unsupported(name.to_string()))?;
    build_model(n)
}

pub fn catalog() -> Vec<ModelName> {
    vec![
        ModelName::SuSu(3),
        ModelName::SuSu(4),
        ModelName::SuSu1(3),
        ModelName::UU(3),
        ModelName::SpSp(2),
        ModelName::SpSp(3),
        ModelName::SoSo(4),
        ModelName::SoSo(5),
        ModelName::Berger,
        ModelName::Su5Sp2,
        ModelName::Su3Torus,
        ModelName::Spin9Family,
    ]
}
