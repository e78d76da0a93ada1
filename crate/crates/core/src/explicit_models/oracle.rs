//! Matrix-level resolution of corank-one seeds that the root-level rules
//! saturate without a contradiction. Each check builds `g` as a classical
//! matrix algebra and either exhibits an exact flat-splitting witness or
//! confirms a positively curved model.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::{cartan_intersection, commuting_pair_search, in_span, span_dim, SearchConfig};
use super::catalog::{
    build_model, coord_rows, rotation, so_basis, so_root_plane, so_torus, sp_basis, sp_root_plane, sp_torus,
    MatrixAlgebra, ModelName,
};
use super::matrix::CMatrix;
use super::spectrum::seq_dependent;
use crate::corank_engine::{CaseState, CaseVerdict, PlaneLabel};
use crate::exact_arith::linalg;
use crate::exact_arith::{rat_int, ExactVector, Rational};
use crate::par::Exec;
use crate::root_systems::{SumDiff, TypeLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleOutcome {
    /// A commuting pair in `m` with a splitting Cartan intersection exists.
    Refuted,
    /// The saturated data is realized by a model with no commuting pair in `m`.
    Confirmed,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleWitness {
    /// Roots of `g` whose planes carry `u` and `v`.
    pub roots: Vec<ExactVector>,
    pub u: CMatrix,
    pub v: CMatrix,
    /// Basis of `center(centralizer(u, v))`.
    pub s0_basis: Vec<CMatrix>,
    /// Torus directions of the flat, all in `t ∩ h`.
    pub torus: Vec<ExactVector>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub method: String,
    pub model: String,
    pub outcome: OracleOutcome,
    pub detail: String,
    pub witness: Option<OracleWitness>,
}

impl OracleReport {
    fn inconclusive(method: &str, model: &str, detail: String) -> OracleReport {
        OracleReport {
            method: method.into(),
            model: model.into(),
            outcome: OracleOutcome::Inconclusive,
            detail,
            witness: None,
        }
    }
}

/// `g` realized as `so(2n+1)`, `sp(n)` or `so(2n)` with standard root coordinates.
pub struct ClassicalAmbient {
    pub label: TypeLabel,
    pub rank: usize,
    pub algebra: MatrixAlgebra,
}

impl ClassicalAmbient {
    pub fn new(label: TypeLabel, rank: usize) -> Option<ClassicalAmbient> {
        let (name, g) = match label {
            TypeLabel::B if rank >= 2 => (format!("so({})", 2 * rank + 1), so_basis(2 * rank + 1)),
            TypeLabel::C if rank >= 2 => (format!("sp({rank})"), sp_basis(rank)),
            TypeLabel::D if rank >= 3 => (format!("so({})", 2 * rank), so_basis(2 * rank)),
            _ => return None,
        };
        let size = g[0].size();
        Some(ClassicalAmbient {
            label,
            rank,
            algebra: MatrixAlgebra {
                name,
                realization: "standard matrices, torus in 2×2 blocks".into(),
                dim_ambient: size,
                g_basis: g,
                h_basis: Vec::new(),
                h_known: false,
                form: None,
            },
        })
    }

    pub fn size(&self) -> usize {
        self.algebra.dim_ambient
    }

    pub fn torus(&self, c: &[Rational]) -> CMatrix {
        match self.label {
            TypeLabel::C => sp_torus(self.rank, c),
            _ => so_torus(self.size(), c),
        }
    }

    /// Both basis vectors of `g_{±γ}`, each checked against
    /// `ad(H)² X = −γ(H)² X` on a regular torus element.
    pub fn plane(&self, root: &[i64]) -> Option<[CMatrix; 2]> {
        let p = match self.label {
            TypeLabel::C => sp_root_plane(self.rank, root)?,
            _ => so_root_plane(self.size(), root)?,
        };
        let c: Vec<Rational> = (0..self.rank).map(|k| rat_int(3 * k as i64 + 2)).collect();
        let h = self.torus(&c);
        let g: i64 = root.iter().zip(1..).map(|(&r, k)| r * (3 * k - 1)).sum();
        let ok = p.iter().all(|x| {
            let y = h.bracket(&h.bracket(x));
            (&y + &x.scale(&rat_int(g * g))).is_zero()
        });
        ok.then_some(p)
    }
}

fn int_coords(v: &ExactVector) -> Option<Vec<i64>> {
    v.coords
        .iter()
        .map(|c| {
            let r = c.as_rational()?;
            r.is_integer().then(|| r.to_integer().to_i64()).flatten()
        })
        .collect()
}

fn rat_coords(v: &ExactVector) -> Option<Vec<Rational>> {
    v.coords.iter().map(|c| c.as_rational().cloned()).collect()
}

fn ambient_for(st: &CaseState<'_>) -> Option<ClassicalAmbient> {
    let rs = st.rs();
    if rs.factors.len() != 1 {
        return None;
    }
    let ty = rs.factors[0].ty;
    ClassicalAmbient::new(ty.label, ty.rank)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Span of `xs` intersected with the torus, as coefficient vectors in `e_k`.
fn torus_part(amb: &ClassicalAmbient, xs: &[CMatrix]) -> Vec<Vec<Rational>> {
    let units: Vec<CMatrix> = (0..amb.rank)
        .map(|k| {
            let mut c = vec![Rational::zero(); amb.rank];
            c[k] = rat_int(1);
            amb.torus(&c)
        })
        .collect();
    let dim = xs[0].coords().len();
    let ts = coord_rows(&units);
    let common = linalg::intersect(&coord_rows(xs), &ts, dim);
    common
        .iter()
        .filter_map(|row| {
            let x = CMatrix::from_real_coords(amb.size(), row);
            super::catalog::coords_in(&units, &x)
        })
        .collect()
}

/// Search pairs of `m`-planes whose roots have neither sum nor difference a
/// root: `u ∈ g_γ1`, `v ∈ g_γ2` commute, and when `s0 = span(u, v) ⊕ S` with
/// `S` in the torus, `s0` splits exactly when `z ∈ S` or `z ⊥ S`.
pub fn vector_flat_search(st: &CaseState<'_>) -> OracleReport {
    const METHOD: &str = "commuting root vectors";
    let Some(amb) = ambient_for(st) else {
        return OracleReport::inconclusive(METHOD, "-", "no classical matrix model for g".into());
    };
    let model = amb.algebra.name.clone();
    let rs = st.rs();
    let Some(z) = rat_coords(&st.proj.z) else {
        return OracleReport::inconclusive(METHOD, &model, "z is not rational".into());
    };
    let ms: Vec<usize> = (0..st.planes.len())
        .filter(|&p| st.labels[p] == PlaneLabel::M)
        .collect();
    let mut tried = 0;
    for (i, &p) in ms.iter().enumerate() {
        for &q in &ms[i + 1..] {
            let (a, b) = (st.planes.root[p], st.planes.root[q]);
            if rs.sum_diff_status_idx(a, b) != SumDiff::Neither {
                continue;
            }
            let (Some(ra), Some(rb)) = (int_coords(rs.root(a)), int_coords(rs.root(b))) else {
                continue;
            };
            let (Some(pa), Some(pb)) = (amb.plane(&ra), amb.plane(&rb)) else {
                continue;
            };
            tried += 1;
            let (u, v) = (pa[0].clone(), pb[0].clone());
            if !u.bracket(&v).is_zero() {
                continue;
            }
            let s0 = cartan_intersection(&amb.algebra, &[u.clone(), v.clone()]);
            let s = torus_part(&amb, &s0);
            if span_dim(&s0) != 2 + s.len() {
                continue;
            }
            let z_in = {
                let mut rows = s.clone();
                rows.push(z.clone());
                linalg::rank(&rows) == s.len()
            };
            let z_perp = s.iter().all(|x| dot(x, &z).is_zero());
            if z_in || z_perp {
                let torus: Vec<ExactVector> = s.iter().map(|x| ExactVector::from_rationals(x)).collect();
                return OracleReport {
                    method: METHOD.into(),
                    model,
                    outcome: OracleOutcome::Refuted,
                    detail: format!(
                        "u ∈ g_{}, v ∈ g_{} commute in m; center of their centralizer is span(u, v) ⊕ {}-dimensional torus {}",
                        rs.root(a),
                        rs.root(b),
                        s.len(),
                        if z_in { "containing z" } else { "orthogonal to z" }
                    ),
                    witness: Some(OracleWitness {
                        roots: vec![rs.root(a).clone(), rs.root(b).clone()],
                        u,
                        v,
                        s0_basis: s0,
                        torus,
                    }),
                };
            }
        }
    }
    OracleReport::inconclusive(METHOD, &model, format!("{tried} commuting m-plane pairs, none splits"))
}

/// The 3×2 block of a `Hom(ℝ², ℝ³)` element: rows index `rows3`, columns `cols2`.
fn hom_element(size: usize, rows3: &[usize; 3], cols2: &[usize; 2], a: &[Rational; 6]) -> CMatrix {
    let mut x = CMatrix::zero(size);
    for (r, &row) in rows3.iter().enumerate() {
        for (c, &col) in cols2.iter().enumerate() {
            let e = &a[2 * r + c];
            if !e.is_zero() {
                x = &x + &rotation(size, col, row).scale(e);
            }
        }
    }
    x
}

/// Checks, as an identity of quadratic forms on the 3×2 matrices `A`, that the
/// `so(3)` block of `[v(A), [H, v(A)]]` is `κ` times the 2×2 minors of `A`.
/// Returns `κ`.
fn minor_identity(size: usize, rows3: &[usize; 3], cols2: &[usize; 2]) -> Option<Rational> {
    let h = rotation(size, cols2[0], cols2[1]);
    let block = |a: &[Rational; 6]| -> Option<[Rational; 3]> {
        let v = hom_element(size, rows3, cols2, a);
        let w = v.bracket(&h.bracket(&v));
        if !w.is_real() {
            return None;
        }
        let pairs = [(0, 1), (0, 2), (1, 2)];
        Some(pairs.map(|(i, j)| w.get(rows3[i], rows3[j]).re.clone()))
    };
    let minors = |a: &[Rational; 6]| -> [Rational; 3] {
        let pairs = [(0, 1), (0, 2), (1, 2)];
        pairs.map(|(i, j)| &a[2 * i] * &a[2 * j + 1] - &a[2 * i + 1] * &a[2 * j])
    };
    let unit = |i: usize, j: usize| -> [Rational; 6] {
        let mut a: [Rational; 6] = Default::default();
        a[i] += rat_int(1);
        a[j] += rat_int(1);
        a
    };
    let mut kappa: Option<Rational> = None;
    for i in 0..6 {
        for j in i..6 {
            let a = if i == j {
                let mut a: [Rational; 6] = Default::default();
                a[i] = rat_int(1);
                a
            } else {
                unit(i, j)
            };
            let (q, m) = (block(&a)?, minors(&a));
            for (x, y) in q.iter().zip(&m) {
                if y.is_zero() {
                    if !x.is_zero() {
                        return None;
                    }
                    continue;
                }
                let r = x / y;
                match &kappa {
                    None => kappa = Some(r),
                    Some(k) if *k != r => return None,
                    _ => {}
                }
            }
        }
    }
    kappa.filter(|k| !k.is_zero())
}

/// `so(2n+1)`, an `h`-class carried by `s − ζ, s, s + ζ` with `s`, `ζ` short
/// and `ζ ∥ z`: the `h`-part over these planes is `so(3)` on a rank-one
/// `Hom(ℝ², ℝ³)` element, conjugate into `g_s`. In that frame `g_{s±ζ}` and
/// the torus orthogonal to `s, ζ` span a splitting flat.
pub fn conjugated_plane_flat(st: &CaseState<'_>) -> OracleReport {
    const METHOD: &str = "conjugated root-plane flat";
    let Some(amb) = ambient_for(st).filter(|a| a.label == TypeLabel::B) else {
        return OracleReport::inconclusive(METHOD, "-", "g is not of type B".into());
    };
    let model = amb.algebra.name.clone();
    let rs = st.rs();
    let n = amb.rank;
    let size = amb.size();
    let Some(z) = int_coords_scaled(&st.proj.z) else {
        return OracleReport::inconclusive(METHOD, &model, "z is not rational".into());
    };
    let znz: Vec<usize> = (0..n).filter(|&k| z[k] != 0).collect();
    let [b] = znz.as_slice() else {
        return OracleReport::inconclusive(METHOD, &model, "z is not parallel to a short root".into());
    };
    let b = *b;
    for &l in &st.h {
        let carriers = &st.lams.carriers[l];
        if carriers.len() != 3 {
            continue;
        }
        let roots: Vec<Vec<i64>> = carriers
            .iter()
            .filter_map(|&p| int_coords(rs.root(st.planes.root[p])))
            .collect();
        let shorts: Vec<&Vec<i64>> = roots
            .iter()
            .filter(|r| r.iter().map(|x| x.abs()).sum::<i64>() == 1)
            .collect();
        let [s] = shorts.as_slice() else { continue };
        let Some(a) = (0..n).find(|&k| s[k] != 0) else { continue };
        if a == b {
            continue;
        }
        let expect = |sign: i64| -> Vec<i64> {
            let mut r = vec![0; n];
            r[a] = 1;
            r[b] = sign;
            r
        };
        let has = |r: &Vec<i64>| roots.iter().any(|x| x == r || x.iter().zip(r).all(|(p, q)| *p == -q));
        if !has(&expect(1)) || !has(&expect(-1)) {
            continue;
        }
        let zeta_plane = st.planes.of_root[match rs.index_of(&ExactVector::from_ints(&unit_vec(n, b))) {
            Some(i) => i,
            None => continue,
        }];
        if st.labels[zeta_plane] != PlaneLabel::M {
            continue;
        }
        let rows3 = [2 * b, 2 * b + 1, size - 1];
        let cols2 = [2 * a, 2 * a + 1];
        let Some(kappa) = minor_identity(size, &rows3, &cols2) else {
            return OracleReport::inconclusive(METHOD, &model, "quadratic minor identity failed".into());
        };
        let (Some(pu), Some(pv), Some(ps)) =
            (amb.plane(&expect(1)), amb.plane(&expect(-1)), amb.plane(&unit_vec(n, a)))
        else {
            return OracleReport::inconclusive(METHOD, &model, "root plane convention check failed".into());
        };
        let (u, v) = (pu[0].clone(), pv[0].clone());
        let rest: Vec<usize> = (0..n).filter(|&k| k != a && k != b).collect();
        let tor: Vec<CMatrix> = rest
            .iter()
            .map(|&k| {
                let mut c = vec![Rational::zero(); n];
                c[k] = rat_int(1);
                amb.torus(&c)
            })
            .collect();
        let mut flat = vec![u.clone(), v.clone()];
        flat.extend(tor.iter().cloned());
        let s0 = cartan_intersection(&amb.algebra, &flat);
        let mut hs = vec![0; n];
        hs[a] = 1;
        let h_frame = [
            amb.torus(&hs.iter().map(|&x| rat_int(x)).collect::<Vec<_>>()),
            ps[0].clone(),
            ps[1].clone(),
        ];
        let commute = flat.iter().all(|x| flat.iter().all(|y| x.bracket(y).is_zero()));
        let equal = span_dim(&s0) == flat.len() && flat.iter().all(|x| in_span(&s0, x));
        let perp = [&u, &v].iter().all(|x| h_frame.iter().all(|y| x.inner(y).is_zero()));
        let torus_in_h = rest.iter().all(|&k| z[k] == 0);
        if commute && equal && perp && torus_in_h {
            return OracleReport {
                method: METHOD.into(),
                model,
                outcome: OracleOutcome::Refuted,
                detail: format!(
                    "so(3) block of [v,[H_s,v]] = {kappa}·minors(A), so the h-part over g_{{s±ζ}}, g_s is rank one and conjugates into g_s (s = e{}, ζ = e{}); then g_{{s+ζ}}, g_{{s−ζ}} and the torus ⊥ s, ζ give a splitting flat with dim s0 = {}",
                    a + 1,
                    b + 1,
                    flat.len()
                ),
                witness: Some(OracleWitness {
                    roots: vec![ExactVector::from_ints(&expect(1)), ExactVector::from_ints(&expect(-1))],
                    u,
                    v,
                    s0_basis: s0,
                    torus: rest.iter().map(|&k| ExactVector::from_ints(&unit_vec(n, k))).collect(),
                }),
            };
        }
        return OracleReport::inconclusive(
            METHOD,
            &model,
            format!("flat checks: commute {commute}, s0 equal {equal}, m-frame {perp}, torus ⊥ z {torus_in_h}"),
        );
    }
    OracleReport::inconclusive(METHOD, &model, "no h-class with carriers s − ζ, s, s + ζ and ζ ∥ z".into())
}

fn unit_vec(n: usize, k: usize) -> Vec<i64> {
    let mut r = vec![0; n];
    r[k] = 1;
    r
}

/// `z` rescaled to coprime integers.
fn int_coords_scaled(z: &ExactVector) -> Option<Vec<i64>> {
    let r = rat_coords(z)?;
    let den = r.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
        num_integer::Integer::lcm(&acc, x.denom())
    });
    let ints: Vec<num_bigint::BigInt> = r.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if g.is_zero() {
        return None;
    }
    ints.iter().map(|x| (x / &g).to_i64()).collect()
}

/// `B2` with `h = A1` whose torus direction has root values `±2, ±1`: compare
/// with the irreducible `so(3) ⊂ so(5)` model and search it for commuting
/// pairs in `m`.
pub fn principal_b2_check(st: &CaseState<'_>, verdict: &CaseVerdict, exec: Exec) -> OracleReport {
    const METHOD: &str = "no commuting pair in m";
    let rs = st.rs();
    let is_b2 = rs.factors.len() == 1 && {
        let t = rs.factors[0].ty;
        t.rank == 2 && matches!(t.label, TypeLabel::B | TypeLabel::C)
    };
    let h_a1 = verdict
        .derived_h_type
        .as_ref()
        .is_some_and(|d| d.torus_corank == 0 && d.to_string() == "A1");
    if !is_b2 || !h_a1 {
        return OracleReport::inconclusive(METHOD, "-", "not B2 with h = A1".into());
    }
    let Some(z) = rat_coords(&st.proj.z) else {
        return OracleReport::inconclusive(METHOD, "-", "z is not rational".into());
    };
    let w = [-z[1].clone(), z[0].clone()];
    let label = ModelName::Berger.label();
    let model = match build_model(ModelName::Berger) {
        Ok(m) => m,
        Err(e) => return OracleReport::inconclusive(METHOD, &label, e.to_string()),
    };
    let weights = so_torus(5, &w);
    let principal = match seq_dependent(&model.h_basis[0], &weights) {
        Ok(d) => d,
        Err(e) => return OracleReport::inconclusive(METHOD, &label, e.to_string()),
    };
    if !principal {
        return OracleReport::inconclusive(
            METHOD,
            &label,
            format!("t ∩ h direction ({}, {}) is not principal", w[0], w[1]),
        );
    }
    let search = commuting_pair_search(&model, &SearchConfig::default(), exec);
    match search {
        Ok(s) if s.pair.is_none() && s.numeric_min > 1e-3 => OracleReport {
            method: METHOD.into(),
            model: label,
            outcome: OracleOutcome::Confirmed,
            detail: format!(
                "eigenvalues of h's torus match the root values of ({}, {}); {} exact candidates commute with nothing in m and min ‖[X,Y]‖² = {:.4} over orthonormal pairs",
                w[0], w[1], s.candidates_tried, s.numeric_min
            ),
            witness: None,
        },
        Ok(s) => OracleReport::inconclusive(
            METHOD,
            &label,
            format!("search found pair: {}, min {:.3e}", s.pair.is_some(), s.numeric_min),
        ),
        Err(e) => OracleReport::inconclusive(METHOD, &label, e.to_string()),
    }
}

/// Try each matrix-level check in turn.
pub fn resolve(st: &CaseState<'_>, verdict: &CaseVerdict, exec: Exec) -> OracleReport {
    let berger = principal_b2_check(st, verdict, exec);
    if berger.outcome == OracleOutcome::Confirmed {
        return berger;
    }
    let flat = vector_flat_search(st);
    if flat.outcome == OracleOutcome::Refuted {
        return flat;
    }
    let conj = conjugated_plane_flat(st);
    if conj.outcome == OracleOutcome::Refuted {
        return conj;
    }
    OracleReport::inconclusive(
        "all",
        &flat.model,
        format!("{}; {}; {}", berger.detail, flat.detail, conj.detail),
    )
}
