//! Reference data: the known classification lists that reports are diffed
//! against. Editing these tables changes diffs, never verdicts.

use serde::{Deserialize, Serialize};

use crate::root_systems::{Decomposition, SimpleType, TypeLabel};

fn ty(label: TypeLabel, rank: usize) -> SimpleType {
    SimpleType::new(label, rank)
}

fn dec(comps: &[SimpleType], torus: usize) -> Decomposition {
    Decomposition::new(comps.to_vec(), torus)
}

/// Rank-one symmetric pairs `(g, h)` of equal rank.
pub fn rank_one_symmetric(g: SimpleType) -> Option<Decomposition> {
    let n = g.rank;
    use TypeLabel::*;
    let d = match g.label {
        A => dec(&prefix(A, n - 1), 1),
        B => {
            if n == 1 {
                dec(&[], 1)
            } else {
                dec(&[ty(D, n)], 0).normalized()
            }
        }
        C => {
            let mut c = prefix(C, n - 1);
            c.push(ty(A, 1));
            dec(&c, 0)
        }
        F4 => dec(&[ty(B, 4)], 0),
        _ => return None,
    };
    Some(d.normalized())
}

fn prefix(label: TypeLabel, rank: usize) -> Vec<SimpleType> {
    if rank == 0 {
        Vec::new()
    } else {
        vec![ty(label, rank)]
    }
}

pub fn is_rank_one_symmetric(g: SimpleType, h: &Decomposition) -> bool {
    rank_one_symmetric(g).is_some_and(|d| d == h.normalized())
}

/// An expected equal-rank survivor with its coset-space name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSubalgebra {
    pub h: Decomposition,
    pub space: String,
}

/// Survivors of the equal-rank filters for a simple `g`.
pub fn equal_rank_survivors(g: SimpleType) -> Vec<NamedSubalgebra> {
    use TypeLabel::*;
    let n = g.rank;
    let named = |h: Decomposition, s: String| NamedSubalgebra {
        h: h.normalized(),
        space: s,
    };
    match g.label {
        A => vec![named(
            dec(&prefix(A, n - 1), 1),
            format!("CP^{n} = SU({})/S(U({n})×U(1))", n + 1),
        )],
        B if n >= 2 => {
            let mut v = vec![named(
                dec(&[ty(D, n)], 0),
                format!("S^{} = SO({})/SO({})", 2 * n, 2 * n + 1, 2 * n),
            )];
            if n == 2 {
                v.push(named(dec(&[ty(A, 1)], 1), "CP^3 = Sp(2)/Sp(1)S^1".into()));
            }
            v
        }
        C if n >= 2 => {
            let mut c = prefix(C, n - 1);
            c.push(ty(A, 1));
            let mut v = Vec::new();
            if n >= 3 {
                v.push(named(
                    dec(&c, 0),
                    format!("HP^{} = Sp({n})/Sp({})Sp(1)", n - 1, n - 1),
                ));
            } else {
                v.push(named(dec(&c, 0), "S^4 = SO(5)/SO(4)".into()));
            }
            v.push(named(
                dec(&prefix(C, n - 1), 1),
                format!("CP^{} = Sp({n})/Sp({})S^1", 2 * n - 1, n - 1),
            ));
            v
        }
        G2 => vec![named(dec(&[ty(A, 2)], 0), "S^6 = G2/SU(3)".into())],
        F4 => vec![named(dec(&[ty(B, 4)], 0), "OP^2 = F4/Spin(9)".into())],
        _ => Vec::new(),
    }
}

pub fn equal_rank_space_name(g: SimpleType, h: &Decomposition) -> Option<String> {
    let hn = h.normalized();
    equal_rank_survivors(g)
        .into_iter()
        .find(|s| s.h == hn)
        .map(|s| s.space)
}

/// How a saturated corank-one seed is expected to end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resolution {
    /// Survives the combinatorial rules; a positively curved space.
    Survivor,
    /// Survives the rules and is confirmed by a matrix model.
    ConfirmedByModel,
    /// Survives the rules and is closed by a matrix-level flat.
    RefutedByModel,
}

/// Which seed of `g` an expectation refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedSpec {
    /// Case I with the given equal-rank `k`.
    CaseI { k: String },
    /// `pr(α) = pr(β)` for roots in standard coordinates.
    Pair { alpha: Vec<i64>, beta: Vec<i64> },
    /// The unique saturated case II seed.
    CaseII,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorankExpectation {
    pub g: Vec<SimpleType>,
    pub seed: SeedSpec,
    pub h: String,
    pub resolution: Resolution,
    pub space: Option<String>,
}

fn label_of(label: TypeLabel, rank: usize) -> String {
    match (label, rank) {
        (_, 0) => "0".into(),
        (TypeLabel::B | TypeLabel::C, 1) => "A1".into(),
        (TypeLabel::C, 2) => "B2".into(),
        _ => ty(label, rank).to_string(),
    }
}

fn e(n: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &(i, x) in entries {
        v[i] = x;
    }
    v
}

/// Saturated corank-one seeds of a simple `g`, or of `g ⊕ A1` when `with_a1`.
pub fn corank_one_expected(g: SimpleType, with_a1: bool) -> Vec<CorankExpectation> {
    use Resolution::*;
    use TypeLabel::*;
    let n = g.rank;
    let mut out = Vec::new();
    let mut push = |seed: SeedSpec, h: String, resolution: Resolution, space: Option<String>| {
        let mut gs = vec![g];
        if with_a1 {
            gs.push(ty(A, 1));
        }
        out.push(CorankExpectation {
            g: gs,
            seed,
            h,
            resolution,
            space,
        });
    };
    if with_a1 {
        match g.label {
            A if n == 1 => push(SeedSpec::CaseII, "Δ(A1)".into(), Survivor, Some("S^3 = SU(2)×SU(2)/ΔSU(2)".into())),
            A if n == 2 => push(
                SeedSpec::CaseII,
                "Δ(A1)⊕ℝ".into(),
                Survivor,
                Some("SU(3)×SO(3)/U*(2)".into()),
            ),
            B if n == 2 => push(
                SeedSpec::CaseII,
                "A1⊕Δ(A1)".into(),
                Survivor,
                Some("S^7 = Sp(2)Sp(1)/Sp(1)Sp(1)".into()),
            ),
            C if n >= 3 => push(
                SeedSpec::CaseII,
                format!("{}⊕Δ(A1)", label_of(C, n - 1)),
                Survivor,
                Some(format!("S^{} = Sp({n})Sp(1)/Sp({})Sp(1)", 4 * n - 1, n - 1)),
            ),
            _ => {}
        }
        return out;
    }
    let case_i = |k: String| SeedSpec::CaseI { k };
    let pair = |a: &[(usize, i64)], b: &[(usize, i64)], dim: usize| SeedSpec::Pair {
        alpha: e(dim, a),
        beta: e(dim, b),
    };
    match g.label {
        A => {
            let k = if n == 1 { "ℝ".into() } else { format!("A{}⊕ℝ", n - 1) };
            let space = if n == 1 {
                "S^3 = SU(2)".into()
            } else {
                format!("S^{} = SU({})/SU({n})", 2 * n + 1, n + 1)
            };
            push(case_i(k), label_of(A, n - 1), Survivor, Some(space));
            let d = n + 1;
            let ab = || pair(&[(0, 1), (1, -1)], &[(2, 1), (3, -1)], d);
            if n == 3 {
                push(ab(), "B2".into(), Survivor, Some("S^5 = SU(4)/Sp(2)".into()));
            }
            if n == 4 {
                push(ab(), "B2⊕ℝ".into(), Survivor, Some("SU(5)/Sp(2)S^1".into()));
            }
        }
        B => {
            if n == 2 {
                push(case_i("A1⊕ℝ".into()), "A1".into(), Survivor, Some("S^7 = Sp(2)/Sp(1)".into()));
                push(
                    pair(&[(0, 1)], &[(0, -1), (1, 1)], n),
                    "A1".into(),
                    ConfirmedByModel,
                    Some("Sp(2)/SU(2)".into()),
                );
            }
            let hb = label_of(B, n - 1);
            push(pair(&[(0, 1)], &[(0, 1), (1, 1)], n), hb.clone(), RefutedByModel, None);
            push(pair(&[(0, 1), (1, 1)], &[(0, 1), (1, -1)], n), hb.clone(), RefutedByModel, None);
            if n == 3 {
                push(
                    pair(&[(0, 1)], &[(1, 1), (2, 1)], n),
                    "G2".into(),
                    Survivor,
                    Some("S^7 = Spin(7)/G2".into()),
                );
            }
            if n == 4 {
                push(
                    pair(&[(0, 1), (1, 1)], &[(2, 1), (3, 1)], n),
                    "B3".into(),
                    Survivor,
                    Some("S^15 = Spin(9)/Spin(7)".into()),
                );
            }
        }
        C if n >= 3 => {
            push(
                case_i(format!("{}⊕ℝ", label_of(C, n - 1))),
                label_of(C, n - 1),
                Survivor,
                Some(format!("S^{} = Sp({n})/Sp({})", 4 * n - 1, n - 1)),
            );
            if n == 3 {
                push(
                    pair(&[(0, 1), (1, 1)], &[(0, -2)], n),
                    "A1⊕A1".into(),
                    RefutedByModel,
                    None,
                );
            }
        }
        D if n >= 4 => push(
            pair(&[(0, 1), (1, 1)], &[(0, 1), (1, -1)], n),
            label_of(B, n - 1),
            Survivor,
            Some(format!("S^{} = SO({})/SO({})", 2 * n - 1, 2 * n, 2 * n - 1)),
        ),
        _ => {}
    }
    out
}

/// Positively curved normal homogeneous spaces in the classification.
pub fn classification_list() -> Vec<&'static str> {
    vec![
        "S^n, CP^n, HP^n, OP^2 (rank-one symmetric)",
        "SU(n)/SU(n-1)",
        "U(n)/U(n-1)",
        "Sp(n)/Sp(n-1)",
        "Sp(n)S^1/Sp(n-1)S^1",
        "Sp(n)Sp(1)/Sp(n-1)Sp(1)",
        "G2/SU(3)",
        "Spin(7)/G2",
        "Spin(9)/Spin(7)",
        "SU(3)×SO(3)/U*(2)",
        "Sp(2)/SU(2)",
        "SU(5)/Sp(2)S^1",
    ]
}

/// Spaces on which every normal homogeneous Finsler metric is Riemannian.
pub fn riemannian_forced() -> Vec<&'static str> {
    vec!["rank-one symmetric", "S^3 = SU(2) = Sp(1)", "G2/SU(3)", "Spin(7)/G2"]
}

/// Expected Condition (R) outcome per catalog model: `Some(true)` when the
/// space admits non-Riemannian normal homogeneous metrics.
pub fn condition_r_expected(model: &str) -> Option<bool> {
    let fails = [
        "su(3)/su(2)",
        "su(4)/su(3)",
        "u(3)/u(2)",
        "sp(2)/sp(1)",
        "sp(3)/sp(2)",
        "sp(2)/su(2)-Berger",
        "su(5)/sp(2)⊕ℝ",
        "spin9-vt-family",
    ];
    let holds = ["so(4)/so(3)", "so(5)/so(4)", "su(3)/s(u(2)⊕u(1))"];
    if fails.contains(&model) {
        Some(true)
    } else if holds.contains(&model) {
        Some(false)
    } else {
        None
    }
}
