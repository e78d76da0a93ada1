//! Enumeration of corank-one seeds up to Weyl symmetry.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::equal_rank::EqualRankCandidate;
use crate::exact_arith::{linalg, ExactVector, Rational};
use crate::root_systems::{Decomposition, RootSet, RootSystem, TypeLabel};

use super::CorankError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseKind {
    /// Every root plane of `h` is a root plane of `g`.
    I,
    /// The seed pair lies in two different simple factors.
    II,
    /// The seed pair lies in one simple factor.
    III,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseKind::I => "I",
            CaseKind::II => "II",
            CaseKind::III => "III",
        })
    }
}

#[derive(Clone, Debug)]
pub enum SeedKind {
    /// `h` is the semisimple part of an equal-rank survivor `k` with center.
    CaseI { k_roots: RootSet, k_type: Decomposition },
    /// `pr(α) = pr(β) = α'`, `z = α − β`.
    Pair { case: CaseKind, alpha: usize, beta: usize },
}

/// Weyl-invariant fingerprint of a seed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeedKey {
    pub case: CaseKind,
    pub tag: String,
    pub profile: Vec<(Rational, Rational, Rational)>,
}

#[derive(Clone, Debug)]
pub struct CorankSeed<'a> {
    pub rs: &'a RootSystem,
    pub kind: SeedKind,
    /// `z` as a rational combination of roots.
    pub axis: Vec<(usize, Rational)>,
    pub key: SeedKey,
}

impl CorankSeed<'_> {
    pub fn case(&self) -> CaseKind {
        match self.kind {
            SeedKind::CaseI { .. } => CaseKind::I,
            SeedKind::Pair { case, .. } => case,
        }
    }

    pub fn pair(&self) -> Option<(usize, usize)> {
        match self.kind {
            SeedKind::Pair { alpha, beta, .. } => Some((alpha, beta)),
            SeedKind::CaseI { .. } => None,
        }
    }

    /// Angle between `α` and `β` for pair seeds.
    pub fn angle(&self) -> Option<&'static str> {
        self.pair().map(|(a, b)| angle_name(self.rs, a, b))
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SeedKind::CaseI { k_type, .. } => format!("case I, k = {k_type}"),
            SeedKind::Pair { case, alpha, beta } => format!(
                "case {case}, α = {}, β = {}, angle {}",
                self.rs.root(*alpha),
                self.rs.root(*beta),
                angle_name(self.rs, *alpha, *beta)
            ),
        }
    }
}

/// Angle between two roots as a fraction of π.
pub fn angle_name(rs: &RootSystem, i: usize, j: usize) -> &'static str {
    let c = rs.angle_class_idx(i, j).four_cos_sq;
    let pos = rs.gram(i, j) > &Rational::zero();
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    if c.is_zero() {
        "π/2"
    } else if c == q(1, 1) {
        if pos { "π/3" } else { "2π/3" }
    } else if c == q(2, 1) {
        if pos { "π/4" } else { "3π/4" }
    } else if c == q(3, 1) {
        if pos { "π/6" } else { "5π/6" }
    } else if pos {
        "0"
    } else {
        "π"
    }
}

fn in_g2(rs: &RootSystem, i: usize) -> bool {
    rs.factors[rs.factor_of_root[i]].ty.label == TypeLabel::G2
}

/// Same simple factor, not `G2`, at angle π/3 or 2π/3.
pub fn hexagonal_same_factor(rs: &RootSystem, i: usize, j: usize) -> bool {
    rs.factor_of_root[i] == rs.factor_of_root[j]
        && !in_g2(rs, i)
        && rs.angle_class_idx(i, j).four_cos_sq.is_one()
}

fn pair_key(rs: &RootSystem, case: CaseKind, a: usize, b: usize) -> SeedKey {
    let one = |x: usize, y: usize| {
        let mut profile: Vec<_> = (0..rs.len())
            .map(|g| (rs.gram(g, x).clone(), rs.gram(g, y).clone(), rs.norm_sq(g).clone()))
            .collect();
        profile.sort();
        let tag = format!(
            "{}|{}",
            rs.factors[rs.factor_of_root[x]].ty,
            rs.factors[rs.factor_of_root[y]].ty
        );
        SeedKey { case, tag, profile }
    };
    one(a, b).min(one(b, a))
}

/// Fingerprint of the pair seed `(α, β)` given by vectors.
pub fn seed_key_for(rs: &RootSystem, alpha: &ExactVector, beta: &ExactVector) -> Result<SeedKey, CorankError> {
    let a = rs.require_root(alpha)?;
    let b = rs.require_root(beta)?;
    if rs.is_pm(a, b) {
        return Err(CorankError::DegenerateSeed);
    }
    let case = if rs.factor_of_root[a] == rs.factor_of_root[b] {
        CaseKind::III
    } else {
        CaseKind::II
    };
    Ok(pair_key(rs, case, a, b))
}

/// Build the pair seed for explicit `α, β`.
pub fn pair_seed<'a>(rs: &'a RootSystem, alpha: usize, beta: usize) -> Result<CorankSeed<'a>, CorankError> {
    if rs.is_pm(alpha, beta) {
        return Err(CorankError::DegenerateSeed);
    }
    let case = if rs.factor_of_root[alpha] == rs.factor_of_root[beta] {
        CaseKind::III
    } else {
        CaseKind::II
    };
    Ok(CorankSeed {
        rs,
        kind: SeedKind::Pair { case, alpha, beta },
        axis: vec![(alpha, Rational::one()), (beta, -Rational::one())],
        key: pair_key(rs, case, alpha, beta),
    })
}

/// One representative per (factor, root length).
fn alpha_reps(rs: &RootSystem) -> Vec<usize> {
    let mut seen: BTreeMap<(usize, Rational), usize> = BTreeMap::new();
    for i in 0..rs.len() {
        if rs.is_positive(i) {
            seen.entry((rs.factor_of_root[i], rs.norm_sq(i).clone())).or_insert(i);
        }
    }
    seen.into_values().collect()
}

fn pair_seeds<'a>(rs: &'a RootSystem, include_hexagonal: bool) -> Result<Vec<CorankSeed<'a>>, CorankError> {
    let reducible = !rs.is_irreducible();
    let mut by_key: BTreeMap<SeedKey, CorankSeed<'a>> = BTreeMap::new();
    for a in alpha_reps(rs) {
        for b in 0..rs.len() {
            if rs.is_pm(a, b) {
                continue;
            }
            let same = rs.factor_of_root[a] == rs.factor_of_root[b];
            // reducible: mixed pairs only
            if reducible == same {
                continue;
            }
            if !include_hexagonal && hexagonal_same_factor(rs, a, b) {
                continue;
            }
            let s = pair_seed(rs, a, b)?;
            by_key.entry(s.key.clone()).or_insert(s);
        }
    }
    Ok(by_key.into_values().collect())
}

/// Survivor subalgebras `k` with a nontrivial center, each giving a case I seed
/// with `t ∩ m` the center of `k`.
fn case_one_seeds<'a>(rs: &'a RootSystem) -> Result<Vec<CorankSeed<'a>>, CorankError> {
    if !rs.is_irreducible() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let basis = rs.simple_roots(&rs.all())?;
    for k in super::state::cached_survivors(rs)?.iter() {
        let cand = EqualRankCandidate::new(rs, k.clone())?;
        if cand.h_type.torus_corank != 1 {
            continue;
        }
        let rows: linalg::RatMatrix = k
            .iter()
            .map(|k| basis.iter().map(|&b| rs.gram(b, k).clone()).collect())
            .collect();
        let ns = linalg::nullspace(&rows, basis.len());
        let Some(y) = ns.into_iter().next() else {
            return Err(CorankError::NoCenter);
        };
        let axis: Vec<(usize, Rational)> = basis
            .iter()
            .zip(y)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&b, c)| (b, c))
            .collect();
        let key = SeedKey {
            case: CaseKind::I,
            tag: format!("{}|{}", rs.name(), cand.h_type),
            profile: Vec::new(),
        };
        out.push(CorankSeed {
            rs,
            kind: SeedKind::CaseI {
                k_roots: k.clone(),
                k_type: cand.h_type,
            },
            axis,
            key,
        });
    }
    Ok(out)
}

/// Seeds up to Weyl symmetry, omitting pairs in one non-`G2` factor at angle
/// π/3 or 2π/3.
pub fn enumerate_seeds(rs: &RootSystem) -> Result<Vec<CorankSeed<'_>>, CorankError> {
    let mut out = case_one_seeds(rs)?;
    out.extend(pair_seeds(rs, false)?);
    Ok(out)
}

/// Like [`enumerate_seeds`] but keeping the hexagonal pairs, which then close
/// at initialisation.
pub fn enumerate_seeds_all(rs: &RootSystem) -> Result<Vec<CorankSeed<'_>>, CorankError> {
    let mut out = case_one_seeds(rs)?;
    out.extend(pair_seeds(rs, true)?);
    Ok(out)
}
