//! Full-rank subalgebras `h ⊂ g`: candidate enumeration from closed root
//! subsystems and the root-level exclusion filters.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact_arith::ExactVector;
use crate::par::Exec;
use crate::root_systems::{
    Decomposition, RootError, RootSet, RootSystem, SimpleType, SumDiff, TypeLabel,
};
use crate::tables;

/// A full-rank candidate: the root set of `h` and its complement in `g`.
#[derive(Clone, Debug)]
pub struct EqualRankCandidate<'a> {
    pub rs: &'a RootSystem,
    pub h_roots: RootSet,
    pub m_roots: RootSet,
    pub h_type: Decomposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterRule {
    /// `m` meets two distinct simple factors of `g`.
    MultiFactor,
    /// Two `m`-roots `α ≠ ±β` with neither `α ± β` a root.
    CommutingPair,
    /// Two `m`-roots at angle π/3 or 2π/3 with neither `α ± β` in `h`.
    HexagonInM,
    /// Symmetric pair that is not of rank one.
    SymmetricHigherRank,
}

impl fmt::Display for FilterRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FilterRule::MultiFactor => "multi-factor",
            FilterRule::CommutingPair => "commuting-pair",
            FilterRule::HexagonInM => "hexagon-in-m",
            FilterRule::SymmetricHigherRank => "symmetric-higher-rank",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub failing_rule: Option<FilterRule>,
    /// Root indices of the witness.
    pub witness: Vec<usize>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            status: Status::Pass,
            failing_rule: None,
            witness: Vec::new(),
        }
    }

    fn fail(rule: FilterRule, witness: Vec<usize>) -> Self {
        Verdict {
            status: Status::Fail,
            failing_rule: Some(rule),
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl<'a> EqualRankCandidate<'a> {
    pub fn new(rs: &'a RootSystem, h_roots: RootSet) -> Result<Self, RootError> {
        let h_type = rs.identify_type(&h_roots)?;
        let m_roots = rs.all().difference(&h_roots);
        Ok(EqualRankCandidate {
            rs,
            h_roots,
            m_roots,
            h_type,
        })
    }

    fn m_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m: Vec<usize> = self.m_roots.iter().filter(|&i| self.rs.is_positive(i)).collect();
        let mut out = Vec::new();
        for (a, &i) in m.iter().enumerate() {
            for &j in &m[a + 1..] {
                out.push((i, j));
            }
        }
        out.into_iter()
    }

    fn in_g2_factor(&self, i: usize) -> bool {
        self.rs.factors[self.rs.factor_of_root[i]].ty.label == TypeLabel::G2
    }
}

/// Fail when the roots of `m` lie in two different simple factors.
pub fn multi_factor(c: &EqualRankCandidate) -> Verdict {
    let mut first: Option<usize> = None;
    for i in c.m_roots.iter() {
        match first {
            None => first = Some(i),
            Some(f) if c.rs.factor_of_root[f] != c.rs.factor_of_root[i] => {
                return Verdict::fail(FilterRule::MultiFactor, vec![f, i]);
            }
            _ => {}
        }
    }
    Verdict::pass()
}

/// Every pair of `m`-roots `α ≠ ±β` must have `α + β` or `α − β` a root.
pub fn lemma1_part1(c: &EqualRankCandidate) -> Verdict {
    for (i, j) in c.m_pairs() {
        if c.rs.sum_diff_status_idx(i, j) == SumDiff::Neither {
            return Verdict::fail(FilterRule::CommutingPair, vec![i, j]);
        }
    }
    Verdict::pass()
}

fn hexagonal(rs: &RootSystem, i: usize, j: usize) -> bool {
    let a = rs.angle_class_idx(i, j);
    a.four_cos_sq == num_rational::BigRational::from_integer(1.into())
}

/// Every pair of `m`-roots at angle π/3 or 2π/3 outside a `G2` factor must
/// have `α + β` or `α − β` in `h`.
pub fn lemma1_part2(c: &EqualRankCandidate) -> Verdict {
    for (i, j) in c.m_pairs() {
        if c.in_g2_factor(i) || !hexagonal(c.rs, i, j) {
            continue;
        }
        let s = c.rs.sum(i, j).is_some_and(|k| c.h_roots.contains(k));
        let d = c.rs.diff(i, j).is_some_and(|k| c.h_roots.contains(k));
        if !s && !d {
            return Verdict::fail(FilterRule::HexagonInM, vec![i, j]);
        }
    }
    Verdict::pass()
}

/// Whether `[m, m] ⊂ h` holds at the level of root planes.
pub fn is_symmetric(c: &EqualRankCandidate) -> bool {
    c.m_pairs().all(|(i, j)| {
        let s = c.rs.sum(i, j).is_none_or(|k| c.h_roots.contains(k));
        let d = c.rs.diff(i, j).is_none_or(|k| c.h_roots.contains(k));
        s && d
    })
}

/// A symmetric pair must be of rank one: no commuting pair of `m`-roots and
/// the pair must appear in the rank-one table.
pub fn symmetric_excess_rank(c: &EqualRankCandidate) -> Verdict {
    if !is_symmetric(c) {
        return Verdict::pass();
    }
    for (i, j) in c.m_pairs() {
        if c.rs.sum_diff_status_idx(i, j) == SumDiff::Neither {
            return Verdict::fail(FilterRule::SymmetricHigherRank, vec![i, j]);
        }
    }
    if c.rs.is_irreducible() && !c.m_roots.is_empty() {
        let g = c.rs.factors[0].ty;
        if !tables::is_rank_one_symmetric(g, &c.h_type) {
            return Verdict::fail(FilterRule::SymmetricHigherRank, Vec::new());
        }
    }
    Verdict::pass()
}

/// Apply the filters in order and return the first failure.
pub fn evaluate(c: &EqualRankCandidate) -> Verdict {
    for f in [multi_factor, lemma1_part1, lemma1_part2, symmetric_excess_rank] {
        let v = f(c);
        if !v.passed() {
            return v;
        }
    }
    Verdict::pass()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub h_type: String,
    pub h_decomposition: Decomposition,
    pub h_root_count: usize,
    pub verdict: Status,
    pub failing_rule: Option<FilterRule>,
    pub witness: Vec<ExactVector>,
    /// Coset-space name for survivors found in the reference table.
    pub space: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRef {
    #[serde(rename = "type")]
    pub label: TypeLabel,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualRankReport {
    pub g: GroupRef,
    pub candidates: Vec<CandidateRow>,
}

impl EqualRankReport {
    pub fn survivors(&self) -> Vec<&CandidateRow> {
        self.candidates
            .iter()
            .filter(|c| c.verdict == Status::Pass)
            .collect()
    }

    pub fn survivor_types(&self) -> Vec<Decomposition> {
        self.survivors().iter().map(|c| c.h_decomposition.clone()).collect()
    }
}

/// Rank cap above which `classify_equal_rank` refuses to run.
pub const DEFAULT_CAP: usize = 8;

/// Enumerate proper full-rank candidates of a simple `g` and filter them.
pub fn classify_equal_rank(label: TypeLabel, rank: usize) -> Result<EqualRankReport, RootError> {
    classify_equal_rank_with(label, rank, DEFAULT_CAP, Exec::default())
}

pub fn classify_equal_rank_with(
    label: TypeLabel,
    rank: usize,
    cap: usize,
    exec: Exec,
) -> Result<EqualRankReport, RootError> {
    let rank = label.fixed_rank().unwrap_or(rank);
    if rank > cap {
        return Err(RootError::CapExceeded(rank, cap));
    }
    let rs = RootSystem::build(label, rank)?;
    let classes = rs.closed_subsystems_capped(cap)?;
    let proper: Vec<RootSet> = classes
        .into_iter()
        .map(|c| c.roots)
        .filter(|s| s.len() < rs.len())
        .collect();
    let g = SimpleType::new(label, rank);
    let rows: Vec<Result<CandidateRow, RootError>> = exec.map(&proper, |h| {
        let cand = EqualRankCandidate::new(&rs, h.clone())?;
        let v = evaluate(&cand);
        let space = if v.passed() {
            tables::equal_rank_space_name(g, &cand.h_type)
        } else {
            None
        };
        Ok(CandidateRow {
            h_type: cand.h_type.to_string(),
            h_decomposition: cand.h_type.clone(),
            h_root_count: h.len(),
            verdict: v.status,
            failing_rule: v.failing_rule,
            witness: v.witness.iter().map(|&i| rs.root(i).clone()).collect(),
            space,
        })
    });
    Ok(EqualRankReport {
        g: GroupRef { label, rank },
        candidates: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

/// Proper full-rank subalgebras passing every filter, found by descending
/// through maximal closed subsystems; branches failing the multi-factor or
/// commuting-pair filter are cut.
pub fn pruned_survivors(rs: &RootSystem) -> Result<Vec<RootSet>, RootError> {
    let mut seen: std::collections::HashSet<RootSet> = std::collections::HashSet::new();
    let mut found: std::collections::BTreeMap<crate::root_systems::SubsetSignature, RootSet> =
        std::collections::BTreeMap::new();
    let mut stack = children(rs, &rs.all())?;
    while let Some(s) = stack.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        let cand = EqualRankCandidate::new(rs, s.clone())?;
        if !multi_factor(&cand).passed() || !lemma1_part1(&cand).passed() {
            continue;
        }
        if evaluate(&cand).passed() {
            found.entry(rs.signature(&s)?).or_insert_with(|| s.clone());
        }
        stack.extend(children(rs, &s)?);
    }
    Ok(found.into_values().collect())
}

fn children(rs: &RootSystem, s: &RootSet) -> Result<Vec<RootSet>, RootError> {
    let mut out = Vec::new();
    for c in rs.components(s) {
        let rest = s.difference(&c);
        for m in rs.maximal_closed(&c)? {
            out.push(rest.union(&m));
        }
    }
    Ok(out)
}
