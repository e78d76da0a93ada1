//! End-to-end run of the classification: equal-rank filters, corank-one
//! propagation with matrix-level resolution of saturated seeds, and the
//! Condition (R) survey of the model catalog, all diffed against `tables`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corank_engine::{
    enumerate_seeds, run_seed, seed_key_for, CaseKind, CaseState, CaseStatus, CaseVerdict, CorankError,
    CorankSeed, RuleId, SeedKind, TraceStep,
};
use crate::equal_rank::classify_equal_rank_with;
use crate::exact_arith::ExactVector;
use crate::explicit_models::oracle::{resolve, OracleOutcome, OracleReport};
use crate::explicit_models::{catalog, condition_r_report, default_t_samples, ModelError};
use crate::par::Exec;
use crate::root_systems::{Decomposition, RootError, RootSystem, SimpleType, TypeLabel};
use crate::tables::{self, CorankExpectation, Resolution, SeedSpec};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Corank(#[from] CorankError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("rank caps out of range: {0}")]
    Caps(String),
    #[error("unknown seed id {0}")]
    UnknownSeed(String),
}

/// Largest rank of each series included in a run. `e` is the largest
/// exceptional `E` rank (0 to skip, otherwise 6, 7 or 8).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCaps {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub g2: bool,
    pub f4: bool,
    pub e: usize,
}

impl Default for RankCaps {
    fn default() -> Self {
        RankCaps {
            a: 4,
            b: 4,
            c: 4,
            d: 4,
            g2: true,
            f4: true,
            e: 0,
        }
    }
}

impl RankCaps {
    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = [
            (self.a > 8, "A ≤ 8"),
            (self.b > 8, "B ≤ 8"),
            (self.c > 8, "C ≤ 8"),
            (self.d > 8, "D ≤ 8"),
            (self.e != 0 && !(6..=8).contains(&self.e), "E ∈ {0, 6, 7, 8}"),
        ];
        match bad.iter().find(|(b, _)| *b) {
            Some((_, what)) => Err(VerifyError::Caps(what.to_string())),
            None => Ok(()),
        }
    }

    /// Simple types within the caps, each isomorphism class once.
    pub fn simple_types(&self) -> Vec<SimpleType> {
        use TypeLabel::*;
        let mut v: Vec<SimpleType> = (1..=self.a).map(|n| SimpleType::new(A, n)).collect();
        v.extend((2..=self.b).map(|n| SimpleType::new(B, n)));
        v.extend((3..=self.c).map(|n| SimpleType::new(C, n)));
        v.extend((4..=self.d).map(|n| SimpleType::new(D, n)));
        if self.g2 {
            v.push(SimpleType::new(G2, 2));
        }
        if self.f4 {
            v.push(SimpleType::new(F4, 4));
        }
        for (r, l) in [(6, E6), (7, E7), (8, E8)] {
            if self.e >= r {
                v.push(SimpleType::new(l, r));
            }
        }
        v
    }

    /// Two-factor algebras `g ⊕ A1` for the case II seeds.
    pub fn case_ii_types(&self) -> Vec<Vec<SimpleType>> {
        self.simple_types()
            .into_iter()
            .filter(|t| !matches!(t.label, TypeLabel::E6 | TypeLabel::E7 | TypeLabel::E8))
            .map(|t| vec![t, SimpleType::new(TypeLabel::A, 1)])
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedRow {
    pub h: String,
    pub space: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EqualRankSection {
    pub g: String,
    pub candidates: usize,
    pub survivors: Vec<NamedRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorankRow {
    pub id: String,
    pub g: String,
    pub case: CaseKind,
    pub seed: String,
    pub status: CaseStatus,
    pub rule: Option<RuleId>,
    pub h: Option<String>,
    pub k_bound: Option<String>,
    pub resolution: Option<Resolution>,
    pub space: Option<String>,
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionRRow {
    pub space: String,
    pub pairs: usize,
    pub dependent_pairs: usize,
    pub fails_condition_r: bool,
    pub expected: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub command: String,
    pub caps: RankCaps,
    pub equal_rank: Vec<EqualRankSection>,
    pub corank_one: Vec<CorankRow>,
    pub condition_r: Vec<ConditionRRow>,
    /// Names of every surviving space.
    pub survivors: Vec<String>,
    pub diffs: Vec<String>,
}

impl Theorem1Report {
    pub fn exit_code(&self) -> i32 {
        if self.diffs.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}\n\n## Equal rank\n", self.command);
        let _ = writeln!(s, "| g | candidates | h | space |\n|---|---|---|---|");
        for sec in &self.equal_rank {
            if sec.survivors.is_empty() {
                let _ = writeln!(s, "| {} | {} | – | – |", sec.g, sec.candidates);
            }
            for r in &sec.survivors {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} |",
                    sec.g,
                    sec.candidates,
                    r.h,
                    r.space.as_deref().unwrap_or("?")
                );
            }
        }
        let _ = writeln!(s, "\n## Corank one\n\n| seed | g | case | status | h | resolution | space |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for r in &self.corank_one {
            let status = match (r.status, r.rule) {
                (CaseStatus::Contradiction, Some(rule)) => format!("contradiction ({rule})"),
                (st, _) => format!("{st:?}").to_lowercase(),
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} |",
                r.seed,
                r.g,
                r.case,
                status,
                r.h.as_deref().unwrap_or("–"),
                r.resolution.map_or("–".into(), |x| format!("{x:?}")),
                r.space.as_deref().unwrap_or("–")
            );
        }
        let _ = writeln!(s, "\n## Condition (R)\n\n| space | dependent / pairs | fails | expected |");
        let _ = writeln!(s, "|---|---|---|---|");
        for r in &self.condition_r {
            let _ = writeln!(
                s,
                "| {} | {}/{} | {} | {} |",
                r.space,
                r.dependent_pairs,
                r.pairs,
                r.fails_condition_r,
                r.expected.map_or("–".into(), |b| b.to_string())
            );
        }
        let _ = writeln!(s, "\n## Survivors\n");
        for name in &self.survivors {
            let _ = writeln!(s, "- {name}");
        }
        let _ = writeln!(s, "\n## Diffs\n");
        if self.diffs.is_empty() {
            let _ = writeln!(s, "none");
        }
        for d in &self.diffs {
            let _ = writeln!(s, "- {d}");
        }
        s
    }
}

/// Options shared by the corank-one runs.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub exec: Exec,
    pub traces: bool,
    pub condition_r_pairs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            exec: Exec::default(),
            traces: false,
            condition_r_pairs: 100,
        }
    }
}

fn expectation_matches(rs: &RootSystem, seed: &CorankSeed<'_>, exp: &CorankExpectation) -> bool {
    match (&exp.seed, &seed.kind) {
        (SeedSpec::CaseI { k }, SeedKind::CaseI { k_type, .. }) => k_type.to_string() == *k,
        (SeedSpec::Pair { alpha, beta }, SeedKind::Pair { .. }) => {
            seed_key_for(rs, &ExactVector::from_ints(alpha), &ExactVector::from_ints(beta))
                .is_ok_and(|key| key == seed.key)
        }
        (SeedSpec::CaseII, SeedKind::Pair { case, .. }) => *case == CaseKind::II,
        _ => false,
    }
}

fn wanted_outcome(r: Resolution) -> Option<OracleOutcome> {
    match r {
        Resolution::Survivor => None,
        Resolution::ConfirmedByModel => Some(OracleOutcome::Confirmed),
        Resolution::RefutedByModel => Some(OracleOutcome::Refuted),
    }
}

fn resolve_row(
    st: &CaseState<'_>,
    verdict: &CaseVerdict,
    exp: Option<&CorankExpectation>,
    exec: Exec,
    diffs: &mut Vec<String>,
    id: &str,
) -> (Option<Resolution>, Option<String>, Option<OracleReport>) {
    let h = verdict.h_label.clone().unwrap_or_default();
    match exp {
        Some(e) => {
            if e.h != h {
                diffs.push(format!("{id}: h = {h}, expected {}", e.h));
            }
            match wanted_outcome(e.resolution) {
                None => (Some(e.resolution), e.space.clone(), None),
                Some(want) => {
                    let rep = resolve(st, verdict, exec);
                    if rep.outcome != want {
                        diffs.push(format!(
                            "{id}: matrix check gave {:?}, expected {want:?} ({})",
                            rep.outcome, rep.detail
                        ));
                    }
                    (Some(e.resolution), e.space.clone(), Some(rep))
                }
            }
        }
        None => {
            let rep = resolve(st, verdict, exec);
            diffs.push(format!(
                "{id}: saturated with h = {h} but not in the expected table (matrix check: {:?})",
                rep.outcome
            ));
            (None, None, Some(rep))
        }
    }
}

/// Run every seed of `g`, resolve saturated ones, and diff against the table.
pub fn corank_section(types: &[SimpleType], opts: RunOptions) -> Result<(Vec<CorankRow>, Vec<String>), VerifyError> {
    let rs = RootSystem::direct_sum(types)?;
    let expected = if types.len() == 1 {
        tables::corank_one_expected(types[0], false)
    } else {
        tables::corank_one_expected(types[0], true)
    };
    let name = rs.name();
    let seeds = enumerate_seeds(&rs)?;
    let results: Vec<Result<(CorankRow, Vec<String>, Option<usize>), VerifyError>> =
        opts.exec.map_range(seeds.len(), |i| {
            let seed = seeds[i].clone();
            let id = format!("{name}#{i}");
            let desc = seed.describe();
            let case = seed.case();
            let pending: Vec<usize> = (0..expected.len())
                .filter(|&k| expectation_matches(&rs, &seed, &expected[k]))
                .collect();
            let (verdict, st) = run_seed(seed)?;
            let saturated = verdict.status == CaseStatus::Saturated;
            let exp_idx = pending
                .into_iter()
                .find(|&k| saturated || expected[k].seed != SeedSpec::CaseII);
            let mut diffs = Vec::new();
            let (resolution, space, oracle) = if verdict.status == CaseStatus::Saturated {
                resolve_row(&st, &verdict, exp_idx.map(|k| &expected[k]), opts.exec, &mut diffs, &id)
            } else {
                if let Some(k) = exp_idx {
                    diffs.push(format!("{id}: contradiction, expected saturation with h = {}", expected[k].h));
                }
                (None, None, None)
            };
            let row = CorankRow {
                id,
                g: name.clone(),
                case,
                seed: desc,
                status: verdict.status,
                rule: verdict.rule,
                h: verdict.h_label.clone(),
                k_bound: verdict.k_bound.as_ref().map(Decomposition::to_string),
                resolution,
                space,
                oracle,
                trace: opts.traces.then(|| st.trace.clone()),
            };
            let matched = exp_idx.filter(|_| verdict.status == CaseStatus::Saturated);
            Ok((row, diffs, matched))
        });
    let mut rows = Vec::new();
    let mut diffs = Vec::new();
    let mut seen = BTreeSet::new();
    for r in results {
        let (row, d, matched) = r?;
        rows.push(row);
        diffs.extend(d);
        if let Some(k) = matched {
            seen.insert(k);
        }
    }
    for (k, e) in expected.iter().enumerate() {
        if !seen.contains(&k) {
            diffs.push(format!("{name}: expected saturated seed {:?} with h = {} not found", e.seed, e.h));
        }
    }
    Ok((rows, diffs))
}

pub fn equal_rank_section(g: SimpleType, exec: Exec) -> Result<(EqualRankSection, Vec<String>), VerifyError> {
    let rep = classify_equal_rank_with(g.label, g.rank, crate::equal_rank::DEFAULT_CAP, exec)?;
    let got: BTreeSet<Decomposition> = rep.survivor_types().into_iter().map(|d| d.normalized()).collect();
    let want: BTreeSet<Decomposition> = tables::equal_rank_survivors(g).into_iter().map(|s| s.h).collect();
    let mut diffs = Vec::new();
    for d in got.difference(&want) {
        diffs.push(format!("{g}: unexpected equal-rank survivor {d}"));
    }
    for d in want.difference(&got) {
        diffs.push(format!("{g}: missing equal-rank survivor {d}"));
    }
    let survivors = rep
        .survivors()
        .iter()
        .map(|c| NamedRow {
            h: c.h_type.clone(),
            space: c.space.clone(),
        })
        .collect();
    Ok((
        EqualRankSection {
            g: g.to_string(),
            candidates: rep.candidates.len(),
            survivors,
        },
        diffs,
    ))
}

pub fn condition_r_section(pairs: usize) -> Result<(Vec<ConditionRRow>, Vec<String>), VerifyError> {
    let mut rows = Vec::new();
    let mut diffs = Vec::new();
    for name in catalog() {
        let rep = condition_r_report(name, &default_t_samples(), pairs, 0x5eed)?;
        let expected = tables::condition_r_expected(&rep.space);
        if let Some(e) = expected {
            if e != rep.fails_condition_r {
                diffs.push(format!(
                    "{}: Condition (R) fails = {}, expected {e}",
                    rep.space, rep.fails_condition_r
                ));
            }
        }
        rows.push(ConditionRRow {
            space: rep.space.clone(),
            pairs: rep.pairs.len(),
            dependent_pairs: rep.dependent_pairs,
            fails_condition_r: rep.fails_condition_r,
            expected,
        });
    }
    Ok((rows, diffs))
}

pub fn verify_theorem1(caps: RankCaps, opts: RunOptions) -> Result<Theorem1Report, VerifyError> {
    caps.validate()?;
    let mut diffs = Vec::new();
    let mut equal_rank = Vec::new();
    let mut survivors = BTreeSet::new();
    for g in caps.simple_types() {
        let (sec, d) = equal_rank_section(g, opts.exec)?;
        survivors.extend(sec.survivors.iter().filter_map(|r| r.space.clone()));
        equal_rank.push(sec);
        diffs.extend(d);
    }
    let mut corank_one = Vec::new();
    let groups: Vec<Vec<SimpleType>> = caps
        .simple_types()
        .into_iter()
        .map(|t| vec![t])
        .chain(caps.case_ii_types())
        .collect();
    for types in groups {
        let (rows, d) = corank_section(&types, opts)?;
        survivors.extend(
            rows.iter()
                .filter(|r| matches!(r.resolution, Some(Resolution::Survivor | Resolution::ConfirmedByModel)))
                .filter_map(|r| r.space.clone()),
        );
        corank_one.extend(rows);
        diffs.extend(d);
    }
    let (condition_r, d) = condition_r_section(opts.condition_r_pairs)?;
    diffs.extend(d);
    Ok(Theorem1Report {
        command: "verify theorem1".into(),
        caps,
        equal_rank,
        corank_one,
        condition_r,
        survivors: survivors.into_iter().collect(),
        diffs,
    })
}

/// Rule-by-rule trace of a seed given as `<g>#<index>`, e.g. `B2#3`.
pub fn explain(seed_id: &str) -> Result<String, VerifyError> {
    let unknown = || VerifyError::UnknownSeed(seed_id.to_string());
    let (g, idx) = seed_id.rsplit_once('#').ok_or_else(unknown)?;
    let idx: usize = idx.parse().map_err(|_| unknown())?;
    let dec = Decomposition::parse(g).filter(|d| d.torus_corank == 0 && !d.components.is_empty());
    let dec = dec.ok_or_else(unknown)?;
    let rs = RootSystem::direct_sum(&dec.components)?;
    let seeds = enumerate_seeds(&rs)?;
    let seed = seeds.get(idx).cloned().ok_or_else(unknown)?;
    let mut out = format!("{seed_id}: {}\n", seed.describe());
    let (verdict, st) = run_seed(seed)?;
    for (k, step) in st.trace.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>3}. [{}] {} ⇒ {}\n       ({})",
            k + 1,
            step.rule,
            step.inputs.join(", "),
            step.conclusion,
            step.rule.summary()
        );
    }
    match verdict.status {
        CaseStatus::Contradiction => {
            let rule = verdict.rule.map_or("?".into(), |r| r.to_string());
            let _ = writeln!(out, "contradiction by rule {rule}: {}", verdict.detail);
        }
        CaseStatus::Saturated => {
            let _ = writeln!(
                out,
                "saturated: h = {}, k ⊂ {}",
                verdict.h_label.as_deref().unwrap_or("?"),
                verdict.k_bound.as_ref().map_or("?".into(), Decomposition::to_string)
            );
            let rep = resolve(&st, &verdict, Exec::default());
            if rep.outcome == OracleOutcome::Inconclusive {
                let _ = writeln!(out, "no matrix-level check applies; compare with the expected survivor table");
            } else {
                let _ = writeln!(out, "matrix check ({}, {}): {:?}, {}", rep.method, rep.model, rep.outcome, rep.detail);
            }
        }
    }
    Ok(out)
}
