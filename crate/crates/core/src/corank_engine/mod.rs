//! Corank-one propagation: from a seed `(α, β)` with `pr(α) = pr(β)` (or a
//! case I subalgebra) derive plane labels and projected roots of `h` until a
//! contradiction or a fixed point.

mod projection;
mod seeds;
mod state;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::ExactVector;
use crate::par::Exec;
use crate::root_systems::{RootError, RootSystem};

pub use projection::{Combo, Lams, Lookup, Planes, Projection};
pub use seeds::{
    angle_name, enumerate_seeds, enumerate_seeds_all, hexagonal_same_factor, pair_seed, seed_key_for,
    CaseKind, CorankSeed, SeedKey, SeedKind,
};
pub use state::{
    closure, survivor_root_counts, CaseState, CaseStatus, CaseVerdict, Contradiction, FlatCertificate,
    PlaneLabel, RuleId, TraceStep, DEFAULT_ORDER,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorankError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("z = α − β has zero length")]
    ZeroAxis,
    #[error("seed pair is degenerate")]
    DegenerateSeed,
    #[error("survivor has no center")]
    NoCenter,
}

/// Initialise the propagation state of a seed.
pub fn init_case(seed: CorankSeed<'_>) -> Result<CaseState<'_>, CorankError> {
    CaseState::new(seed)
}

/// Saturate one seed in the default rule order.
pub fn run_seed(seed: CorankSeed<'_>) -> Result<(CaseVerdict, CaseState<'_>), CorankError> {
    let mut st = init_case(seed)?;
    let v = st.saturate();
    Ok((v, st))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub id: String,
    pub case: CaseKind,
    pub alpha: Option<ExactVector>,
    pub beta: Option<ExactVector>,
    pub angle: Option<String>,
    pub k_type: Option<String>,
    pub key: SeedKey,
    pub verdict: CaseVerdict,
    pub hexagon_skips: usize,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorankReport {
    pub g: String,
    pub seeds: Vec<SeedOutcome>,
}

impl CorankReport {
    pub fn saturated(&self) -> Vec<&SeedOutcome> {
        self.seeds
            .iter()
            .filter(|s| s.verdict.status == CaseStatus::Saturated)
            .collect()
    }
}

pub fn outcome(id: String, seed: &CorankSeed<'_>, st: &CaseState<'_>, verdict: CaseVerdict) -> SeedOutcome {
    let rs = seed.rs;
    let (alpha, beta) = match seed.pair() {
        Some((a, b)) => (Some(rs.root(a).clone()), Some(rs.root(b).clone())),
        None => (None, None),
    };
    let k_type = match &seed.kind {
        SeedKind::CaseI { k_type, .. } => Some(k_type.to_string()),
        SeedKind::Pair { .. } => None,
    };
    SeedOutcome {
        id,
        case: seed.case(),
        alpha,
        beta,
        angle: seed.angle().map(str::to_string),
        k_type,
        key: seed.key.clone(),
        verdict,
        hexagon_skips: st.hexagon_skips.len(),
        trace: st.trace.clone(),
    }
}

/// Saturate every seed of `rs`.
pub fn run_corank_one(rs: &RootSystem, exec: Exec) -> Result<CorankReport, CorankError> {
    let seeds = enumerate_seeds(rs)?;
    let name = rs.name();
    let rows: Vec<Result<SeedOutcome, CorankError>> = exec.map_range(seeds.len(), |i| {
        let seed = seeds[i].clone();
        let (v, st) = run_seed(seed.clone())?;
        Ok(outcome(format!("{name}#{i}"), &seed, &st, v))
    });
    Ok(CorankReport {
        g: name,
        seeds: rows.into_iter().collect::<Result<_, _>>()?,
    })
}
