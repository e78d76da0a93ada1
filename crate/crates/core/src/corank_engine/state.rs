//! Propagation state of one corank-one case and the inference rules acting on it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::equal_rank::pruned_survivors;
use crate::exact_arith::{linalg, ExactVector, Rational};
use crate::root_systems::{identify_vectors, Decomposition, RootError, RootSet, RootSystem, SumDiff};

use super::projection::{Combo, Lams, Lookup, Planes, Projection};
use super::seeds::{hexagonal_same_factor, CaseKind, CorankSeed, SeedKind};
use super::CorankError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    Init,
    A,
    B,
    C,
    D,
    E,
    F,
    #[serde(rename = "F'")]
    FPrime,
    G,
    H,
    K,
}

impl RuleId {
    pub fn summary(self) -> &'static str {
        match self {
            RuleId::Init => "seed: pr(α) = pr(β) = α' is a root of h, t ∩ m = ℝz",
            RuleId::A => "a root orthogonal to z is its own projection, hence a root of h",
            RuleId::B => "a root parallel to z has zero projection, so its plane lies in m",
            RuleId::C => "a projection incompatible with a root of h is not a root of h; its planes lie in m",
            RuleId::D => "two m-planes at angle π/3 or 2π/3 whose span contains z force pr(γ1+γ2) or pr(γ1−γ2) into Δ_h",
            RuleId::E => "bracket transport: [h, m] ⊂ m, [h, h] ⊂ h, and Δ_h is closed under its own reflections",
            RuleId::F => "two commuting m-planes whose flat splitting subalgebra splits along h ⊕ m",
            RuleId::FPrime => "an m-plane orthogonal to z would give a flat of dimension two in m",
            RuleId::G => "carrier exhaustion: a root of h needs a plane outside m, and h_{α'} is not a root plane",
            RuleId::H => "Δ_h is reduced: λ and 2λ are never both roots of h",
            RuleId::K => "the subalgebra generated by h and t is proper and fits no surviving equal-rank pair",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::Init => "init",
            RuleId::A => "A",
            RuleId::B => "B",
            RuleId::C => "C",
            RuleId::D => "D",
            RuleId::E => "E",
            RuleId::F => "F",
            RuleId::FPrime => "F'",
            RuleId::G => "G",
            RuleId::H => "H",
            RuleId::K => "K",
        };
        f.write_str(s)
    }
}

/// Priority order used by [`CaseState::saturate`].
pub const DEFAULT_ORDER: [RuleId; 10] = [
    RuleId::A,
    RuleId::B,
    RuleId::H,
    RuleId::C,
    RuleId::G,
    RuleId::D,
    RuleId::E,
    RuleId::K,
    RuleId::FPrime,
    RuleId::F,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaneLabel {
    /// `g_γ ⊂ h`
    H,
    /// `g_γ ⊂ m`
    M,
    U,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleId,
    pub inputs: Vec<String>,
    pub conclusion: String,
}

/// Root-level data of a flat splitting subalgebra `span(v1, v2) ⊕ S1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatCertificate {
    pub gamma1: usize,
    pub gamma2: usize,
    /// Roots commuting with both planes.
    pub commuting: Vec<usize>,
    /// Basis of `t` (root indices) in which `s1` is written.
    pub basis: Vec<usize>,
    pub s1: Vec<Vec<Rational>>,
    pub z_in_s1: bool,
}

impl FlatCertificate {
    /// Recompute every claim from the root tables.
    pub fn check(&self, rs: &RootSystem, proj: &Projection) -> bool {
        let (g1, g2) = (self.gamma1, self.gamma2);
        if rs.is_pm(g1, g2) || rs.sum_diff_status_idx(g1, g2) != SumDiff::Neither {
            return false;
        }
        let commutes = |d: usize, g: usize| {
            !rs.is_pm(d, g) && rs.sum(d, g).is_none() && rs.diff(d, g).is_none()
        };
        let expected: Vec<usize> = (0..rs.len())
            .filter(|&d| rs.is_positive(d) && commutes(d, g1) && commutes(d, g2))
            .collect();
        if expected != self.commuting {
            return false;
        }
        let mut rows: linalg::RatMatrix = Vec::new();
        for &r in [g1, g2].iter().chain(&self.commuting) {
            rows.push(self.basis.iter().map(|&b| rs.gram(b, r).clone()).collect());
        }
        let r = self.basis.len();
        if self.s1.len() != r - linalg::rank(&rows) {
            return false;
        }
        for w in &self.s1 {
            for row in &rows {
                let v: Rational = row.iter().zip(w).map(|(a, b)| a * b).sum();
                if !v.is_zero() {
                    return false;
                }
            }
        }
        let z_perp = self.s1.iter().all(|w| {
            let v: Rational = self.basis.iter().zip(w).map(|(&b, c)| proj.zdot(b) * c).sum();
            v.is_zero()
        });
        let z_in = [g1, g2]
            .iter()
            .chain(&self.commuting)
            .all(|&x| proj.zdot(x).is_zero());
        z_in == self.z_in_s1 && (z_in || z_perp)
    }
}

#[derive(Clone, Debug)]
pub struct Contradiction {
    pub rule: RuleId,
    pub detail: String,
    pub witness_roots: Vec<usize>,
    pub witness: Vec<ExactVector>,
    pub certificate: Option<FlatCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseStatus {
    Contradiction,
    Saturated,
}

/// Outcome of saturating one seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseVerdict {
    pub status: CaseStatus,
    pub rule: Option<RuleId>,
    pub detail: String,
    pub witness: Vec<ExactVector>,
    pub witness_roots: Vec<usize>,
    pub certificate: Option<FlatCertificate>,
    /// Type of the projected roots of `h`, measured against `rank g − 1`.
    pub derived_h_type: Option<Decomposition>,
    /// Same, with the diagonal factor of a case II seed written `Δ(A1)`.
    pub h_label: Option<String>,
    /// Type of the smallest closed subsystem containing every plane not in `m`.
    pub k_bound: Option<Decomposition>,
    /// Projected roots neither in `Δ_h` nor excluded.
    pub undetermined: Vec<ExactVector>,
    pub steps: usize,
}

type RuleResult = Result<bool, Box<Contradiction>>;

pub struct CaseState<'a> {
    pub seed: CorankSeed<'a>,
    pub proj: Projection,
    pub planes: Planes,
    pub lams: Lams,
    pub labels: Vec<PlaneLabel>,
    pub h: BTreeSet<usize>,
    pub eliminated: BTreeSet<usize>,
    /// Class of `α'` for pair seeds.
    pub alpha: Option<usize>,
    pub trace: Vec<TraceStep>,
    /// Hexagonal pairs of m-planes passed over because `z` is not in their span.
    pub hexagon_skips: BTreeSet<(usize, usize)>,
    basis: Vec<usize>,
    pending: Option<Box<Contradiction>>,
    k_seen: Option<(usize, Decomposition, usize)>,
}

fn rs_sum2(rs: &RootSystem, c: usize, g: usize, sign: bool) -> bool {
    let step = if sign { rs.sum(c, g) } else { rs.diff(c, g) };
    step.is_some_and(|k| if sign { rs.sum(k, g) } else { rs.diff(k, g) }.is_some())
}

impl<'a> CaseState<'a> {
    pub fn new(seed: CorankSeed<'a>) -> Result<CaseState<'a>, CorankError> {
        let rs = seed.rs;
        let proj = Projection::new(rs, &seed.axis)?;
        let planes = Planes::new(rs);
        let lams = Lams::new(&proj, &planes);
        let basis = rs.simple_roots(&rs.all())?;
        let mut st = CaseState {
            labels: vec![PlaneLabel::U; planes.len()],
            seed,
            proj,
            planes,
            lams,
            h: BTreeSet::new(),
            eliminated: BTreeSet::new(),
            alpha: None,
            trace: Vec::new(),
            hexagon_skips: BTreeSet::new(),
            basis,
            pending: None,
            k_seen: None,
        };
        st.initialise()?;
        Ok(st)
    }

    fn initialise(&mut self) -> Result<(), CorankError> {
        let rs = self.seed.rs;
        let kind = self.seed.kind.clone();
        let res = match kind {
            SeedKind::CaseI { k_roots, k_type } => {
                let inputs = vec![format!("k = {k_type}")];
                let mut r = Ok(true);
                for p in 0..self.planes.len() {
                    let lab = if k_roots.contains(self.planes.root[p]) {
                        PlaneLabel::H
                    } else {
                        PlaneLabel::M
                    };
                    r = r.and_then(|_| self.set_label(p, lab, RuleId::Init, inputs.clone()));
                    if lab == PlaneLabel::H {
                        if let Some(l) = self.lam_of(p) {
                            r = r.and_then(|_| self.add_h(l, RuleId::Init, inputs.clone()));
                        }
                    }
                }
                r
            }
            SeedKind::Pair { alpha, beta, .. } => {
                let pa = self.planes.of_root[alpha];
                let pb = self.planes.of_root[beta];
                let la = self.lam_of(pa).ok_or(CorankError::DegenerateSeed)?;
                if self.lam_of(pb) != Some(la) {
                    return Err(CorankError::DegenerateSeed);
                }
                self.alpha = Some(la);
                let inputs = vec![self.rstr(alpha), self.rstr(beta)];
                let r = self.add_h(la, RuleId::Init, inputs);
                if hexagonal_same_factor(rs, alpha, beta) {
                    let c = self.contra(
                        RuleId::D,
                        "seed pair at angle π/3 or 2π/3 in one factor: α ∓ β is a root with zero projection".into(),
                        vec![alpha, beta],
                        vec![],
                    );
                    self.pending = Some(c);
                }
                r
            }
        };
        if let Err(c) = res {
            self.pending = Some(c);
        }
        Ok(())
    }

    pub fn rs(&self) -> &'a RootSystem {
        self.seed.rs
    }

    pub fn lam_of(&self, p: usize) -> Option<usize> {
        self.lams.of_plane[p].map(|(l, _)| l)
    }

    pub fn lam_vector(&self, l: usize) -> ExactVector {
        self.proj.vector(self.rs(), &self.lams.rep(l))
    }

    fn rstr(&self, i: usize) -> String {
        self.rs().root(i).to_string()
    }

    fn lstr(&self, l: usize) -> String {
        format!("pr{}", self.rs().root(self.lams.reps[l]))
    }

    fn pstr(&self, p: usize) -> String {
        self.rstr(self.planes.root[p])
    }

    fn contra(&self, rule: RuleId, detail: String, roots: Vec<usize>, lams: Vec<usize>) -> Box<Contradiction> {
        let mut witness: Vec<ExactVector> = roots.iter().map(|&i| self.rs().root(i).clone()).collect();
        witness.extend(lams.iter().map(|&l| self.lam_vector(l)));
        Box::new(Contradiction {
            rule,
            detail,
            witness_roots: roots,
            witness,
            certificate: None,
        })
    }

    fn note(&mut self, rule: RuleId, inputs: Vec<String>, conclusion: String) {
        self.trace.push(TraceStep {
            rule,
            inputs,
            conclusion,
        });
    }

    fn set_label(&mut self, p: usize, lab: PlaneLabel, rule: RuleId, inputs: Vec<String>) -> RuleResult {
        let cur = self.labels[p];
        if cur == lab {
            return Ok(false);
        }
        if cur != PlaneLabel::U {
            return Err(self.contra(
                rule,
                format!("plane {} would lie in both h and m", self.pstr(p)),
                vec![self.planes.root[p]],
                vec![],
            ));
        }
        self.labels[p] = lab;
        let side = if lab == PlaneLabel::H { "h" } else { "m" };
        let c = format!("g_{} ⊂ {side}", self.pstr(p));
        self.note(rule, inputs, c);
        Ok(true)
    }

    fn add_h(&mut self, l: usize, rule: RuleId, inputs: Vec<String>) -> RuleResult {
        if self.h.contains(&l) {
            return Ok(false);
        }
        if self.eliminated.contains(&l) {
            return Err(self.contra(
                rule,
                format!("{} is forced into Δ_h after being excluded", self.lstr(l)),
                vec![],
                vec![l],
            ));
        }
        self.h.insert(l);
        self.note(rule, inputs.clone(), format!("{} ∈ Δ_h", self.lstr(l)));
        if self.lams.carriers[l].len() == 1 {
            self.set_label(self.lams.carriers[l][0], PlaneLabel::H, rule, inputs)?;
        }
        Ok(true)
    }

    fn eliminate(&mut self, l: usize, rule: RuleId, inputs: Vec<String>) -> RuleResult {
        if self.eliminated.contains(&l) {
            return Ok(false);
        }
        if self.h.contains(&l) {
            return Err(self.contra(
                rule,
                format!("{} is a root of h and cannot be excluded", self.lstr(l)),
                vec![],
                vec![l],
            ));
        }
        self.eliminated.insert(l);
        self.note(rule, inputs.clone(), format!("{} ∉ Δ_h", self.lstr(l)));
        for p in self.lams.carriers[l].clone() {
            self.set_label(p, PlaneLabel::M, rule, inputs.clone())?;
        }
        Ok(true)
    }

    fn planes_with(&self, lab: PlaneLabel) -> Vec<usize> {
        (0..self.planes.len()).filter(|&p| self.labels[p] == lab).collect()
    }

    pub fn apply(&mut self, rule: RuleId) -> RuleResult {
        match rule {
            RuleId::Init => Ok(false),
            RuleId::A => self.rule_a(),
            RuleId::B => self.rule_b(),
            RuleId::C => self.rule_c(),
            RuleId::D => self.rule_d(),
            RuleId::E => self.rule_e(),
            RuleId::F => self.rule_f(),
            RuleId::FPrime => self.rule_f_prime(),
            RuleId::G => self.rule_g(),
            RuleId::H => self.rule_h(),
            RuleId::K => self.rule_k(),
        }
    }

    fn rule_a(&mut self) -> RuleResult {
        let mut changed = false;
        for p in 0..self.planes.len() {
            let r = self.planes.root[p];
            if self.proj.zdot(r).is_zero() {
                let l = self.lam_of(p).expect("root orthogonal to z projects to itself");
                changed |= self.add_h(l, RuleId::A, vec![self.rstr(r)])?;
            }
        }
        Ok(changed)
    }

    fn rule_b(&mut self) -> RuleResult {
        let mut changed = false;
        for p in 0..self.planes.len() {
            if self.lams.of_plane[p].is_none() {
                changed |= self.set_label(p, PlaneLabel::M, RuleId::B, vec![self.pstr(p)])?;
            }
        }
        Ok(changed)
    }

    fn rule_h(&mut self) -> RuleResult {
        let h: Vec<usize> = self.h.iter().copied().collect();
        for (i, &a) in h.iter().enumerate() {
            for &b in &h[i + 1..] {
                if self.lams.ratio_two(&self.proj, a, b) {
                    return Err(self.contra(
                        RuleId::H,
                        "λ and 2λ are both roots of h".into(),
                        vec![],
                        vec![a, b],
                    ));
                }
            }
        }
        let mut changed = false;
        for x in 0..self.lams.len() {
            if self.h.contains(&x) || self.eliminated.contains(&x) {
                continue;
            }
            if let Some(&a) = h.iter().find(|&&a| self.lams.ratio_two(&self.proj, x, a)) {
                changed |= self.eliminate(x, RuleId::H, vec![self.lstr(a)])?;
            }
        }
        Ok(changed)
    }

    fn rule_c(&mut self) -> RuleResult {
        let h: Vec<usize> = self.h.iter().copied().collect();
        for (i, &a) in h.iter().enumerate() {
            for &b in &h[i + 1..] {
                if !self.lams.compatible(&self.proj, a, b) && !self.lams.ratio_two(&self.proj, a, b) {
                    return Err(self.contra(
                        RuleId::C,
                        "two roots of h violate the crystallographic condition".into(),
                        vec![],
                        vec![a, b],
                    ));
                }
            }
        }
        let mut changed = false;
        for x in 0..self.lams.len() {
            if self.h.contains(&x) || self.eliminated.contains(&x) {
                continue;
            }
            let bad = h.iter().find(|&&a| {
                !self.lams.compatible(&self.proj, x, a) && !self.lams.ratio_two(&self.proj, x, a)
            });
            if let Some(&a) = bad {
                let inputs = vec![self.lstr(x), self.lstr(a)];
                changed |= self.eliminate(x, RuleId::C, inputs)?;
            }
        }
        Ok(changed)
    }

    fn rule_g(&mut self) -> RuleResult {
        if let Some(a) = self.alpha {
            let carriers = &self.lams.carriers[a];
            if let Some(&p) = carriers.iter().find(|&&p| self.labels[p] == PlaneLabel::H) {
                return Err(self.contra(
                    RuleId::G,
                    "h_{α'} would be a root plane of g".into(),
                    vec![self.planes.root[p]],
                    vec![a],
                ));
            }
            let open: Vec<usize> = carriers
                .iter()
                .copied()
                .filter(|&p| self.labels[p] != PlaneLabel::M)
                .collect();
            if open.len() <= 1 {
                let roots = carriers.iter().map(|&p| self.planes.root[p]).collect();
                return Err(self.contra(
                    RuleId::G,
                    format!("α' has {} carrier plane(s) outside m", open.len()),
                    roots,
                    vec![a],
                ));
            }
        }
        let mut changed = false;
        for l in self.h.clone() {
            if Some(l) == self.alpha {
                continue;
            }
            let open: Vec<usize> = self.lams.carriers[l]
                .iter()
                .copied()
                .filter(|&p| self.labels[p] != PlaneLabel::M)
                .collect();
            match open.len() {
                0 => {
                    return Err(self.contra(
                        RuleId::G,
                        "every carrier plane of a root of h lies in m".into(),
                        self.lams.carriers[l].iter().map(|&p| self.planes.root[p]).collect(),
                        vec![l],
                    ))
                }
                1 => changed |= self.set_label(open[0], PlaneLabel::H, RuleId::G, vec![self.lstr(l)])?,
                _ => {}
            }
        }
        Ok(changed)
    }

    fn z_in_span(&self, i: usize, j: usize) -> bool {
        let rs = self.rs();
        let (g11, g12, g22) = (rs.gram(i, i), rs.gram(i, j), rs.gram(j, j));
        let det = g11 * g22 - g12 * g12;
        if det.is_zero() {
            return false;
        }
        let (z1, z2) = (self.proj.zdot(i), self.proj.zdot(j));
        let a = (z1 * g22 - z2 * g12) / &det;
        let b = (z2 * g11 - z1 * g12) / &det;
        a * z1 + b * z2 == self.proj.zz
    }

    /// `Ok(l)` if the combination can still be a root of h, `Err(reason)` if not.
    fn candidate(&self, c: &Combo) -> Result<usize, &'static str> {
        match self.lams.find(&self.proj, c) {
            Lookup::Zero => Err("zero"),
            Lookup::Missing => Err("not a projected root"),
            Lookup::Lam(l, _) => {
                if self.eliminated.contains(&l) {
                    Err("excluded")
                } else if !self.h.contains(&l)
                    && self.h.iter().any(|&a| !self.lams.compatible(&self.proj, l, a))
                {
                    Err("incompatible with Δ_h")
                } else {
                    Ok(l)
                }
            }
        }
    }

    fn rule_d(&mut self) -> RuleResult {
        let rs = self.rs();
        let m = self.planes_with(PlaneLabel::M);
        let mut changed = false;
        for (x, &p1) in m.iter().enumerate() {
            for &p2 in &m[x + 1..] {
                let (r1, r2) = (self.planes.root[p1], self.planes.root[p2]);
                if !hexagonal_same_factor(rs, r1, r2) {
                    continue;
                }
                if !self.z_in_span(r1, r2) {
                    self.hexagon_skips.insert((r1, r2));
                    continue;
                }
                let plus = self.candidate(&vec![(r1, 1), (r2, 1)]);
                let minus = self.candidate(&vec![(r1, 1), (r2, -1)]);
                let inputs = vec![self.rstr(r1), self.rstr(r2)];
                match (plus, minus) {
                    (Ok(l), _) | (_, Ok(l)) if self.h.contains(&l) => {}
                    (Err(a), Err(b)) => {
                        return Err(self.contra(
                            RuleId::D,
                            format!("pr(γ1+γ2): {a}; pr(γ1−γ2): {b}"),
                            vec![r1, r2],
                            vec![],
                        ))
                    }
                    (Ok(l), Err(_)) | (Err(_), Ok(l)) => {
                        changed |= self.add_h(l, RuleId::D, inputs)?;
                    }
                    (Ok(_), Ok(_)) => {}
                }
            }
        }
        Ok(changed)
    }

    fn rule_e(&mut self) -> RuleResult {
        let rs = self.rs();
        let hs = self.planes_with(PlaneLabel::H);
        let mut changed = false;
        // planes of h acting on single planes
        for &p1 in &hs {
            let r1 = self.planes.root[p1];
            for p2 in 0..self.planes.len() {
                if p2 == p1 || self.labels[p2] == PlaneLabel::U {
                    continue;
                }
                let r2 = self.planes.root[p2];
                let target = match rs.sum_diff_status_idx(r1, r2) {
                    SumDiff::SumOnly => rs.sum(r1, r2),
                    SumDiff::DiffOnly => rs.diff(r2, r1),
                    _ => None,
                };
                let Some(t) = target else { continue };
                let pt = self.planes.of_root[t];
                let inputs = vec![self.rstr(r1), self.rstr(r2)];
                if self.labels[p2] == PlaneLabel::M {
                    changed |= self.set_label(pt, PlaneLabel::M, RuleId::E, inputs)?;
                } else {
                    changed |= self.set_label(pt, PlaneLabel::H, RuleId::E, inputs.clone())?;
                    match self.lam_of(pt) {
                        None => {
                            return Err(self.contra(
                                RuleId::E,
                                "a root plane inside h brackets onto t ∩ m".into(),
                                vec![r1, r2, t],
                                vec![],
                            ))
                        }
                        Some(l) => {
                            changed |= self.add_h(l, RuleId::E, inputs.clone())?;
                            for q in self.lams.carriers[l].clone() {
                                if q != pt {
                                    changed |= self.set_label(q, PlaneLabel::M, RuleId::E, inputs.clone())?;
                                }
                            }
                        }
                    }
                }
            }
        }
        // a plane of h isolating one carrier of α'
        if let Some(a) = self.alpha {
            let open: Vec<usize> = self.lams.carriers[a]
                .iter()
                .copied()
                .filter(|&p| self.labels[p] != PlaneLabel::M)
                .collect();
            for &p1 in &hs {
                let g = self.planes.root[p1];
                let acting: Vec<usize> = open
                    .iter()
                    .copied()
                    .filter(|&p| rs.sum_diff_status_idx(self.planes.root[p], g) != SumDiff::Neither)
                    .collect();
                if acting.len() != 1 {
                    continue;
                }
                let c = self.planes.root[acting[0]];
                if rs.is_pm(c, g) || rs_sum2(rs, c, g, true) || rs_sum2(rs, c, g, false) {
                    continue;
                }
                let inputs = vec![self.rstr(g), self.rstr(c)];
                changed |= self.set_label(acting[0], PlaneLabel::M, RuleId::E, inputs)?;
            }
        }
        // reflections of Δ_h
        let h: Vec<usize> = self.h.iter().copied().collect();
        for &l in &h {
            for &m in &h {
                if l == m || !self.lams.compatible(&self.proj, l, m) {
                    continue;
                }
                let (n, _) = self.lams.cartan(&self.proj, l, m);
                let n = n.to_integer().to_i64().expect("integral Cartan number");
                if n == 0 {
                    continue;
                }
                let c = vec![(self.lams.reps[l], 1), (self.lams.reps[m], -n)];
                let inputs = vec![self.lstr(m), self.lstr(l)];
                match self.lams.find(&self.proj, &c) {
                    Lookup::Lam(x, _) => changed |= self.add_h(x, RuleId::E, inputs)?,
                    _ => {
                        return Err(self.contra(
                            RuleId::E,
                            "a reflection of Δ_h leaves the projected roots".into(),
                            vec![],
                            vec![m, l],
                        ))
                    }
                }
            }
        }
        Ok(changed)
    }

    fn rule_f_prime(&mut self) -> RuleResult {
        for p in self.planes_with(PlaneLabel::M) {
            let r = self.planes.root[p];
            if self.proj.zdot(r).is_zero() {
                return Err(self.contra(
                    RuleId::FPrime,
                    "an m-plane commutes with t ∩ m".into(),
                    vec![r],
                    vec![],
                ));
            }
        }
        Ok(false)
    }

    /// Flat splitting certificate for two commuting m-planes, if one exists.
    pub fn flat_certificate(&self, r1: usize, r2: usize) -> Option<FlatCertificate> {
        let rs = self.rs();
        let commutes = |d: usize, g: usize| {
            !rs.is_pm(d, g) && rs.sum(d, g).is_none() && rs.diff(d, g).is_none()
        };
        let commuting: Vec<usize> = self
            .planes
            .root
            .iter()
            .copied()
            .filter(|&d| commutes(d, r1) && commutes(d, r2))
            .collect();
        let mut rows: linalg::RatMatrix = Vec::new();
        for &r in [r1, r2].iter().chain(&commuting) {
            rows.push(self.basis.iter().map(|&b| rs.gram(b, r).clone()).collect());
        }
        let s1 = linalg::nullspace(&rows, self.basis.len());
        let z_in_s1 = [r1, r2]
            .iter()
            .chain(&commuting)
            .all(|&x| self.proj.zdot(x).is_zero());
        let z_perp = s1.iter().all(|w| {
            let v: Rational = self.basis.iter().zip(w).map(|(&b, c)| self.proj.zdot(b) * c).sum();
            v.is_zero()
        });
        (z_in_s1 || z_perp).then(|| FlatCertificate {
            gamma1: r1,
            gamma2: r2,
            commuting,
            basis: self.basis.clone(),
            s1,
            z_in_s1,
        })
    }

    fn rule_f(&mut self) -> RuleResult {
        let rs = self.rs();
        let m = self.planes_with(PlaneLabel::M);
        for (x, &p1) in m.iter().enumerate() {
            for &p2 in &m[x + 1..] {
                let (r1, r2) = (self.planes.root[p1], self.planes.root[p2]);
                if rs.sum_diff_status_idx(r1, r2) != SumDiff::Neither {
                    continue;
                }
                if let Some(cert) = self.flat_certificate(r1, r2) {
                    let mut c = self.contra(
                        RuleId::F,
                        format!("commuting m-planes with a split flat of dimension {}", 2 + cert.s1.len()),
                        vec![r1, r2],
                        vec![],
                    );
                    c.certificate = Some(cert);
                    return Err(c);
                }
            }
        }
        Ok(false)
    }

    /// Smallest closed subsystem containing every plane not in m.
    pub fn k_upper(&self) -> RootSet {
        let rs = self.rs();
        let mut set = RootSet::empty(rs.len());
        for p in 0..self.planes.len() {
            if self.labels[p] != PlaneLabel::M {
                let r = self.planes.root[p];
                set.insert(r);
                set.insert(rs.neg(r));
            }
        }
        closure(rs, set)
    }

    fn rule_k(&mut self) -> RuleResult {
        let mark = self.trace.len();
        if self.k_seen.as_ref().is_some_and(|k| k.0 == mark) {
            return Ok(false);
        }
        let rs = self.rs();
        let upper = self.k_upper();
        let Ok(ty) = rs.identify_type(&upper) else {
            return Ok(false);
        };
        self.k_seen = Some((mark, ty.clone(), upper.len()));
        if upper.len() == rs.len() {
            return Ok(false);
        }
        let Some(counts) = survivor_root_counts(rs) else {
            return Ok(false);
        };
        if counts.iter().any(|&c| c <= upper.len()) {
            return Ok(false);
        }
        let detail = if counts.is_empty() {
            format!("k ⊂ {ty} ≠ g and g has no equal-rank survivor")
        } else {
            format!("k ⊂ {ty} has {} roots, fewer than any equal-rank survivor", upper.len())
        };
        Err(self.contra(RuleId::K, detail, vec![], vec![]))
    }

    pub fn k_bound(&self) -> Option<Decomposition> {
        self.rs().identify_type(&self.k_upper()).ok()
    }

    /// Run the rules to a fixed point in the default priority order.
    pub fn saturate(&mut self) -> CaseVerdict {
        self.saturate_with_order(&DEFAULT_ORDER)
    }

    /// Run the rules to a fixed point; after every change the scan restarts
    /// from the first rule of `order`.
    pub fn saturate_with_order(&mut self, order: &[RuleId]) -> CaseVerdict {
        if let Some(c) = self.pending.take() {
            return self.contradiction_verdict(*c);
        }
        'outer: loop {
            for &r in order {
                match self.apply(r) {
                    Err(c) => return self.contradiction_verdict(*c),
                    Ok(true) => continue 'outer,
                    Ok(false) => {}
                }
            }
            break;
        }
        self.saturated_verdict()
    }

    fn contradiction_verdict(&mut self, c: Contradiction) -> CaseVerdict {
        self.note(c.rule, c.witness.iter().map(|v| v.to_string()).collect(), format!("contradiction: {}", c.detail));
        CaseVerdict {
            status: CaseStatus::Contradiction,
            rule: Some(c.rule),
            detail: c.detail,
            witness: c.witness,
            witness_roots: c.witness_roots,
            certificate: c.certificate,
            derived_h_type: None,
            h_label: None,
            k_bound: self.k_bound(),
            undetermined: Vec::new(),
            steps: self.trace.len(),
        }
    }

    fn h_vectors(&self, skip: Option<usize>) -> Vec<ExactVector> {
        let mut out = Vec::new();
        for &l in &self.h {
            if Some(l) == skip {
                continue;
            }
            let v = self.lam_vector(l);
            out.push(-&v);
            out.push(v);
        }
        out
    }

    fn saturated_verdict(&mut self) -> CaseVerdict {
        let rank_h = self.rs().rank() - 1;
        let derived = identify_vectors(&self.h_vectors(None), rank_h).ok();
        let label = match (self.seed.case(), self.alpha) {
            (CaseKind::II, Some(a)) => identify_vectors(&self.h_vectors(Some(a)), rank_h - 1)
                .ok()
                .map(|d| diagonal_label(&d)),
            _ => derived.as_ref().map(|d| d.to_string()),
        };
        let undetermined = (0..self.lams.len())
            .filter(|l| !self.h.contains(l) && !self.eliminated.contains(l))
            .map(|l| self.lam_vector(l))
            .collect();
        self.note(
            RuleId::Init,
            vec![],
            format!("saturated: h = {}", label.clone().unwrap_or_else(|| "?".into())),
        );
        CaseVerdict {
            status: CaseStatus::Saturated,
            rule: None,
            detail: String::new(),
            witness: Vec::new(),
            witness_roots: Vec::new(),
            certificate: None,
            derived_h_type: derived,
            h_label: label,
            k_bound: self.k_bound(),
            undetermined,
            steps: self.trace.len(),
        }
    }

    /// Number of settled facts; strictly increases along the trace.
    pub fn progress(&self) -> usize {
        self.labels.iter().filter(|l| **l != PlaneLabel::U).count() + self.h.len() + self.eliminated.len()
    }
}

fn diagonal_label(rest: &Decomposition) -> String {
    let mut parts: Vec<String> = rest.components.iter().map(|t| t.normalized().to_string()).collect();
    parts.push("Δ(A1)".into());
    match rest.torus_corank {
        0 => {}
        1 => parts.push("ℝ".into()),
        k => parts.push(format!("ℝ^{k}")),
    }
    parts.join("⊕")
}

/// Smallest subset containing `set` and closed under root addition.
pub fn closure(rs: &RootSystem, mut set: RootSet) -> RootSet {
    loop {
        let members = set.to_vec();
        let mut added = false;
        for &i in &members {
            for &j in &members {
                if let Some(k) = rs.sum(i, j) {
                    added |= set.insert(k);
                }
            }
        }
        if !added {
            return set;
        }
    }
}

/// Survivor root sets of `rs`, memoised by system name.
pub(crate) fn cached_survivors(rs: &RootSystem) -> Result<Arc<Vec<RootSet>>, RootError> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Vec<RootSet>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = rs.name();
    if let Some(v) = cache.lock().expect("survivor cache").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(pruned_survivors(rs)?);
    cache.lock().expect("survivor cache").insert(key, v.clone());
    Ok(v)
}

/// Root counts of the proper equal-rank subalgebras of `rs` that pass every
/// filter, assembled factor by factor.
pub fn survivor_root_counts(rs: &RootSystem) -> Option<Vec<usize>> {
    let total: usize = rs.factors.iter().map(|f| f.ty.root_count()).sum();
    let mut out = Vec::new();
    for f in &rs.factors {
        let fr = RootSystem::build(f.ty.label, f.ty.rank).ok()?;
        let counts = cached_survivors(&fr).ok()?;
        out.extend(counts.iter().map(|c| c.len() + total - f.ty.root_count()));
    }
    Some(out)
}

impl fmt::Debug for CaseState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CaseState({}, {} steps)", self.seed.describe(), self.trace.len())
    }
}
