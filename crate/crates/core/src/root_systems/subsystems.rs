use std::collections::{BTreeMap, HashMap};

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_arith::linalg;
use crate::exact_arith::Rational;

use super::{AngleClass, Decomposition, RootError, RootSet, RootSystem};

pub const DEFAULT_RANK_CAP: usize = 8;

/// Conjugation-invariant fingerprint of a root subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetSignature {
    pub cardinality: usize,
    pub len_sq: Vec<(Rational, usize)>,
    pub pair_classes: Vec<(AngleClass, usize)>,
    pub h_type: Decomposition,
    /// Cardinality and type of the intersection with each simple factor of a
    /// reducible system; empty for irreducible ones.
    pub per_factor: Vec<(usize, Decomposition)>,
}

/// A symmetric closed subset of roots together with its signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSubsystem {
    pub roots: RootSet,
    pub signature: SubsetSignature,
}

#[derive(Clone)]
pub(super) struct PairClasses {
    ids: Vec<u16>,
    classes: Vec<AngleClass>,
}

impl RootSystem {
    fn pair_classes(&self) -> &PairClasses {
        self.pair_class.get_or_init(|| {
            let n = self.len();
            let mut lookup: HashMap<AngleClass, u16> = HashMap::new();
            let mut classes = Vec::new();
            let mut ids = vec![0u16; n * n];
            for i in 0..n {
                for j in i..n {
                    let mut c = self.angle_class_idx(i, j);
                    if c.len_ratio_sq < Rational::from_integer(1.into()) {
                        c.len_ratio_sq = c.len_ratio_sq.recip();
                    }
                    let id = *lookup.entry(c.clone()).or_insert_with(|| {
                        classes.push(c);
                        (classes.len() - 1) as u16
                    });
                    ids[i * n + j] = id;
                    ids[j * n + i] = id;
                }
            }
            PairClasses { ids, classes }
        })
    }

    pub fn signature(&self, subset: &RootSet) -> Result<SubsetSignature, RootError> {
        let pc = self.pair_classes();
        let n = self.len();
        let members = subset.to_vec();
        let mut counts = vec![0usize; pc.classes.len()];
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                counts[pc.ids[i * n + j] as usize] += 1;
            }
        }
        let mut pair_classes: Vec<(AngleClass, usize)> = counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(k, c)| (pc.classes[k].clone(), c))
            .collect();
        pair_classes.sort();
        let mut lens: BTreeMap<Rational, usize> = BTreeMap::new();
        for &i in &members {
            *lens.entry(self.norm_sq(i).clone()).or_default() += 1;
        }
        let mut per_factor = Vec::new();
        if self.factors.len() > 1 {
            for f in 0..self.factors.len() {
                let part = subset.intersection(&self.factor_roots(f));
                per_factor.push((part.len(), self.identify_type(&part)?));
            }
        }
        Ok(SubsetSignature {
            per_factor,
            cardinality: members.len(),
            len_sq: lens.into_iter().collect(),
            pair_classes,
            h_type: self.identify_type(subset)?,
        })
    }

    /// Closed under negation and under root addition inside the system.
    pub fn is_closed_symmetric(&self, subset: &RootSet) -> bool {
        let members = subset.to_vec();
        members.iter().all(|&i| subset.contains(self.neg(i)))
            && members.iter().all(|&i| {
                members
                    .iter()
                    .all(|&j| self.sum(i, j).is_none_or(|k| subset.contains(k)))
            })
    }

    /// Irreducible components of a root subsystem (connected components of
    /// the non-orthogonality graph).
    pub fn components(&self, subset: &RootSet) -> Vec<RootSet> {
        let members = subset.to_vec();
        let mut seen = RootSet::empty(self.len());
        let mut out = Vec::new();
        for &s in &members {
            if seen.contains(s) {
                continue;
            }
            let mut comp = RootSet::empty(self.len());
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(u) = stack.pop() {
                comp.insert(u);
                for &v in &members {
                    if !seen.contains(v) && !self.gram(u, v).is_zero() {
                        seen.insert(v);
                        stack.push(v);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Maximal proper closed symmetric subsets of an irreducible closed
    /// subsystem, one per node of its extended Dynkin diagram with prime
    /// mark and one Levi subsystem per node with mark one.
    pub fn maximal_closed(&self, subset: &RootSet) -> Result<Vec<RootSet>, RootError> {
        let simple = self.simple_roots(subset)?;
        let k = simple.len();
        let g: linalg::RatMatrix = simple
            .iter()
            .map(|&i| simple.iter().map(|&j| self.gram(i, j).clone()).collect())
            .collect();
        let members = subset.to_vec();
        let mut coeffs: Vec<Vec<i64>> = Vec::with_capacity(members.len());
        for &r in &members {
            let b: Vec<Rational> = simple.iter().map(|&j| self.gram(r, j).clone()).collect();
            let c = linalg::solve(&g, &b).ok_or_else(|| {
                RootError::NotRootSystem("root outside the span of simple roots".into())
            })?;
            coeffs.push(
                c.iter()
                    .map(|q| q.to_integer().to_i64().expect("integral coefficient"))
                    .collect(),
            );
        }
        let highest = (0..members.len())
            .max_by_key(|&a| (coeffs[a].iter().sum::<i64>(), std::cmp::Reverse(a)))
            .expect("nonempty");
        let marks = coeffs[highest].clone();
        let mut out = Vec::new();
        for i in 0..k {
            let m = marks[i];
            let keep: Box<dyn Fn(i64) -> bool> = match m {
                1 => Box::new(|c| c == 0),
                2 | 3 | 5 => Box::new(move |c: i64| c % m == 0),
                _ => continue,
            };
            let sub = RootSet::from_indices(
                self.len(),
                members
                    .iter()
                    .zip(&coeffs)
                    .filter(|(_, c)| keep(c[i]))
                    .map(|(&r, _)| r),
            );
            out.push(sub);
        }
        Ok(out)
    }

    /// Every symmetric closed subset of the system up to signature
    /// equivalence, including the empty set (the torus) and the whole system.
    pub fn closed_subsystems(&self) -> Result<Vec<ClosedSubsystem>, RootError> {
        self.closed_subsystems_capped(DEFAULT_RANK_CAP)
    }

    pub fn closed_subsystems_capped(&self, cap: usize) -> Result<Vec<ClosedSubsystem>, RootError> {
        if self.rank() > cap {
            return Err(RootError::CapExceeded(self.rank(), cap));
        }
        let mut by_sig: BTreeMap<SubsetSignature, RootSet> = self
            .descent_closed()?
            .into_iter()
            .map(|c| (c.signature, c.roots))
            .collect();
        if self.len() <= 2 * BRUTE_FORCE_MAX_PAIRS && self.rank() <= 3 {
            for c in brute_force_closed(self)? {
                by_sig.entry(c.signature).or_insert(c.roots);
            }
        }
        Ok(by_sig
            .into_iter()
            .map(|(signature, roots)| ClosedSubsystem { roots, signature })
            .collect())
    }

    /// Closed subsets reached by recursive descent through maximal closed
    /// subsystems alone, without the brute-force union.
    pub fn descent_closed(&self) -> Result<Vec<ClosedSubsystem>, RootError> {
        let mut memo = HashMap::new();
        let sets = self.closed_within(&self.all(), &mut memo)?;
        let mut by_sig: BTreeMap<SubsetSignature, RootSet> = BTreeMap::new();
        for s in sets {
            let sig = self.signature(&s)?;
            by_sig.entry(sig).or_insert(s);
        }
        Ok(by_sig
            .into_iter()
            .map(|(signature, roots)| ClosedSubsystem { roots, signature })
            .collect())
    }

    fn closed_within(
        &self,
        s: &RootSet,
        memo: &mut HashMap<RootSet, Vec<RootSet>>,
    ) -> Result<Vec<RootSet>, RootError> {
        if let Some(v) = memo.get(s) {
            return Ok(v.clone());
        }
        let comps = self.components(s);
        let mut acc: BTreeMap<SubsetSignature, RootSet> = BTreeMap::new();
        if comps.is_empty() {
            let e = RootSet::empty(self.len());
            acc.insert(self.signature(&e)?, e);
        } else if comps.len() == 1 {
            acc.insert(self.signature(s)?, s.clone());
            for m in self.maximal_closed(s)? {
                for sub in self.closed_within(&m, memo)? {
                    let sig = self.signature(&sub)?;
                    acc.entry(sig).or_insert(sub);
                }
            }
        } else {
            let mut partial: BTreeMap<SubsetSignature, RootSet> = BTreeMap::new();
            let e = RootSet::empty(self.len());
            partial.insert(self.signature(&e)?, e);
            for c in &comps {
                let options = self.closed_within(c, memo)?;
                let mut next = BTreeMap::new();
                for base in partial.values() {
                    for o in &options {
                        let u = base.union(o);
                        let sig = self.signature(&u)?;
                        next.entry(sig).or_insert(u);
                    }
                }
                partial = next;
            }
            acc = partial;
        }
        let out: Vec<RootSet> = acc.into_values().collect();
        memo.insert(s.clone(), out.clone());
        Ok(out)
    }
}

/// Largest number of root pairs enumerated by [`brute_force_closed`].
pub const BRUTE_FORCE_MAX_PAIRS: usize = 16;

/// Exhaustive enumeration of all symmetric closed subsets, deduplicated by
/// signature. Used as an oracle for small systems.
pub fn brute_force_closed(rs: &RootSystem) -> Result<Vec<ClosedSubsystem>, RootError> {
    let pos: Vec<usize> = (0..rs.len()).filter(|&i| rs.is_positive(i)).collect();
    let p = pos.len();
    if p > BRUTE_FORCE_MAX_PAIRS {
        return Err(RootError::CapExceeded(p, BRUTE_FORCE_MAX_PAIRS));
    }
    let mut by_sig: BTreeMap<SubsetSignature, RootSet> = BTreeMap::new();
    for mask in 0u64..(1 << p) {
        let mut s = RootSet::empty(rs.len());
        for (b, &i) in pos.iter().enumerate() {
            if mask >> b & 1 == 1 {
                s.insert(i);
                s.insert(rs.neg(i));
            }
        }
        if rs.is_closed_symmetric(&s) {
            let sig = rs.signature(&s)?;
            by_sig.entry(sig).or_insert(s);
        }
    }
    Ok(by_sig
        .into_iter()
        .map(|(signature, roots)| ClosedSubsystem { roots, signature })
        .collect())
}
