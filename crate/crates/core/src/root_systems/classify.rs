use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact_arith::{ExactVector, Rational};

use super::{RootError, RootSet, RootSystem, SimpleType, TypeLabel};

/// Cartan-type decomposition of a reductive root datum: simple factors plus
/// the dimension of the center.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decomposition {
    pub components: Vec<SimpleType>,
    pub torus_corank: usize,
}

impl Decomposition {
    pub fn new(mut components: Vec<SimpleType>, torus_corank: usize) -> Self {
        sort_types(&mut components);
        Decomposition {
            components,
            torus_corank,
        }
    }

    pub fn semisimple_rank(&self) -> usize {
        self.components.iter().map(|t| t.rank).sum()
    }

    /// Canonical form with low-rank coincidences identified (`C2 = B2`,
    /// `D3 = A3`, `D2 = A1⊕A1`, `B1 = C1 = A1`).
    pub fn normalized(&self) -> Decomposition {
        let mut out = Vec::new();
        for t in &self.components {
            if t.label == TypeLabel::D && t.rank == 2 {
                out.push(SimpleType::new(TypeLabel::A, 1));
                out.push(SimpleType::new(TypeLabel::A, 1));
            } else {
                out.push(t.normalized());
            }
        }
        Decomposition::new(out, self.torus_corank)
    }

    pub fn same_type(&self, other: &Decomposition) -> bool {
        self.normalized() == other.normalized()
    }

    /// Parse names such as `B3`, `C2⊕A1`, `A2+R`, `D4⊕ℝ^2`, `torus`.
    pub fn parse(s: &str) -> Option<Decomposition> {
        let mut comps = Vec::new();
        let mut torus = 0;
        let cleaned = s.replace('⊕', "+").replace('ℝ', "R");
        for part in cleaned.split('+').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("torus") || part.starts_with('R') || part.starts_with('T') {
                let k = part
                    .trim_start_matches(|c: char| c.is_alphabetic())
                    .trim_start_matches('^');
                torus += if k.is_empty() { 1 } else { k.parse::<usize>().ok()? };
                continue;
            }
            let (lab, rank) = if part.len() >= 2 && TypeLabel::parse(&part[..2]).is_some_and(|l| !l.is_classical()) {
                let l = TypeLabel::parse(&part[..2])?;
                (l, l.fixed_rank()?)
            } else {
                let l = TypeLabel::parse(&part[..1])?;
                (l, part[1..].parse::<usize>().ok()?)
            };
            comps.push(SimpleType::new(lab, rank));
        }
        Some(Decomposition::new(comps, torus))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.components.iter().map(|t| t.to_string()).collect();
        match self.torus_corank {
            0 => {}
            1 => parts.push("ℝ".into()),
            k => parts.push(format!("ℝ^{k}")),
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join("⊕"))
    }
}

fn sort_types(v: &mut [SimpleType]) {
    v.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.label.cmp(&b.label)));
}

/// Local tables for a finite symmetric vector set, indexed `0..n`.
pub(super) struct LocalRoots {
    pub gram: Vec<Vec<Rational>>,
    pub sum: Vec<Vec<Option<usize>>>,
    pub neg: Vec<usize>,
    pub positive: Vec<bool>,
}

impl LocalRoots {
    pub fn from_subset(rs: &RootSystem, subset: &RootSet) -> Result<LocalRoots, RootError> {
        let members = subset.to_vec();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let mut neg = Vec::with_capacity(members.len());
        for &i in &members {
            neg.push(*local.get(&rs.neg(i)).ok_or(RootError::NotSymmetric)?);
        }
        let gram = members
            .iter()
            .map(|&i| members.iter().map(|&j| rs.gram(i, j).clone()).collect())
            .collect();
        let sum = members
            .iter()
            .map(|&i| {
                members
                    .iter()
                    .map(|&j| rs.sum(i, j).and_then(|k| local.get(&k).copied()))
                    .collect()
            })
            .collect();
        let positive = members.iter().map(|&i| rs.is_positive(i)).collect();
        Ok(LocalRoots {
            gram,
            sum,
            neg,
            positive,
        })
    }

    pub fn from_vectors(vecs: &[ExactVector]) -> Result<LocalRoots, RootError> {
        let index: HashMap<&ExactVector, usize> = vecs.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut neg = Vec::with_capacity(vecs.len());
        for v in vecs {
            if v.is_zero() {
                return Err(RootError::ZeroVector);
            }
            neg.push(*index.get(&(-v)).ok_or(RootError::NotSymmetric)?);
        }
        let mut gram = Vec::with_capacity(vecs.len());
        for a in vecs {
            let mut row = Vec::with_capacity(vecs.len());
            for b in vecs {
                row.push(a.dot(b).as_rational().cloned().ok_or(RootError::Irrational)?);
            }
            gram.push(row);
        }
        let sum = vecs
            .iter()
            .map(|a| vecs.iter().map(|b| index.get(&(a + b)).copied()).collect())
            .collect();
        let positive = vecs.iter().map(|v| v.lex_sign() > 0).collect();
        Ok(LocalRoots {
            gram,
            sum,
            neg,
            positive,
        })
    }

    fn len(&self) -> usize {
        self.neg.len()
    }

    fn cartan(&self, i: usize, j: usize) -> Result<i64, RootError> {
        let q = &self.gram[i][j] * Rational::from_integer(2.into()) / &self.gram[j][j];
        if !q.is_integer() {
            return Err(RootError::NotRootSystem(format!(
                "non-integral Cartan number {q}"
            )));
        }
        q.to_integer()
            .to_i64()
            .ok_or_else(|| RootError::NotRootSystem("Cartan number overflow".into()))
    }

    /// Check the root-system axioms and return the simple roots of the
    /// lexicographic positive system.
    pub fn simple_roots(&self) -> Result<Vec<usize>, RootError> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let a = self.cartan(j, i)?;
                let b = self.cartan(i, j)?;
                let p = a * b;
                let ok = match p {
                    0..=3 => true,
                    4 => i == j || self.neg[i] == j,
                    _ => false,
                };
                if !ok {
                    return Err(RootError::NotRootSystem(format!(
                        "pair with Cartan numbers ({a}, {b})"
                    )));
                }
                if i == j || self.neg[i] == j {
                    continue;
                }
                // s_i(α_j) = α_j − a α_i by walking the root string inside the set
                let step = if a > 0 { self.neg[i] } else { i };
                let mut k = j;
                for _ in 0..a.abs() {
                    k = self.sum[k][step].ok_or_else(|| {
                        RootError::NotRootSystem("not closed under its reflections".into())
                    })?;
                }
            }
        }
        let simple = (0..n)
            .filter(|&i| self.positive[i])
            .filter(|&i| {
                !(0..n).any(|j| {
                    self.positive[j]
                        && j != i
                        && self.sum[i][self.neg[j]].is_some_and(|k| self.positive[k])
                })
            })
            .collect();
        Ok(simple)
    }

    pub fn decompose(&self, ambient_rank: usize) -> Result<Decomposition, RootError> {
        let simple = self.simple_roots()?;
        let a: Vec<Vec<i64>> = simple
            .iter()
            .map(|&i| simple.iter().map(|&j| self.cartan(i, j)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let lens: Vec<Rational> = simple.iter().map(|&i| self.gram[i][i].clone()).collect();
        let comps = classify_cartan(&a, &lens)?;
        let ss: usize = comps.iter().map(|t| t.rank).sum();
        Ok(Decomposition::new(comps, ambient_rank.saturating_sub(ss)))
    }
}

/// Cartan matrix `A_ij = 2(α_i, α_j)/(α_j, α_j)` of a list of roots of `rs`.
pub fn cartan_matrix(rs: &RootSystem, simple: &[usize]) -> Vec<Vec<i64>> {
    simple
        .iter()
        .map(|&i| simple.iter().map(|&j| rs.cartan_int(i, j)).collect())
        .collect()
}

/// Classify a Cartan matrix into simple types. `lens` are the squared
/// lengths of the simple roots, used to tell `B_n` from `C_n`.
pub fn classify_cartan(a: &[Vec<i64>], lens: &[Rational]) -> Result<Vec<SimpleType>, RootError> {
    let n = a.len();
    let mut comp = vec![usize::MAX; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![s];
        let mut nodes = Vec::new();
        comp[s] = id;
        while let Some(u) = stack.pop() {
            nodes.push(u);
            for v in 0..n {
                if v != u && a[u][v] != 0 && comp[v] == usize::MAX {
                    comp[v] = id;
                    stack.push(v);
                }
            }
        }
        nodes.sort_unstable();
        comps.push(nodes);
    }
    let mut out = Vec::new();
    for nodes in comps {
        out.push(classify_connected(a, lens, &nodes)?);
    }
    sort_types(&mut out);
    Ok(out)
}

fn classify_connected(a: &[Vec<i64>], lens: &[Rational], nodes: &[usize]) -> Result<SimpleType, RootError> {
    use TypeLabel::*;
    let k = nodes.len();
    let bad = || RootError::NotRootSystem("Dynkin diagram not of finite type".into());
    let mut edges = Vec::new();
    let mut degree = vec![0usize; k];
    for (x, &u) in nodes.iter().enumerate() {
        for (y, &v) in nodes.iter().enumerate().skip(x + 1) {
            if a[u][v] != 0 {
                edges.push((x, y, a[u][v] * a[v][u]));
                degree[x] += 1;
                degree[y] += 1;
            }
        }
    }
    if edges.len() + 1 != k {
        return Err(bad());
    }
    if k == 1 {
        return Ok(SimpleType::new(A, 1));
    }
    let maxmult = edges.iter().map(|e| e.2).max().unwrap_or(1);
    match maxmult {
        3 => {
            if k == 2 {
                Ok(SimpleType::new(G2, 2))
            } else {
                Err(bad())
            }
        }
        2 => {
            if edges.iter().filter(|e| e.2 == 2).count() != 1 || degree.iter().any(|&d| d > 2) {
                return Err(bad());
            }
            if k == 2 {
                return Ok(SimpleType::new(B, 2));
            }
            let &(x, y, _) = edges.iter().find(|e| e.2 == 2).expect("double bond");
            let (leaf, other) = if degree[x] == 1 {
                (x, y)
            } else if degree[y] == 1 {
                (y, x)
            } else if k == 4 {
                return Ok(SimpleType::new(F4, 4));
            } else {
                return Err(bad());
            };
            if lens[nodes[leaf]] < lens[nodes[other]] {
                Ok(SimpleType::new(B, k))
            } else {
                Ok(SimpleType::new(C, k))
            }
        }
        1 => {
            let branch: Vec<usize> = (0..k).filter(|&x| degree[x] >= 3).collect();
            if branch.is_empty() {
                return Ok(SimpleType::new(A, k));
            }
            if branch.len() > 1 || degree[branch[0]] != 3 {
                return Err(bad());
            }
            let b = branch[0];
            let mut adj = vec![Vec::new(); k];
            for &(x, y, _) in &edges {
                adj[x].push(y);
                adj[y].push(x);
            }
            let mut arms: Vec<usize> = adj[b]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (b, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => Ok(SimpleType::new(D, k)),
                (1, 2, 2) => Ok(SimpleType::new(E6, 6)),
                (1, 2, 3) => Ok(SimpleType::new(E7, 7)),
                (1, 2, 4) => Ok(SimpleType::new(E8, 8)),
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

impl RootSystem {
    /// Cartan type of the root subsystem spanned by `subset`; the torus corank
    /// is measured against the rank of `self`.
    pub fn identify_type(&self, subset: &RootSet) -> Result<Decomposition, RootError> {
        LocalRoots::from_subset(self, subset)?.decompose(self.rank())
    }

    /// Simple roots of `subset` with respect to the lexicographic order.
    pub fn simple_roots(&self, subset: &RootSet) -> Result<Vec<usize>, RootError> {
        let members = subset.to_vec();
        let local = LocalRoots::from_subset(self, subset)?;
        Ok(local.simple_roots()?.into_iter().map(|a| members[a]).collect())
    }
}

/// Cartan type of an arbitrary symmetric set of vectors (for example the
/// projected roots of a subalgebra), with corank measured against `ambient_rank`.
pub fn identify_vectors(vecs: &[ExactVector], ambient_rank: usize) -> Result<Decomposition, RootError> {
    if vecs.is_empty() {
        return Ok(Decomposition::new(Vec::new(), ambient_rank));
    }
    if vecs.iter().any(|v| v.norm_sq().is_zero()) {
        return Err(RootError::ZeroVector);
    }
    LocalRoots::from_vectors(vecs)?.decompose(ambient_rank)
}
