//! Root systems of the compact simple Lie algebras in explicit coordinates,
//! with membership, sum/difference, angle, reflection and subsystem queries.

mod build;
mod classify;
mod rootset;
mod subsystems;

use std::collections::HashMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::{ExactVector, QExt, Rational};

pub use classify::{cartan_matrix, classify_cartan, identify_vectors, Decomposition};
pub use rootset::RootSet;
pub use subsystems::{brute_force_closed, BRUTE_FORCE_MAX_PAIRS, ClosedSubsystem, SubsetSignature, DEFAULT_RANK_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl TypeLabel {
    pub fn parse(s: &str) -> Option<TypeLabel> {
        Some(match s.trim().to_ascii_uppercase().as_str() {
            "A" => TypeLabel::A,
            "B" => TypeLabel::B,
            "C" => TypeLabel::C,
            "D" => TypeLabel::D,
            "E6" => TypeLabel::E6,
            "E7" => TypeLabel::E7,
            "E8" => TypeLabel::E8,
            "F4" => TypeLabel::F4,
            "G2" => TypeLabel::G2,
            _ => return None,
        })
    }

    /// Rank for the exceptional labels, `None` for the classical series.
    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            TypeLabel::E6 => Some(6),
            TypeLabel::E7 => Some(7),
            TypeLabel::E8 => Some(8),
            TypeLabel::F4 => Some(4),
            TypeLabel::G2 => Some(2),
            _ => None,
        }
    }

    pub fn is_classical(self) -> bool {
        self.fixed_rank().is_none()
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E6 => "E6",
            TypeLabel::E7 => "E7",
            TypeLabel::E8 => "E8",
            TypeLabel::F4 => "F4",
            TypeLabel::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// A simple type together with its rank, printed as `B3`, `E6`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    pub label: TypeLabel,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(label: TypeLabel, rank: usize) -> Self {
        SimpleType { label, rank }
    }

    /// Identify the low-rank coincidences `B1 = C1 = A1`, `C2 = B2`,
    /// `D3 = A3`. `D2` is not simple and is split by [`Decomposition`].
    pub fn normalized(self) -> SimpleType {
        use TypeLabel::*;
        match (self.label, self.rank) {
            (B, 1) | (C, 1) => SimpleType::new(A, 1),
            (C, 2) => SimpleType::new(B, 2),
            (D, 3) => SimpleType::new(A, 3),
            _ => self,
        }
    }

    pub fn root_count(self) -> usize {
        let n = self.rank;
        match self.label {
            TypeLabel::A => n * (n + 1),
            TypeLabel::B | TypeLabel::C => 2 * n * n,
            TypeLabel::D => 2 * n * (n - 1),
            TypeLabel::E6 => 72,
            TypeLabel::E7 => 126,
            TypeLabel::E8 => 240,
            TypeLabel::F4 => 48,
            TypeLabel::G2 => 12,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_classical() {
            write!(f, "{}{}", self.label, self.rank)
        } else {
            write!(f, "{}", self.label)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unsupported root system {0}{1}")]
    Unsupported(TypeLabel, usize),
    #[error("vector {0} is not a root")]
    NotARoot(String),
    #[error("subset is not closed under negation")]
    NotSymmetric,
    #[error("subset is not a crystallographic root system: {0}")]
    NotRootSystem(String),
    #[error("rank {0} exceeds the configured cap {1}")]
    CapExceeded(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("inner product is not rational")]
    Irrational,
}

/// One simple factor of a (possibly reducible) root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub ty: SimpleType,
    /// First ambient coordinate used by this factor.
    pub offset: usize,
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumDiff {
    Both,
    SumOnly,
    DiffOnly,
    Neither,
}

/// `(4cos²θ, |α|²/|β|²)` for a pair of vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AngleClass {
    pub four_cos_sq: Rational,
    pub len_ratio_sq: Rational,
}

const NONE: u32 = u32::MAX;

/// A finite reduced root system in explicit coordinates. Roots are indexed
/// `0..len()` and all pairwise tables are precomputed.
#[derive(Clone)]
pub struct RootSystem {
    pub factors: Vec<Factor>,
    pub ambient_dim: usize,
    pub roots: Vec<ExactVector>,
    pub factor_of_root: Vec<usize>,
    index: HashMap<ExactVector, usize>,
    neg: Vec<usize>,
    gram: Vec<Rational>,
    sum: Vec<u32>,
    positive: Vec<bool>,
    pair_class: std::sync::OnceLock<subsystems::PairClasses>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, {} roots)", self.name(), self.len())
    }
}

impl RootSystem {
    /// Build an irreducible system.
    pub fn build(label: TypeLabel, rank: usize) -> Result<RootSystem, RootError> {
        RootSystem::direct_sum(&[SimpleType::new(label, rank)])
    }

    /// Build a direct sum by concatenating coordinates of the summands.
    pub fn direct_sum(types: &[SimpleType]) -> Result<RootSystem, RootError> {
        let mut pieces = Vec::new();
        for t in types {
            let rank = t.label.fixed_rank().unwrap_or(t.rank);
            let (dim, roots) = build::roots_of(t.label, rank)?;
            pieces.push((SimpleType::new(t.label, rank), dim, roots));
        }
        let ambient_dim: usize = pieces.iter().map(|p| p.1).sum();
        let mut factors = Vec::new();
        let mut roots = Vec::new();
        let mut factor_of_root = Vec::new();
        let mut offset = 0;
        for (fi, (ty, dim, rs)) in pieces.into_iter().enumerate() {
            for r in rs {
                let mut coords = vec![QExt::zero(); ambient_dim];
                for (k, c) in r.coords.into_iter().enumerate() {
                    coords[offset + k] = c;
                }
                roots.push(ExactVector::new(coords));
                factor_of_root.push(fi);
            }
            factors.push(Factor { ty, offset, dim });
            offset += dim;
        }
        Ok(RootSystem::from_parts(factors, ambient_dim, roots, factor_of_root))
    }

    fn from_parts(
        factors: Vec<Factor>,
        ambient_dim: usize,
        roots: Vec<ExactVector>,
        factor_of_root: Vec<usize>,
    ) -> RootSystem {
        let n = roots.len();
        let index: HashMap<ExactVector, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let neg: Vec<usize> = roots.iter().map(|r| index[&(-r)]).collect();
        let mut gram = vec![Rational::zero(); n * n];
        let mut sum = vec![NONE; n * n];
        for i in 0..n {
            for j in i..n {
                let ip = roots[i].dot(&roots[j]);
                let q = ip
                    .as_rational()
                    .cloned()
                    .expect("root inner products must be rational");
                gram[i * n + j] = q.clone();
                gram[j * n + i] = q;
                if factor_of_root[i] != factor_of_root[j] || j == neg[i] {
                    continue;
                }
                if let Some(&k) = index.get(&(&roots[i] + &roots[j])) {
                    sum[i * n + j] = k as u32;
                    sum[j * n + i] = k as u32;
                }
            }
        }
        let positive = roots.iter().map(|r| r.lex_sign() > 0).collect();
        RootSystem {
            factors,
            ambient_dim,
            roots,
            factor_of_root,
            index,
            neg,
            gram,
            sum,
            positive,
            pair_class: std::sync::OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.ty.rank).sum()
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.ty.to_string())
            .collect::<Vec<_>>()
            .join("⊕")
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn root(&self, i: usize) -> &ExactVector {
        &self.roots[i]
    }

    pub fn index_of(&self, v: &ExactVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &ExactVector) -> bool {
        self.index.contains_key(v)
    }

    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.positive[i]
    }

    /// Exact inner product of two roots.
    pub fn gram(&self, i: usize, j: usize) -> &Rational {
        &self.gram[i * self.len() + j]
    }

    pub fn norm_sq(&self, i: usize) -> &Rational {
        self.gram(i, i)
    }

    /// Index of `α_i + α_j` when it is a root.
    pub fn sum(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.sum[i * self.len() + j];
        (k != NONE).then_some(k as usize)
    }

    /// Index of `α_i − α_j` when it is a root.
    pub fn diff(&self, i: usize, j: usize) -> Option<usize> {
        self.sum(i, self.neg[j])
    }

    /// Cartan integer `2(α_i, α_j)/(α_j, α_j)`.
    pub fn cartan_int(&self, i: usize, j: usize) -> i64 {
        let q = self.gram(i, j) * Rational::from_integer(2.into()) / self.norm_sq(j);
        debug_assert!(q.is_integer());
        q.to_integer().to_i64().expect("small Cartan integer")
    }

    /// Whether `α_i` and `α_j` are equal or opposite.
    pub fn is_pm(&self, i: usize, j: usize) -> bool {
        i == j || self.neg[i] == j
    }

    pub fn sum_diff_status_idx(&self, i: usize, j: usize) -> SumDiff {
        match (self.sum(i, j).is_some(), self.diff(i, j).is_some()) {
            (true, true) => SumDiff::Both,
            (true, false) => SumDiff::SumOnly,
            (false, true) => SumDiff::DiffOnly,
            (false, false) => SumDiff::Neither,
        }
    }

    pub fn sum_diff_status(
        &self,
        a: &ExactVector,
        b: &ExactVector,
    ) -> Result<SumDiff, RootError> {
        let i = self.require_root(a)?;
        let j = self.require_root(b)?;
        Ok(self.sum_diff_status_idx(i, j))
    }

    pub fn require_root(&self, v: &ExactVector) -> Result<usize, RootError> {
        if v.dim() != self.ambient_dim {
            return Err(RootError::DimensionMismatch(v.dim(), self.ambient_dim));
        }
        self.index_of(v).ok_or_else(|| RootError::NotARoot(v.to_string()))
    }

    pub fn angle_class_idx(&self, i: usize, j: usize) -> AngleClass {
        let ij = self.gram(i, j);
        let ii = self.norm_sq(i);
        let jj = self.norm_sq(j);
        AngleClass {
            four_cos_sq: Rational::from_integer(4.into()) * ij * ij / (ii * jj),
            len_ratio_sq: ii / jj,
        }
    }

    /// Reflection of `v` in the hyperplane orthogonal to the root `alpha`.
    pub fn reflect(&self, alpha: &ExactVector, v: &ExactVector) -> Result<ExactVector, RootError> {
        self.require_root(alpha)?;
        Ok(reflect_vec(alpha, v))
    }

    /// Index of `s_{α_i}(α_j)`.
    pub fn reflect_idx(&self, i: usize, j: usize) -> usize {
        if self.is_pm(i, j) {
            return self.neg[j];
        }
        let n = self.cartan_int(j, i);
        let mut k = j;
        if n > 0 {
            for _ in 0..n {
                k = self.diff(k, i).expect("root string");
            }
        } else {
            for _ in 0..(-n) {
                k = self.sum(k, i).expect("root string");
            }
        }
        k
    }

    /// All roots as a [`RootSet`].
    pub fn all(&self) -> RootSet {
        RootSet::full(self.len())
    }

    /// Roots lying in simple factor `f`.
    pub fn factor_roots(&self, f: usize) -> RootSet {
        RootSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| self.factor_of_root[i] == f),
        )
    }

    pub fn to_document(&self) -> RootSystemDoc {
        RootSystemDoc {
            factors: self.factors.iter().map(|f| f.ty).collect(),
            ambient_dim: self.ambient_dim,
            roots: self.roots.clone(),
        }
    }
}

/// `v − 2(v,α)/(α,α)·α`.
pub fn reflect_vec(alpha: &ExactVector, v: &ExactVector) -> ExactVector {
    let c = &(&v.dot(alpha) * &QExt::from_int(2)) / &alpha.norm_sq();
    v - &alpha.scale_q(&c)
}

/// Angle class of two arbitrary nonzero vectors with rational inner products.
pub fn angle_class(a: &ExactVector, b: &ExactVector) -> Result<AngleClass, RootError> {
    if a.dim() != b.dim() {
        return Err(RootError::DimensionMismatch(a.dim(), b.dim()));
    }
    let aa = a.norm_sq();
    let bb = b.norm_sq();
    if aa.is_zero() || bb.is_zero() {
        return Err(RootError::ZeroVector);
    }
    let ab = a.dot(b);
    let four_cos_sq = &(&(&ab * &ab) * &QExt::from_int(4)) / &(&aa * &bb);
    let len_ratio_sq = &aa / &bb;
    match (four_cos_sq.as_rational(), len_ratio_sq.as_rational()) {
        (Some(c), Some(r)) => Ok(AngleClass {
            four_cos_sq: c.clone(),
            len_ratio_sq: r.clone(),
        }),
        _ => Err(RootError::Irrational),
    }
}

/// Serializable form of a root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemDoc {
    pub factors: Vec<SimpleType>,
    pub ambient_dim: usize,
    pub roots: Vec<ExactVector>,
}
