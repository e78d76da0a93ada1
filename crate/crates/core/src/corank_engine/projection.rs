//! Orthogonal projection of roots onto the hyperplane `t ∩ h = z^⊥`, with all
//! inner products computed from the rational Gram table.

use num_traits::Zero;

use crate::exact_arith::{ExactVector, QExt, Rational};
use crate::root_systems::RootSystem;

use super::CorankError;

/// Integer combination of roots, `Σ c_i α_i`.
pub type Combo = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct Projection {
    /// Spanning vector of `t ∩ m`.
    pub z: ExactVector,
    pub zz: Rational,
    zdot: Vec<Rational>,
    p: Vec<Rational>,
    n: usize,
}

impl Projection {
    /// Axis `z = Σ c_k α_k` for a rational combination of roots.
    pub fn new(rs: &RootSystem, axis: &[(usize, Rational)]) -> Result<Projection, CorankError> {
        let n = rs.len();
        let mut z = ExactVector::zero(rs.ambient_dim);
        for (k, c) in axis {
            z = &z + &rs.root(*k).scale(c);
        }
        let zdot: Vec<Rational> = (0..n)
            .map(|i| {
                axis.iter()
                    .fold(Rational::zero(), |acc, (k, c)| acc + c * rs.gram(*k, i))
            })
            .collect();
        let zz = axis
            .iter()
            .fold(Rational::zero(), |acc, (k, c)| acc + c * &zdot[*k]);
        if zz.is_zero() {
            return Err(CorankError::ZeroAxis);
        }
        let mut p = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                p.push(rs.gram(i, j) - &zdot[i] * &zdot[j] / &zz);
            }
        }
        Ok(Projection { z, zz, zdot, p, n })
    }

    /// `(α_i, z)`.
    pub fn zdot(&self, i: usize) -> &Rational {
        &self.zdot[i]
    }

    /// `(pr α_i, pr α_j)`.
    pub fn p(&self, i: usize, j: usize) -> &Rational {
        &self.p[i * self.n + j]
    }

    pub fn ip(&self, a: &Combo, b: &Combo) -> Rational {
        let mut s = Rational::zero();
        for &(i, x) in a {
            for &(j, y) in b {
                s += self.p(i, j) * Rational::from_integer((x * y).into());
            }
        }
        s
    }

    /// `pr(Σ c_i α_i)` as a coordinate vector.
    pub fn vector(&self, rs: &RootSystem, c: &Combo) -> ExactVector {
        let mut v = ExactVector::zero(rs.ambient_dim);
        let mut t = Rational::zero();
        for &(i, x) in c {
            let q = Rational::from_integer(x.into());
            v = &v + &rs.root(i).scale(&q);
            t += &self.zdot[i] * q;
        }
        let coef = -(t / &self.zz);
        &v + &self.z.scale_q(&QExt::from_rational(coef))
    }
}

/// Root planes `g_{±γ}` indexed by positive roots.
#[derive(Clone, Debug)]
pub struct Planes {
    pub root: Vec<usize>,
    pub of_root: Vec<usize>,
}

impl Planes {
    pub fn new(rs: &RootSystem) -> Planes {
        let root: Vec<usize> = (0..rs.len()).filter(|&i| rs.is_positive(i)).collect();
        let mut of_root = vec![0; rs.len()];
        for (p, &i) in root.iter().enumerate() {
            of_root[i] = p;
            of_root[rs.neg(i)] = p;
        }
        Planes { root, of_root }
    }

    pub fn len(&self) -> usize {
        self.root.len()
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_empty()
    }
}

/// Result of matching a vector against the nonzero projected roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Zero,
    Missing,
    /// Projected root class and the sign relating the vector to its representative.
    Lam(usize, i8),
}

/// Nonzero projected roots up to sign, each with the planes it carries.
#[derive(Clone, Debug)]
pub struct Lams {
    pub reps: Vec<usize>,
    pub norms: Vec<Rational>,
    pub carriers: Vec<Vec<usize>>,
    pub of_plane: Vec<Option<(usize, i8)>>,
}

impl Lams {
    pub fn new(proj: &Projection, planes: &Planes) -> Lams {
        let mut out = Lams {
            reps: Vec::new(),
            norms: Vec::new(),
            carriers: Vec::new(),
            of_plane: Vec::with_capacity(planes.len()),
        };
        for (p, &i) in planes.root.iter().enumerate() {
            let nn = proj.p(i, i).clone();
            if nn.is_zero() {
                out.of_plane.push(None);
                continue;
            }
            let hit = out.reps.iter().enumerate().find_map(|(l, &r)| {
                if out.norms[l] != nn {
                    return None;
                }
                let x = proj.p(i, r);
                if *x == nn {
                    Some((l, 1))
                } else if *x == -nn.clone() {
                    Some((l, -1))
                } else {
                    None
                }
            });
            match hit {
                Some((l, s)) => {
                    out.carriers[l].push(p);
                    out.of_plane.push(Some((l, s)));
                }
                None => {
                    out.reps.push(i);
                    out.norms.push(nn);
                    out.carriers.push(vec![p]);
                    out.of_plane.push(Some((out.reps.len() - 1, 1)));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, l: usize) -> Combo {
        vec![(self.reps[l], 1)]
    }

    pub fn find(&self, proj: &Projection, c: &Combo) -> Lookup {
        let nn = proj.ip(c, c);
        if nn.is_zero() {
            return Lookup::Zero;
        }
        for (l, &r) in self.reps.iter().enumerate() {
            if self.norms[l] != nn {
                continue;
            }
            let x = proj.ip(c, &vec![(r, 1)]);
            if x == nn {
                return Lookup::Lam(l, 1);
            }
            if x == -nn.clone() {
                return Lookup::Lam(l, -1);
            }
        }
        Lookup::Missing
    }

    /// `(⟨λ,μ⟩, ⟨μ,λ⟩)` Cartan numbers of two classes.
    pub fn cartan(&self, proj: &Projection, a: usize, b: usize) -> (Rational, Rational) {
        let ip = proj.p(self.reps[a], self.reps[b]);
        let two = Rational::from_integer(2.into());
        (&two * ip / &self.norms[b], &two * ip / &self.norms[a])
    }

    /// Whether the two projected roots could lie in one reduced
    /// crystallographic system.
    pub fn compatible(&self, proj: &Projection, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let (n1, n2) = self.cartan(proj, a, b);
        if !n1.is_integer() || !n2.is_integer() {
            return false;
        }
        let p = &n1 * &n2;
        p >= Rational::zero() && p <= Rational::from_integer(3.into())
    }

    /// `λ = ±2μ` or `μ = ±2λ`.
    pub fn ratio_two(&self, proj: &Projection, a: usize, b: usize) -> bool {
        let (n1, n2) = self.cartan(proj, a, b);
        let p = &n1 * &n2;
        p == Rational::from_integer(4.into()) && n1 != n2
    }
}
