use crate::exact_arith::{rat, ExactVector, QExt};

use super::{RootError, TypeLabel};

fn e(dim: usize, i: usize) -> ExactVector {
    ExactVector::unit(dim, i)
}

fn pm_pairs(dim: usize, upto: usize, out: &mut Vec<ExactVector>) {
    for i in 0..upto {
        for j in (i + 1)..upto {
            for si in [1, -1] {
                for sj in [1, -1] {
                    let mut v = ExactVector::zero(dim);
                    v.coords[i] = QExt::from_int(si);
                    v.coords[j] = QExt::from_int(sj);
                    out.push(v);
                }
            }
        }
    }
}

fn pm_units(dim: usize, upto: usize, scale: i64, out: &mut Vec<ExactVector>) {
    for i in 0..upto {
        for s in [scale, -scale] {
            let mut v = ExactVector::zero(dim);
            v.coords[i] = QExt::from_int(s);
            out.push(v);
        }
    }
}

/// Half-integer vectors `½(±e_1 ± … ± e_k)` in the first `k` coordinates,
/// yielded together with their count of plus signs.
fn half_signs(dim: usize, k: usize) -> impl Iterator<Item = (ExactVector, u32)> {
    (0u32..(1 << k)).map(move |mask| {
        let mut v = ExactVector::zero(dim);
        for i in 0..k {
            let s = if mask >> i & 1 == 1 { 1 } else { -1 };
            v.coords[i] = QExt::from_ratio(s, 2);
        }
        (v, mask.count_ones())
    })
}

/// Ambient dimension and root list for an irreducible type.
pub(super) fn roots_of(label: TypeLabel, rank: usize) -> Result<(usize, Vec<ExactVector>), RootError> {
    let n = rank;
    let mut out = Vec::new();
    let dim = match label {
        TypeLabel::A => {
            if n < 1 {
                return Err(RootError::Unsupported(label, rank));
            }
            let d = n + 1;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        out.push(&e(d, i) - &e(d, j));
                    }
                }
            }
            d
        }
        TypeLabel::B => {
            if n < 1 {
                return Err(RootError::Unsupported(label, rank));
            }
            pm_units(n, n, 1, &mut out);
            pm_pairs(n, n, &mut out);
            n
        }
        TypeLabel::C => {
            if n < 1 {
                return Err(RootError::Unsupported(label, rank));
            }
            pm_units(n, n, 2, &mut out);
            pm_pairs(n, n, &mut out);
            n
        }
        TypeLabel::D => {
            if n < 2 {
                return Err(RootError::Unsupported(label, rank));
            }
            pm_pairs(n, n, &mut out);
            n
        }
        TypeLabel::F4 => {
            pm_units(4, 4, 1, &mut out);
            pm_pairs(4, 4, &mut out);
            out.extend(half_signs(4, 4).map(|(v, _)| v));
            4
        }
        TypeLabel::G2 => {
            let r3 = |q| QExt::sqrt3_times(q);
            let q = |a, b| QExt::from_rational(rat(a, b));
            for s in [1, -1] {
                out.push(ExactVector::new(vec![r3(rat(s, 1)), QExt::zero()]));
                out.push(ExactVector::new(vec![QExt::zero(), q(s, 1)]));
                for t in [1, -1] {
                    out.push(ExactVector::new(vec![r3(rat(s, 2)), q(3 * t, 2)]));
                    out.push(ExactVector::new(vec![r3(rat(s, 2)), q(t, 2)]));
                }
            }
            2
        }
        TypeLabel::E6 => {
            pm_pairs(6, 5, &mut out);
            for (v, plus) in half_signs(6, 5) {
                for s in [1i64, -1] {
                    let total = plus + u32::from(s > 0);
                    if total % 2 == 1 {
                        let mut w = v.clone();
                        w.coords[5] = QExt::sqrt3_times(rat(s, 2));
                        out.push(w);
                    }
                }
            }
            6
        }
        TypeLabel::E7 => {
            pm_pairs(7, 6, &mut out);
            for s in [1i64, -1] {
                let mut v = ExactVector::zero(7);
                v.coords[6] = QExt::sqrt2_times(rat(s, 1));
                out.push(v);
            }
            for (v, plus) in half_signs(7, 6) {
                if plus % 2 == 0 {
                    for s in [1i64, -1] {
                        let mut w = v.clone();
                        w.coords[6] = QExt::sqrt2_times(rat(s, 2));
                        out.push(w);
                    }
                }
            }
            7
        }
        TypeLabel::E8 => {
            pm_pairs(8, 8, &mut out);
            out.extend(half_signs(8, 8).filter(|(_, p)| p % 2 == 0).map(|(v, _)| v));
            8
        }
    };
    Ok((dim, out))
}
