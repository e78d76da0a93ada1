use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nhf::corank_engine::{run_corank_one, seed_key_for, CaseStatus};
use nhf::equal_rank::{classify_equal_rank_with, lemma1_part2, EqualRankCandidate, DEFAULT_CAP};
use nhf::exact_arith::ExactVector;
use nhf::explicit_models::{
    build_model, condition_r_report, default_t_samples, flat_splitting_test, lemma_pair_su3, ModelName,
};
use nhf::finsler_lab::curvature::flag_curvature_batch;
use nhf::finsler_lab::metrics::catalog_metric;
use nhf::finsler_lab::{flag_curvature, hessian_g, s_curvature, subduced_norm, FdConfig, Quadratic, Randers};
use nhf::par::Exec;
use nhf::root_systems::{brute_force_closed, RootSet, RootSystem, SimpleType, TypeLabel};
use nhf::verify::{corank_section, RunOptions};
use TypeLabel::*;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn equal_rank() -> Check {
    let mut cases: Vec<(TypeLabel, usize, Vec<&str>)> = (1..=4)
        .map(|n| (A, n, vec![if n == 1 { "ℝ" } else { ["", "", "A1⊕ℝ", "A2⊕ℝ", "A3⊕ℝ"][n] }]))
        .collect();
    // D_n survivors of B_n, written in the identified type: D2 = A1⊕A1, D3 = A3
    cases.push((B, 2, vec!["A1⊕A1", "A1⊕ℝ"]));
    cases.push((B, 3, vec!["A3"]));
    cases.push((B, 4, vec!["D4"]));
    cases.push((C, 3, vec!["B2⊕ℝ", "B2⊕A1"]));
    cases.push((C, 4, vec!["C3⊕ℝ", "C3⊕A1"]));
    cases.push((D, 4, vec![]));
    cases.push((G2, 2, vec!["A2"]));
    cases.push((F4, 4, vec!["B4"]));
    for (l, n, want) in cases {
        let rep = classify_equal_rank_with(l, n, DEFAULT_CAP, Exec::default()).map_err(|e| e.to_string())?;
        let got: BTreeSet<String> = rep
            .candidates
            .iter()
            .filter(|c| c.failing_rule.is_none())
            .map(|c| c.h_type.to_string())
            .collect();
        let want: BTreeSet<String> = want.into_iter().map(String::from).collect();
        ensure(got == want, format!("{l}{n}: got {got:?}, want {want:?}"))?;
    }
    Ok("12 types, survivor sets exact".into())
}

fn saturated_h(l: TypeLabel, n: usize, a: &[i64], b: &[i64]) -> Result<String, String> {
    let rs = RootSystem::build(l, n).map_err(|e| e.to_string())?;
    let key = seed_key_for(&rs, &ExactVector::from_ints(a), &ExactVector::from_ints(b)).map_err(|e| e.to_string())?;
    let rep = run_corank_one(&rs, Exec::default()).map_err(|e| e.to_string())?;
    let s = rep.seeds.iter().find(|s| s.key == key).ok_or("seed class missing")?;
    ensure(s.verdict.status == CaseStatus::Saturated, format!("{l}{n} {a:?} {b:?} not saturated"))?;
    Ok(s.verdict.h_label.clone().unwrap_or_default())
}

fn corank_one() -> Check {
    let opts = RunOptions::default();
    let types = [(A, 4), (B, 2), (B, 3), (B, 4), (C, 3), (C, 4), (D, 4), (G2, 2), (F4, 4), (E6, 6), (E7, 7), (E8, 8)];
    let mut rows_total = 0;
    for (l, n) in types {
        let (rows, diffs) = corank_section(&[SimpleType::new(l, n)], opts).map_err(|e| e.to_string())?;
        ensure(diffs.is_empty(), format!("{l}{n}: {diffs:?}"))?;
        rows_total += rows.len();
        let open: Vec<_> = rows.iter().filter(|r| r.status == CaseStatus::Saturated).collect();
        match l {
            F4 => ensure(open.is_empty(), "F4 has a saturated seed")?,
            E6 | E7 | E8 => {
                let want = match l {
                    E6 => "D5⊕ℝ",
                    E7 => "D6⊕A1",
                    _ => "D8",
                };
                let half_pi: Vec<_> = rows.iter().filter(|r| r.seed.contains("angle π/2")).collect();
                ensure(!half_pi.is_empty(), format!("{l}: no π/2 seed"))?;
                for r in half_pi {
                    ensure(r.status == CaseStatus::Contradiction, format!("{l}: {} open", r.seed))?;
                    ensure(r.k_bound.as_deref() == Some(want), format!("{l}: k ⊂ {:?}", r.k_bound))?;
                }
            }
            C => {
                for r in &open {
                    let closed = r.seed.contains("3π/4")
                        && n == 3
                        && r.oracle.as_ref().is_some_and(|o| format!("{:?}", o.outcome) == "Refuted");
                    let survivor = r.case.to_string() == "I";
                    ensure(closed || survivor, format!("C{n}: {} left open", r.seed))?;
                }
            }
            B if n == 2 => {
                let berger = open
                    .iter()
                    .find(|r| r.seed.contains("3π/4"))
                    .ok_or("B2 3π/4 seed missing")?;
                let confirmed = berger
                    .oracle
                    .as_ref()
                    .is_some_and(|o| format!("{:?}", o.outcome) == "Confirmed");
                ensure(confirmed, "B2 3π/4 seed not confirmed by the matrix model")?;
            }
            _ => {}
        }
    }
    for (l, n, a, b, want) in [
        (D, 4, vec![1, 1, 0, 0], vec![-1, 1, 0, 0], "B3"),
        (B, 4, vec![1, 1, 0, 0], vec![0, 0, -1, -1], "B3"),
        (B, 3, vec![1, 1, 0], vec![0, 0, -1], "G2"),
        (B, 2, vec![1, 1], vec![0, -1], "A1"),
    ] {
        let h = saturated_h(l, n, &a, &b)?;
        ensure(h == want, format!("{l}{n}: h = {h}, want {want}"))?;
    }
    let (rows, _) = corank_section(&[SimpleType::new(A, 4)], opts).map_err(|e| e.to_string())?;
    let a4: BTreeSet<_> = rows
        .iter()
        .filter(|r| r.status == CaseStatus::Saturated && r.case.to_string() == "III")
        .filter_map(|r| r.h.clone())
        .collect();
    ensure(a4 == BTreeSet::from(["B2⊕ℝ".to_string()]), format!("A4 case III: {a4:?}"))?;
    Ok(format!("{rows_total} seed classes match the expected table"))
}

fn condition_r() -> Check {
    let t = default_t_samples();
    let fails = [
        ModelName::SuSu(3),
        ModelName::SuSu(4),
        ModelName::SpSp(2),
        ModelName::SpSp(3),
        ModelName::Berger,
        ModelName::Su5Sp2,
        ModelName::Spin9Family,
    ];
    for name in fails {
        let r = condition_r_report(name, &t, 20, 0x5eed).map_err(|e| e.to_string())?;
        ensure(r.fails_condition_r, format!("{} should fail", r.space))?;
    }
    for n in [4, 5] {
        let r = condition_r_report(ModelName::SoSo(n), &t, 100, 0x5eed).map_err(|e| e.to_string())?;
        ensure(
            !r.fails_condition_r && r.pairs.len() >= 100 && r.dependent_pairs == r.pairs.len(),
            format!("{}: {}/{}", r.space, r.dependent_pairs, r.pairs.len()),
        )?;
    }
    Ok("7 failures, so(4) and so(5) all dependent".into())
}

fn closed_subsystems() -> Check {
    let mut total = 0;
    for (l, n) in [(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (C, 3), (G2, 2), (D, 3)] {
        let rs = RootSystem::build(l, n).map_err(|e| e.to_string())?;
        let fast: Vec<_> = rs
            .closed_subsystems()
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| c.signature)
            .collect();
        let brute: Vec<_> = brute_force_closed(&rs)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| c.signature)
            .collect();
        ensure(fast == brute, format!("{l}{n}"))?;
        total += fast.len();
    }
    Ok(format!("{total} classes across 8 systems"))
}

fn flat_splitting() -> Check {
    let model = build_model(ModelName::Su3Torus).map_err(|e| e.to_string())?;
    let (u, v) = lemma_pair_su3();
    let w = flat_splitting_test(&model, &u, &v)
        .map_err(|e| e.to_string())?
        .ok_or("no witness")?;
    ensure(w.split_ok && w.dim_m_part >= 2 && w.check(&model), "witness does not verify")?;
    let rs = RootSystem::build(A, 2).map_err(|e| e.to_string())?;
    let torus = EqualRankCandidate::new(&rs, RootSet::empty(rs.len())).map_err(|e| e.to_string())?;
    ensure(!lemma1_part2(&torus).passed(), "hexagon filter passes the torus")?;
    Ok(format!("witness with dim(s ∩ m) = {}, torus rejected", w.dim_m_part))
}

/// `g = (F/α)(I − ŷŷᵀ) + (b + ŷ)(b + ŷ)ᵀ` with `α = |y|`, `ŷ = y/α`.
fn randers_hessian(b: &[f64; 2], y: &[f64; 2]) -> DMatrix<f64> {
    let al = y[0].hypot(y[1]);
    let yh = [y[0] / al, y[1] / al];
    let f = al + b[0] * y[0] + b[1] * y[1];
    DMatrix::from_fn(2, 2, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        f / al * (id - yh[i] * yh[j]) + (b[i] + yh[i]) * (b[j] + yh[j])
    })
}

fn finsler() -> Check {
    let tol = 1e-6;
    let mut worst_diag = 0.0f64;
    for name in ["euclidean2", "minkowski-randers", "minkowski-quartic"] {
        let m = catalog_metric(name).map_err(|e| e.to_string())?;
        let s = flag_curvature(m.as_ref(), &[0.2, -0.4], &[0.9, 0.35], &[-0.2, 1.0]).map_err(|e| e.to_string())?;
        let k = s.k.unwrap_or(f64::NAN);
        let sc = s_curvature(m.as_ref(), &[0.2, -0.4], &[0.9, 0.35]).map_err(|e| e.to_string())?.s;
        ensure(k.abs() < tol && sc.abs() < tol, format!("{name}: K = {k:e}, S = {sc:e}"))?;
        worst_diag = worst_diag.max(s.diagnostics.pole_residual).max(s.diagnostics.self_adjoint_residual);
    }
    let sphere = catalog_metric("round-sphere").map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let flags: Vec<_> = (0..20)
        .map(|_| {
            let th: f64 = rng.gen_range(0.25..2.9);
            let x = vec![th, rng.gen_range(-3.0..3.0)];
            let y = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let v = vec![-y[1], y[0] + 0.3];
            (x, y, v)
        })
        .collect();
    let mut worst_k = 0.0f64;
    for s in flag_curvature_batch(sphere.as_ref(), &flags, FdConfig::default(), Exec::default()) {
        let s = s.map_err(|e| e.to_string())?;
        worst_k = worst_k.max((s.k.unwrap_or(f64::NAN) - 1.0).abs());
        worst_diag = worst_diag.max(s.diagnostics.pole_residual).max(s.diagnostics.self_adjoint_residual);
    }
    ensure(worst_k < 1e-3, format!("sphere |K − 1| = {worst_k:e}"))?;
    ensure(worst_diag < tol, format!("diagnostics {worst_diag:e}"))?;
    let mut worst_h = 0.0f64;
    for _ in 0..20 {
        let r: f64 = rng.gen_range(0.0..0.9);
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let b = [r * a.cos(), r * a.sin()];
        let y = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let g = hessian_g(&Randers::euclidean(&b), &y).map_err(|e| e.to_string())?;
        let want = randers_hessian(&b, &y);
        worst_h = worst_h.max((&g - &want).amax() / want.amax());
    }
    ensure(worst_h < tol, format!("Randers Hessian relative error {worst_h:e}"))?;
    let ellipse = Quadratic::diagonal(&[1.0, 4.0]);
    let p = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
    let sub = subduced_norm(&ellipse, &p, &[5f64.sqrt() / 2.0]).map_err(|e| e.to_string())?;
    ensure((sub - 1.0).abs() < 1e-8, format!("ellipse subduced norm {sub}"))?;
    Ok(format!(
        "sphere |K−1| ≤ {worst_k:.1e}, Randers g ≤ {worst_h:.1e}, ellipse {:.1e}, diagnostics ≤ {worst_diag:.1e}",
        (sub - 1.0).abs()
    ))
}

fn end_to_end() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_nhf"))
        .args(["--json", "verify", "theorem1"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), format!("exit status {:?}", out.status.code()))?;
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let got: BTreeSet<String> = rep["survivors"]
        .as_array()
        .ok_or("no survivor list")?
        .iter()
        .filter_map(|s| s.as_str().map(String::from))
        .collect();
    let want: BTreeSet<String> = [
        "CP^1 = SU(2)/S(U(1)×U(1))",
        "CP^2 = SU(3)/S(U(2)×U(1))",
        "CP^3 = SU(4)/S(U(3)×U(1))",
        "CP^3 = Sp(2)/Sp(1)S^1",
        "CP^4 = SU(5)/S(U(4)×U(1))",
        "CP^5 = Sp(3)/Sp(2)S^1",
        "CP^7 = Sp(4)/Sp(3)S^1",
        "HP^2 = Sp(3)/Sp(2)Sp(1)",
        "HP^3 = Sp(4)/Sp(3)Sp(1)",
        "OP^2 = F4/Spin(9)",
        "SU(3)×SO(3)/U*(2)",
        "SU(5)/Sp(2)S^1",
        "S^11 = Sp(3)/Sp(2)",
        "S^11 = Sp(3)Sp(1)/Sp(2)Sp(1)",
        "S^15 = Sp(4)/Sp(3)",
        "S^15 = Sp(4)Sp(1)/Sp(3)Sp(1)",
        "S^15 = Spin(9)/Spin(7)",
        "S^3 = SU(2)",
        "S^3 = SU(2)×SU(2)/ΔSU(2)",
        "S^4 = SO(5)/SO(4)",
        "S^5 = SU(3)/SU(2)",
        "S^5 = SU(4)/Sp(2)",
        "S^6 = G2/SU(3)",
        "S^6 = SO(7)/SO(6)",
        "S^7 = SO(8)/SO(7)",
        "S^7 = SU(4)/SU(3)",
        "S^7 = Sp(2)/Sp(1)",
        "S^7 = Sp(2)Sp(1)/Sp(1)Sp(1)",
        "S^7 = Spin(7)/G2",
        "S^8 = SO(9)/SO(8)",
        "S^9 = SU(5)/SU(4)",
        "Sp(2)/SU(2)",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    let missing: Vec<_> = want.difference(&got).collect();
    let extra: Vec<_> = got.difference(&want).collect();
    ensure(missing.is_empty() && extra.is_empty(), format!("missing {missing:?}, extra {extra:?}"))?;
    Ok(format!("exit 0, {} survivor names", got.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("equal-rank survivor sets", equal_rank),
        ("corank-one verdicts", corank_one),
        ("condition (R)", condition_r),
        ("closed subsystems vs brute force", closed_subsystems),
        ("flat splitting vs hexagon filter", flat_splitting),
        ("Finsler numerics", finsler),
        ("verify theorem1 end to end", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let dt = start.elapsed();
        match r {
            Ok(msg) => println!("PASS {} {name}: {msg} ({dt:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} ({dt:.2?})", i + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
