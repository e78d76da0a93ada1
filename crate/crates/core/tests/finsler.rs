use nalgebra::DMatrix;
use nhf::finsler_lab::curvature::{flag_curvature_batch, hessian_g_with};
use nhf::finsler_lab::metrics::{catalog_metric, parse_metric_json, Constant, RandersField};
use nhf::finsler_lab::scurv::{busemann_hausdorff_volume, gauss_legendre, s_curvature, unit_ball_volume};
use nhf::finsler_lab::submersion::{horizontal_lift, orthogonality_residual, predicted_quotient_g, subduced_norm, Subduced};
use nhf::finsler_lab::*;
use nhf::par::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sphere_flags(n: usize) -> Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    (0..n)
        .map(|_| {
            let th: f64 = rng.gen_range(0.3..2.8);
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let y = vec![a.cos(), a.sin() / th.sin()];
            let v = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            (vec![th, rng.gen_range(-3.0..3.0)], y, v)
        })
        .collect()
}

#[test]
fn round_sphere_has_unit_flag_curvature() {
    let m = catalog_metric("round-sphere").unwrap();
    let flags = sphere_flags(20);
    for s in flag_curvature_batch(m.as_ref(), &flags, FdConfig::default(), Exec::default()) {
        let s = s.unwrap();
        assert!((s.k.unwrap() - 1.0).abs() < 1e-3, "{:?}", s.k);
        assert!(s.diagnostics.pole_residual < 1e-6, "{:?} {:?}", s.x, s.diagnostics);
        assert!(s.diagnostics.self_adjoint_residual < 1e-6);
    }
}

#[test]
fn scaled_sphere_and_hyperbolic_plane() {
    let q = catalog_metric("quarter-sphere").unwrap();
    let k = flag_curvature(q.as_ref(), &[1.1, 0.4], &[0.3, 1.0], &[1.0, 0.0]).unwrap().k.unwrap();
    assert!((k - 4.0).abs() < 1e-4);
    let p = catalog_metric("poincare").unwrap();
    let k = flag_curvature(p.as_ref(), &[0.5, 0.7], &[1.0, -0.2], &[0.1, 1.0]).unwrap().k.unwrap();
    assert!((k + 1.0).abs() < 1e-4);
}

#[test]
fn product_with_line_is_flat_in_mixed_flags() {
    let m = catalog_metric("s2xr").unwrap();
    let x = [1.0, 0.5, 0.0];
    let mixed = flag_curvature(m.as_ref(), &x, &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).unwrap().k.unwrap();
    let tangent = flag_curvature(m.as_ref(), &x, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap().k.unwrap();
    assert!(mixed.abs() < 1e-5);
    assert!((tangent - 1.0).abs() < 1e-4);
}

#[test]
fn locally_minkowski_metrics_are_flat_with_zero_s_curvature() {
    for name in ["euclidean2", "minkowski-randers", "minkowski-quartic"] {
        let m = catalog_metric(name).unwrap();
        let s = flag_curvature(m.as_ref(), &[0.2, -0.4], &[0.9, 0.35], &[-0.2, 1.0]).unwrap();
        assert!(s.k.unwrap().abs() < 1e-6, "{name}");
        let sc = s_curvature(m.as_ref(), &[0.2, -0.4], &[0.9, 0.35]).unwrap();
        assert!(sc.s.abs() < 1e-6, "{name}");
    }
    let m = catalog_metric("euclidean3").unwrap();
    let sc = s_curvature(m.as_ref(), &[0.0, 1.0, 2.0], &[1.0, 0.5, -0.5]).unwrap();
    assert!(sc.s.abs() < 1e-6);
}

#[test]
fn randers_hessian_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let r: f64 = rng.gen_range(0.0..0.8);
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let b = Randers::euclidean(&[r * a.cos(), r * a.sin()]);
        let y = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let g = hessian_g(&b, &y).unwrap();
        let want = b.analytic_hessian(&y);
        assert!((&g - &want).amax() / want.amax() < 1e-6);
    }
}

#[test]
fn quartic_norm_degenerates_on_axes() {
    let n = Lp { p: 4.0, n: 2 };
    assert!(matches!(hessian_g(&n, &[1.0, 0.0]), Err(FinslerError::NotPositiveDefinite)));
    assert!(hessian_g(&n, &[1.0, 0.3]).is_ok());
    assert!(matches!(hessian_g(&n, &[0.0, 0.0]), Err(FinslerError::ZeroVector)));
}

#[test]
fn degenerate_flag_is_an_error() {
    let m = catalog_metric("round-sphere").unwrap();
    let r = flag_curvature(m.as_ref(), &[1.0, 0.0], &[1.0, 0.5], &[2.0, 1.0]);
    assert!(matches!(r, Err(FinslerError::DegenerateFlag)));
    assert!(matches!(
        flag_curvature(m.as_ref(), &[-1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]),
        Err(FinslerError::OutsideChart)
    ));
}

#[test]
fn ellipse_subduced_norm() {
    // x² + 4y² projected along (1, 1): min over x + y = w is 2w/√5
    let f = Quadratic::diagonal(&[1.0, 4.0]);
    let p = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
    let w = 5f64.sqrt() / 2.0;
    assert!((subduced_norm(&f, &p, &[w]).unwrap() - 1.0).abs() < 1e-8);
    let v = horizontal_lift(&f, &p, &[w]).unwrap();
    assert!(orthogonality_residual(&f, &p, &v).unwrap() < 1e-8);
    assert_eq!(horizontal_lift(&f, &p, &[0.0]).unwrap(), vec![0.0, 0.0]);
}

#[test]
fn subduced_randers_hessian_matches_lift_prediction() {
    let f = Randers::euclidean(&[0.3, -0.1, 0.2]);
    let p = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, -1.0]);
    let w = [0.7, 0.4];
    let sub = Subduced { f: &f, p: p.clone() };
    let fd = hessian_g_with(&sub, &w, 2e-2).unwrap();
    let pred = predicted_quotient_g(&f, &p, &w).unwrap();
    assert!((&fd - &pred).amax() / pred.amax() < 1e-5);
}

#[test]
fn hopf_fibration_satisfies_submersion_inequality() {
    let total = catalog_metric("hopf-s3").unwrap();
    let base = catalog_metric("quarter-sphere").unwrap();
    let p = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    let samples = vec![
        (vec![1.0, 0.2, 0.3], vec![1.0, 0.5], vec![-0.5, 1.0]),
        (vec![0.7, -0.4, 1.3], vec![0.3, 0.5], vec![1.0, 0.0]),
        (vec![2.0, 1.0, -0.6], vec![0.0, 1.0], vec![1.0, 0.2]),
    ];
    let rep = submersion_inequality_check(total.as_ref(), base.as_ref(), &p, &samples, FdConfig::default()).unwrap();
    assert!(rep.holds());
    assert!(rep.max_norm_mismatch < 1e-8);
    for s in &rep.samples {
        assert!((s.k_total - 1.0).abs() < 1e-4);
        assert!((s.k_base - 4.0).abs() < 1e-4);
    }
}

#[test]
fn randers_s_curvature_matches_closed_form() {
    // α Euclidean, b(x) closed: S = 3 (e00/(2F) − ρ0), ρ = ln √(1 − |b|²)
    let m = catalog_metric("randers-drift").unwrap();
    for (x, y) in [([0.3, -0.5], [0.8, 0.6]), ([-0.6, 0.9], [0.2, -1.0]), ([1.0, 0.4], [-0.7, 0.3])] {
        let b = [0.25 * x[0], 0.15 * x[1] * x[1]];
        let db = [0.25, 0.3 * x[1]];
        let e00 = db[0] * y[0] * y[0] + db[1] * y[1] * y[1];
        let rho0 = -(b[0] * db[0] * y[0] + b[1] * db[1] * y[1]) / (1.0 - b[0] * b[0] - b[1] * b[1]);
        let f = m.eval(&x, &y);
        let want = 3.0 * (e00 / (2.0 * f) - rho0);
        let got = s_curvature(m.as_ref(), &x, &y).unwrap();
        assert!((got.s - want).abs() < 1e-6, "{} vs {want}", got.s);
        assert!((got.s - got.s_half_step).abs() < 1e-6);
        assert!(got.f_drift < 1e-9);
    }
}

#[test]
fn riemannian_s_curvature_vanishes() {
    let m = catalog_metric("round-sphere").unwrap();
    assert!(s_curvature(m.as_ref(), &[1.0, 0.2], &[0.4, 1.1]).unwrap().s.abs() < 1e-6);
    let h = catalog_metric("hopf-s3").unwrap();
    assert!(s_curvature(h.as_ref(), &[1.0, 0.2, 0.1], &[0.4, 1.1, -0.3]).unwrap().s.abs() < 1e-6);
}

#[test]
fn unit_ball_volumes() {
    let v = unit_ball_volume(&Euclidean(3)).unwrap();
    assert!((v - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    let e = Quadratic::diagonal(&[1.0, 4.0]);
    assert!((unit_ball_volume(&e).unwrap() - std::f64::consts::PI / 2.0).abs() < 1e-12);
    // Randers unit ball is an ellipse of area π/(1 − |b|²)^{3/2}
    let r = Randers::euclidean(&[0.5, 0.0]);
    let want = std::f64::consts::PI / 0.75f64.powf(1.5);
    assert!((unit_ball_volume(&r).unwrap() - want).abs() < 1e-10);
    let sum: f64 = gauss_legendre(7).iter().map(|(x, w)| w * x.powi(6)).sum();
    assert!((sum - 2.0 / 7.0).abs() < 1e-14);
    assert!(matches!(
        unit_ball_volume(&Euclidean(4)),
        Err(FinslerError::DimensionTooHigh(4))
    ));
    let c = Constant(Box::new(Euclidean(2)));
    assert!((busemann_hausdorff_volume(&c, &[0.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn json_metrics_agree_with_catalog() {
    let json = r#"{"dimension": 2, "kind": "riemannian_matrix_field",
        "parameters": {"g": [[1, 0], [0, "sin(x1)^2"]]}}"#;
    let m = parse_metric_json(json).unwrap();
    let k = flag_curvature(m.as_ref(), &[1.2, 0.0], &[1.0, 0.3], &[0.0, 1.0]).unwrap().k.unwrap();
    assert!((k - 1.0).abs() < 1e-4);
    let custom = r#"{"dimension": 2, "kind": "custom_expression",
        "parameters": {"F": "sqrt(y1^2 + y2^2) + 0.5*y1"}}"#;
    let m = parse_metric_json(custom).unwrap();
    assert!((m.eval(&[0.0, 0.0], &[3.0, 4.0]) - 6.5).abs() < 1e-12);
    let randers = r#"{"dimension": 2, "kind": "randers", "parameters": {"b": ["x1/4", "3*x2^2/20"]}}"#;
    let a = parse_metric_json(randers).unwrap();
    let b: RandersField = nhf::finsler_lab::metrics::randers_drift();
    let (x, y) = ([0.3, -0.5], [0.8, 0.6]);
    assert!((a.eval(&x, &y) - b.eval(&x, &y)).abs() < 1e-14);
    assert!(parse_metric_json(r#"{"dimension": 2, "kind": "randers", "parameters": {}}"#).is_err());
    assert!(load_metric("no-such-metric.json").is_err());
}
