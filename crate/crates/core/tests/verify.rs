use nhf::verify::{explain, verify_theorem1, RankCaps, RunOptions, Theorem1Report};

fn default_report() -> Theorem1Report {
    verify_theorem1(RankCaps::default(), RunOptions::default()).unwrap()
}

#[test]
fn default_caps_have_no_diffs() {
    let rep = default_report();
    assert!(rep.diffs.is_empty(), "{:#?}", rep.diffs);
    assert_eq!(rep.exit_code(), 0);
    for name in [
        "CP^2 = SU(3)/S(U(2)×U(1))",
        "OP^2 = F4/Spin(9)",
        "S^6 = G2/SU(3)",
        "S^7 = Spin(7)/G2",
        "S^15 = Spin(9)/Spin(7)",
        "SU(5)/Sp(2)S^1",
        "S^3 = SU(2)×SU(2)/ΔSU(2)",
        "CP^3 = Sp(2)/Sp(1)S^1",
        "Sp(2)/SU(2)",
        "SU(3)×SO(3)/U*(2)",
    ] {
        assert!(rep.survivors.iter().any(|s| s == name), "{name} in {:#?}", rep.survivors);
    }
}

#[test]
fn d_row_is_empty_and_c3_has_two_rows() {
    let rep = default_report();
    let d4 = rep.equal_rank.iter().find(|s| s.g == "D4").unwrap();
    assert!(d4.survivors.is_empty());
    let c3 = rep.equal_rank.iter().find(|s| s.g == "C3").unwrap();
    assert_eq!(c3.survivors.len(), 2);
    let md = rep.to_markdown();
    assert_eq!(md.lines().filter(|l| l.starts_with("| C3 |")).count(), 2);
}

#[test]
fn json_is_reproducible() {
    let a = serde_json::to_string_pretty(&default_report()).unwrap();
    let b = serde_json::to_string_pretty(&default_report()).unwrap();
    assert_eq!(a, b);
    let back: Theorem1Report = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), a);
}

#[test]
fn caps_are_validated() {
    let caps = RankCaps { e: 5, ..RankCaps::default() };
    assert!(verify_theorem1(caps, RunOptions::default()).is_err());
}

#[test]
fn explain_traces() {
    let f4 = explain("F4#1").unwrap();
    assert!(f4.lines().last().unwrap().starts_with("contradiction by rule"), "{f4}");
    let b2 = explain("B2#3").unwrap();
    assert!(b2.contains("saturated: h = A1"));
    assert!(b2.contains("Confirmed"));
    assert!(explain("B2#99").is_err());
    assert!(explain("nonsense").is_err());
}
