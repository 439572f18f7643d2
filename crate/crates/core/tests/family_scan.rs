use h90::config::Config;
use h90::scan::{decimal, scan_family, FamilySpec};
use h90::sunits::load_family_fixture;
use std::path::Path;

fn spec(a: i64, b: i64) -> FamilySpec {
    FamilySpec::new(FamilySpec::parse_g("-1;-3,1;0,1;1").unwrap(), a, b).unwrap()
}

#[test]
fn tau_counts_with_committed_units() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/cubic_family_m50_50.json");
    let fx = load_family_fixture(&path).unwrap();
    let rep = scan_family(&spec(-50, 50), 7, Some(&fx), &Config::default());
    assert_eq!(rep.n_irr, 72);
    assert_eq!(rep.n_inconclusive, 0);
    assert_eq!(rep.n_tau, 70);
}

#[test]
fn split_only_small_range() {
    let rep = scan_family(&spec(-50, 50), 11, None, &Config::default());
    assert!(rep.n_irr <= 101);
    assert!(rep.rows.iter().all(|r| r.verdict.is_none()));
    assert!(decimal(&rep.e, 1).parse::<f64>().unwrap() <= rep.n_irr as f64);
}

#[test]
fn split_only_full_range() {
    // oracle values from maximal orders computed independently
    for (p, n_irr, e) in [
        (3, 1408, "1404.5"),
        (5, 2001, "1981.9"),
        (7, 1439, "1432.3"),
        (11, 2001, "1996.1"),
    ] {
        let rep = scan_family(&spec(-1000, 1000), p, None, &Config::default());
        assert_eq!(
            (rep.n_irr, decimal(&rep.e, 1).as_str()),
            (n_irr, e),
            "p = {p}"
        );
    }
}
