use h90::config::Config;
use h90::lattice::NfContext;
use h90::scan::{scan_primes, ScanUnits};
use h90::sunits::load_fixture;
use std::path::Path;

#[test]
fn qrt11_bad_primes_to_1e4() {
    let fx =
        load_fixture(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/qrt11.json")).unwrap();
    let k = fx.field().unwrap();
    let o = fx.order(&k).unwrap();
    let ctx = NfContext::new(k.clone(), o);
    let rep = scan_primes(
        &k,
        10_000,
        &ScanUnits::Fixture(ctx, fx.units.clone()),
        &Config::default(),
    );
    assert!(rep.agg.identity_holds());
    assert_eq!(rep.bad_primes(), vec![19, 7603]);
}
