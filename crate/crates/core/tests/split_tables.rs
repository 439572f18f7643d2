use h90::config::Config;
use h90::scan::{decimal, scan_primes, ScanUnits};
use h90::NumberField;

fn run(coeffs: &[i64]) -> (u64, u64, String) {
    let k = NumberField::from_i64(coeffs).unwrap();
    let rep = scan_primes(&k, 100_000, &ScanUnits::SplitOnly, &Config::default());
    (rep.agg.pi_nr, rep.agg.pi_nr_f, decimal(&rep.agg.e_table, 1))
}

#[test]
fn totally_real_sextic() {
    assert_eq!(run(&[-8, 0, 24, 0, -10, 0, 1]), (9590, 0, "9590.0".into()));
}

#[test]
fn totally_real_septic() {
    assert_eq!(
        run(&[-1, -5, 0, 13, 0, -7, 0, 1]),
        (9591, 0, "9591.0".into())
    );
}

#[test]
fn septic_with_three_complex_places() {
    assert_eq!(
        run(&[1, 0, 1, -1, -1, 0, 0, 1]),
        (9592, 430, "9161.7".into())
    );
}

#[test]
fn octic_with_four_complex_places() {
    assert_eq!(
        run(&[1, -1, 2, -1, 0, 0, 0, -1, 1]),
        (9589, 2897, "6691.4".into())
    );
}
