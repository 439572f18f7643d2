use h90::mackey::{fixed_point_functor, orbit_functor, random_module, CMFPresentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instances(seed: u64, count: usize) -> Vec<CMFPresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let d = rng.gen_range(1..=6);
            let (x1, sigma) = random_module(&mut rng, d, 1 << 10);
            if i % 2 == 0 {
                fixed_point_functor(d, x1, sigma).unwrap()
            } else {
                orbit_functor(d, x1, sigma).unwrap()
            }
        })
        .collect()
}

#[test]
fn six_term_sequence_is_exact() {
    for (i, c) in instances(11, 200).iter().enumerate() {
        let r = c.six_term_check();
        assert!(r.ok(), "instance {i}: {:?}", r.failures());
    }
}

#[test]
fn orders_divide_along_the_sequence() {
    for c in instances(12, 60) {
        let h = c.section_cohomology();
        assert!((h.h_minus1.order() % h.c1.order()) == 0.into());
        assert!((h.h_0.order() % h.k1.order()) == 0.into());
    }
}

#[test]
fn p_parts_match() {
    for c in instances(13, 50) {
        let h = c.section_cohomology();
        for p in [2u64, 3, 5, 7, 11] {
            let hp = c.p_part(p).section_cohomology();
            assert_eq!(hp, h.p_part(p));
            if c.d % p != 0 {
                assert!(hp.c0.is_trivial() && hp.k1.is_trivial());
            }
        }
    }
}

#[test]
fn cohomology_commutes_with_direct_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let d = rng.gen_range(1..=4);
        let (a, sa) = random_module(&mut rng, d, 64);
        let (b, sb) = random_module(&mut rng, d, 64);
        let fa = fixed_point_functor(d, a, sa).unwrap();
        let fb = orbit_functor(d, b, sb).unwrap();
        let sum = fa.direct_sum(&fb).unwrap();
        let (ha, hb, hs) = (
            fa.section_cohomology(),
            fb.section_cohomology(),
            sum.section_cohomology(),
        );
        let join = |x: &h90::abgroup::FinAbGroup, y: &h90::abgroup::FinAbGroup| {
            let mut d = x.invariants.clone();
            d.extend(y.invariants.iter().cloned());
            h90::abgroup::FinAbGroup::from_diagonal(&d)
        };
        assert_eq!(hs.c0, join(&ha.c0, &hb.c0));
        assert_eq!(hs.c1, join(&ha.c1, &hb.c1));
        assert_eq!(hs.k0, join(&ha.k0, &hb.k0));
        assert_eq!(hs.k1, join(&ha.k1, &hb.k1));
        assert_eq!(hs.h_minus1, join(&ha.h_minus1, &hb.h_minus1));
        assert_eq!(hs.h_0, join(&ha.h_0, &hb.h_0));
    }
}
