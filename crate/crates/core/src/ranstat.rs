//! Rank statistics of uniform random matrices over F_p and the expected
//! number of primes where τ fails to be surjective.

use crate::arith::primes_up_to;
use crate::fp_linalg;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

fn p_pow(p: u64, e: i64) -> BigRational {
    let b = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

/// Pr(rank of a uniform n×k matrix over F_p equals n) = ∏_{i<n} (1 − p^{i−k}).
pub fn rank_full_probability(p: u64, n: u32, k: u32) -> BigRational {
    if k < n {
        return BigRational::zero();
    }
    (0..n as i64).fold(BigRational::one(), |acc, i| {
        acc * (BigRational::one() - p_pow(p, i - k as i64))
    })
}

/// (1 − p^{n−1−k})^n, a lower bound for the full-rank probability when k ≥ n.
pub fn rank_full_lower_bound(p: u64, n: u32, k: u32) -> Option<BigRational> {
    if k < n {
        return None;
    }
    let q = BigRational::one() - p_pow(p, n as i64 - 1 - k as i64);
    Some((0..n).fold(BigRational::one(), |acc, _| acc * &q))
}

/// R_p(k) = ∏_{i<k} (1 − p^{i−r}).
pub fn rp_term(p: u64, k_terms: u32, r: u32) -> BigRational {
    (0..k_terms as i64).fold(BigRational::one(), |acc, i| {
        acc * (BigRational::one() - p_pow(p, i - r as i64))
    })
}

fn tree_sum(terms: Vec<BigRational>) -> (BigInt, BigInt) {
    let mut level: Vec<(BigInt, BigInt)> = terms.into_iter().map(|q| q.into_raw()).collect();
    if level.is_empty() {
        return (BigInt::zero(), BigInt::one());
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some((a, b)) = it.next() {
            match it.next() {
                Some((c, d)) => next.push((&a * &d + &c * &b, b * d)),
                None => next.push((a, b)),
            }
        }
        level = next;
    }
    level.pop().expect("nonempty")
}

/// Exact sum of rationals, added pairwise in a balanced tree without
/// intermediate reduction.
pub fn sum_rationals(terms: Vec<BigRational>) -> BigRational {
    let (n, d) = tree_sum(terms);
    BigRational::new(n, d)
}

/// Exact sum of terms (p, q) where the denominator of q is a power of p.
/// Terms are first added per prime; the per-prime sums then have pairwise
/// coprime denominators, so their tree sum is already in lowest terms and
/// no gcd of long integers is needed.
pub fn sum_prime_power_terms(terms: impl IntoIterator<Item = (u64, BigRational)>) -> BigRational {
    let mut by_prime: BTreeMap<u64, BigRational> = BTreeMap::new();
    for (p, q) in terms {
        *by_prime.entry(p).or_insert_with(BigRational::zero) += q;
    }
    let (n, d) = tree_sum(by_prime.into_values().collect());
    BigRational::new_raw(n, d)
}

/// Σ_{p ≤ x} Pr(rank of an n×k matrix over F_p is below n).
pub fn expected_bad_primes(n: u32, k: u32, x: u64) -> BigRational {
    sum_prime_power_terms(
        primes_up_to(x)
            .into_iter()
            .map(|p| (p, BigRational::one() - rank_full_probability(p, n, k))),
    )
}

/// Exact frequency of full row rank over all p^{nk} matrices.
pub fn exhaustive_full_rank_frequency(p: u64, n: u32, k: u32) -> BigRational {
    let cells = (n * k) as usize;
    let total = p.pow(cells as u32);
    let mut full = 0u64;
    let mut m = vec![vec![0u64; k as usize]; n as usize];
    for code in 0..total {
        let mut c = code;
        for i in 0..cells {
            m[i / k as usize][i % k as usize] = c % p;
            c /= p;
        }
        if fp_linalg::rank(&m, p) == n as usize {
            full += 1;
        }
    }
    BigRational::new(BigInt::from(full), BigInt::from(total))
}

pub const MC_SHARDS: u64 = 16;

/// Number of full-rank samples among `trials` uniform n×k matrices.
/// Trials are split over a fixed number of shards, each with its own
/// ChaCha stream, so the result does not depend on the thread count.
pub fn monte_carlo_rank(p: u64, n: u32, k: u32, trials: u64, seed: u64) -> u64 {
    if k < n || trials == 0 {
        return 0;
    }
    (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let share = trials / MC_SHARDS + u64::from(shard < trials % MC_SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut m = vec![vec![0u64; k as usize]; n as usize];
            let mut full = 0;
            for _ in 0..share {
                for row in m.iter_mut() {
                    for x in row.iter_mut() {
                        *x = rng.gen_range(0..p);
                    }
                }
                if fp_linalg::rank(&m, p) == n as usize {
                    full += 1;
                }
            }
            full
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn full_rank_examples() {
        assert_eq!(rank_full_probability(5, 3, 2), q(0, 1));
        assert_eq!(rank_full_probability(3, 2, 2), q(16, 27));
        assert_eq!(rank_full_probability(2, 1, 1), q(1, 2));
    }

    #[test]
    fn enumeration_agrees() {
        assert_eq!(exhaustive_full_rank_frequency(3, 2, 2), q(48, 81));
        assert_eq!(exhaustive_full_rank_frequency(2, 2, 2), q(6, 16));
    }

    #[test]
    fn rp_examples() {
        assert_eq!(rp_term(7, 0, 2), q(1, 1));
        assert_eq!(rp_term(7, 1, 2), q(48, 49));
        assert_eq!(rp_term(3, 2, 3), q(208, 243));
    }

    #[test]
    fn expected_examples() {
        assert_eq!(expected_bad_primes(1, 1, 10), q(247, 210));
        assert_eq!(expected_bad_primes(2, 2, 2), q(5, 8));
    }

    #[test]
    fn tree_sum_matches_fold() {
        let terms: Vec<BigRational> = (1..40).map(|i| q(i % 7 - 3, i * i + 1)).collect();
        let folded = terms.iter().fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(sum_rationals(terms), folded);
        let terms: Vec<BigRational> = [2i64, 3, 5, 7, 2, 9, 25]
            .iter()
            .map(|&d| q(d - 1, d))
            .collect();
        let folded = terms.iter().fold(BigRational::zero(), |a, b| a + b);
        let tagged = [2u64, 3, 5, 7, 2, 3, 5].into_iter().zip(terms);
        assert_eq!(sum_prime_power_terms(tagged), folded);
        assert_eq!(sum_rationals(Vec::new()), q(0, 1));
    }

    #[test]
    fn lower_bound_holds() {
        for p in [2, 3, 5] {
            for n in 1..4 {
                for k in n..6 {
                    assert!(
                        rank_full_lower_bound(p, n, k).unwrap() <= rank_full_probability(p, n, k)
                    );
                }
            }
        }
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        assert_eq!(
            monte_carlo_rank(3, 2, 2, 1, 7),
            monte_carlo_rank(3, 2, 2, 1, 7)
        );
        assert_eq!(monte_carlo_rank(3, 3, 2, 1000, 7), 0);
    }
}
