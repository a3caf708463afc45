//! Odd-prime fingerprint moduli, the collision count `N0`, and the
//! reversible division maps every automaton is generated from.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest bit length accepted by [`max_common_primes`].
pub const MAX_COLLISION_BITS: u32 = 24;

/// The first `N` odd primes, `p_1 = 3 < p_2 = 5 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    /// Validates an explicit list; it must be the first `len` odd primes.
    pub fn from_primes(primes: Vec<u64>) -> Result<Self> {
        let expected = odd_primes(primes.len());
        if primes != expected.primes {
            return Err(Error::InvalidParameter(format!(
                "{primes:?} is not the list of the first {} odd primes",
                primes.len()
            )));
        }
        Ok(expected)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `p_k` with 1-based `k`.
    pub fn get(&self, k: usize) -> u64 {
        self.primes[k - 1]
    }

    pub fn sum(&self) -> u64 {
        self.primes.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }
}

/// Returns the first `count` odd primes in increasing order.
pub fn odd_primes(count: usize) -> PrimeSet {
    if count == 0 {
        return PrimeSet { primes: Vec::new() };
    }
    // p_(count+1) < (count+1)(ln(count+1) + ln ln(count+1)) for count+1 >= 6
    let m = (count + 1) as f64;
    let mut limit = if count < 6 {
        32
    } else {
        (m * (m.ln() + m.ln().ln())).ceil() as usize + 1
    };
    loop {
        let primes: Vec<u64> = sieve(limit)
            .into_iter()
            .filter(|&p| p != 2)
            .take(count)
            .collect();
        if primes.len() == count {
            return PrimeSet { primes };
        }
        limit *= 2;
    }
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Maximum number of odd prime moduli on which two distinct `n`-bit
/// integers can agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionStats {
    pub n: u32,
    pub n0: usize,
    /// Smallest difference `d` in `[1, 2^n)` achieving `n0`.
    pub witness: u64,
}

/// Number of distinct odd prime divisors of every `d < 2^n`.
pub(crate) fn odd_divisor_counts(n: u32) -> Vec<u8> {
    let bound = 1usize << n;
    let mut omega = vec![0u8; bound];
    for p in sieve(bound - 1).into_iter().filter(|&p| p != 2) {
        let p = p as usize;
        let mut m = p;
        while m < bound {
            omega[m] += 1;
            m += p;
        }
    }
    omega
}

/// Brute-force `N0(n)`.
///
/// `x = y mod p` iff `p | |x - y|`, so the count of shared odd moduli for a
/// pair is the number of distinct odd prime divisors of its difference.
pub fn max_common_primes(n: u32) -> Result<CollisionStats> {
    if !(1..=MAX_COLLISION_BITS).contains(&n) {
        return Err(Error::BitLengthOutOfRange {
            n,
            min: 1,
            max: MAX_COLLISION_BITS,
        });
    }
    let omega = odd_divisor_counts(n);
    let mut best = CollisionStats {
        n,
        n0: 0,
        witness: 1,
    };
    for (d, &w) in omega.iter().enumerate().skip(1) {
        if w as usize > best.n0 {
            best.n0 = w as usize;
            best.witness = d as u64;
        }
    }
    Ok(best)
}

/// Fingerprint error rate `N0 / N` as an exact rational.
pub fn error_bound(n0: usize, n_primes: usize) -> Result<Rational64> {
    if n_primes == 0 {
        return Err(Error::DivisionByZero("error bound with zero primes"));
    }
    if n0 > n_primes {
        return Err(Error::InvalidParameter(format!(
            "collision count {n0} exceeds prime count {n_primes}"
        )));
    }
    Ok(Rational64::new(n0 as i64, n_primes as i64))
}

fn check_residue(p: u64, j: u64, bit: u8) {
    assert!(p % 2 == 1 && p >= 3, "modulus {p} must be an odd prime");
    assert!(j < p, "residue {j} out of range for modulus {p}");
    assert!(bit <= 1, "bit must be 0 or 1, got {bit}");
}

/// One long-division step: `(2j + bit) mod p`.
pub fn forward_div_step(p: u64, j: u64, bit: u8) -> u64 {
    check_residue(p, j, bit);
    (2 * j + bit as u64) % p
}

/// The unique `j'` with `forward_div_step(p, j', bit) == j`.
pub fn reverse_div_step(p: u64, j: u64, bit: u8) -> u64 {
    check_residue(p, j, bit);
    match (bit, j % 2) {
        (0, 0) => j / 2,
        (0, _) => (j + p) / 2,
        (_, 0) => (j + p - 1) / 2,
        _ => (j - 1) / 2,
    }
}

/// Residue of a most-significant-bit-first binary string modulo `p`.
pub fn residue_of_word(p: u64, bits: &str) -> Result<u64> {
    let mut j = 0;
    for (position, ch) in bits.chars().enumerate() {
        let bit = match ch {
            '0' => 0,
            '1' => 1,
            _ => {
                return Err(Error::Format {
                    ch,
                    position,
                    context: "binary string",
                })
            }
        };
        j = forward_div_step(p, j, bit);
    }
    Ok(j)
}

/// Number of moduli in `primes` on which the two binary strings agree.
pub fn common_residue_count(primes: &PrimeSet, x: &str, y: &str) -> Result<usize> {
    let mut t = 0;
    for p in primes.iter() {
        if residue_of_word(p, x)? == residue_of_word(p, y)? {
            t += 1;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    fn distinct_odd_prime_divisors(mut d: u64) -> usize {
        let mut count = 0;
        while d % 2 == 0 {
            d /= 2;
        }
        let mut f = 3;
        while f * f <= d {
            if d % f == 0 {
                count += 1;
                while d % f == 0 {
                    d /= f;
                }
            }
            f += 2;
        }
        if d > 1 {
            count += 1;
        }
        count
    }

    #[test]
    fn odd_primes_examples() {
        assert!(odd_primes(0).is_empty());
        assert_eq!(odd_primes(2).primes(), &[3, 5]);
        let oracle: Vec<u64> = (3..).filter(|&n| is_prime_trial(n)).take(5).collect();
        assert_eq!(oracle, vec![3, 5, 7, 11, 13]);
        assert_eq!(odd_primes(5).primes(), oracle.as_slice());
    }

    #[test]
    fn odd_primes_match_trial_division_for_long_prefixes() {
        let oracle: Vec<u64> = (3..).filter(|&n| is_prime_trial(n)).take(300).collect();
        for count in [1, 6, 7, 50, 300] {
            assert_eq!(odd_primes(count).primes(), &oracle[..count]);
        }
    }

    #[test]
    fn max_common_primes_examples() {
        let s1 = max_common_primes(1).unwrap();
        assert_eq!((s1.n0, s1.witness), (0, 1));
        let s4 = max_common_primes(4).unwrap();
        assert_eq!((s4.n0, s4.witness), (2, 15));
        let s8 = max_common_primes(8).unwrap();
        assert_eq!((s8.n0, s8.witness), (3, 105));
    }

    #[test]
    fn max_common_primes_matches_factorisation_oracle() {
        for n in 1..=14u32 {
            let stats = max_common_primes(n).unwrap();
            let (best_d, best) = (1..(1u64 << n))
                .map(|d| (d, distinct_odd_prime_divisors(d)))
                .fold((1, 0), |acc, (d, c)| if c > acc.1 { (d, c) } else { acc });
            assert_eq!((stats.witness, stats.n0), (best_d, best), "n = {n}");
            assert_eq!(distinct_odd_prime_divisors(stats.witness), stats.n0);
        }
    }

    #[test]
    fn max_common_primes_range() {
        assert!(matches!(
            max_common_primes(0),
            Err(Error::BitLengthOutOfRange { .. })
        ));
        assert!(max_common_primes(MAX_COLLISION_BITS + 1).is_err());
    }

    #[test]
    fn max_common_primes_monotone() {
        let mut prev = 0;
        for n in 1..=20 {
            let s = max_common_primes(n).unwrap();
            assert!(s.n0 >= prev);
            assert!(s.witness >= 1 && s.witness < (1 << n));
            prev = s.n0;
        }
    }

    #[test]
    fn error_bound_examples() {
        assert_eq!(error_bound(0, 8).unwrap(), Rational64::new(0, 1));
        assert_eq!(error_bound(2, 8).unwrap(), Rational64::new(1, 4));
        assert_eq!(error_bound(2, 2).unwrap(), Rational64::new(1, 1));
        assert!(matches!(error_bound(0, 0), Err(Error::DivisionByZero(_))));
        assert!(error_bound(3, 2).is_err());
    }

    #[test]
    fn division_step_examples() {
        assert_eq!(forward_div_step(5, 0, 1), 1);
        assert_eq!(forward_div_step(5, 1, 1), 3);
        assert_eq!(forward_div_step(5, 3, 0), 1);
        for p in [3, 5, 7, 101] {
            assert_eq!(forward_div_step(p, 0, 0), 0);
            assert_eq!(reverse_div_step(p, 0, 0), 0);
        }
        assert_eq!(reverse_div_step(5, 1, 1), 0);
        assert_eq!(reverse_div_step(5, 4, 1), 4);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn forward_step_rejects_large_residue() {
        forward_div_step(5, 5, 0);
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_of_word(5, "110001").unwrap(), 4);
        assert_eq!(residue_of_word(13, "").unwrap(), 0);
        assert_eq!(residue_of_word(7, "101").unwrap(), 5);
        assert!(matches!(
            residue_of_word(7, "10x"),
            Err(Error::Format { ch: 'x', position: 2, .. })
        ));
    }

    #[test]
    fn division_maps_are_inverse_bijections() {
        let primes: Vec<u64> = (3..=101).filter(|&n| is_prime_trial(n)).collect();
        for p in primes {
            for bit in 0..=1u8 {
                let mut seen = vec![false; p as usize];
                for j in 0..p {
                    let f = forward_div_step(p, j, bit);
                    assert_eq!(reverse_div_step(p, f, bit), j);
                    assert_eq!(forward_div_step(p, reverse_div_step(p, j, bit), bit), j);
                    assert!(!seen[f as usize], "p={p} bit={bit} collides at {f}");
                    seen[f as usize] = true;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn residue_matches_integer_arithmetic(bits in proptest::collection::vec(any::<bool>(), 0..=64),
                                              idx in 0usize..40) {
            let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let value = bits.iter().fold(0u128, |acc, &b| acc * 2 + b as u128);
            let p = odd_primes(40).get(idx + 1);
            prop_assert_eq!(residue_of_word(p, &s).unwrap() as u128, value % p as u128);
        }
    }
}
