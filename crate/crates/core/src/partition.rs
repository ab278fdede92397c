//! Partition-theoretic ground truth: the weighted count `A_1(m)` of
//! partitions by the length of their maximal leading subpartition with
//! distinct, non-consecutive parts, the plain partition numbers `p(m)`,
//! the generating-function routes to both, and a checker for the 5-adic
//! congruence family.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::qseries::{euler_product, theta_onesided, LaurentSeries, Precision};

/// Largest `m` the exhaustive enumeration accepts; p(60) is about a million
/// partitions, anything bigger goes through the series route.
pub const BRUTE_FORCE_BOUND: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("m = {m} exceeds the exhaustive enumeration bound {bound}")]
    BoundExceeded { m: u32, bound: u32 },
    #[error("series depth {have} cannot reach m = {need}")]
    InsufficientPrecision { need: u64, have: u64 },
}

/// A partition: positive parts in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be nonincreasing"
        );
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Length of the maximal leading subpartition whose parts are distinct
    /// with gaps of at least 2, and strictly larger than everything after it.
    pub fn rr_subpartition(&self) -> usize {
        rr_subpartition_len(&self.parts)
    }
}

/// Single left-to-right scan: extend the prefix while consecutive parts
/// differ by at least 2, then back off one step if the boundary part does
/// not strictly exceed the remainder (the part after the prefix counts as 0
/// when the prefix is the whole partition).
pub fn rr_subpartition_len(parts: &[u32]) -> usize {
    let k = parts.len();
    if k == 0 {
        return 0;
    }
    let mut l = 1;
    while l < k && parts[l - 1] >= parts[l] + 2 {
        l += 1;
    }
    let after = if l == k { 0 } else { parts[l] };
    if parts[l - 1] > after {
        l
    } else {
        l - 1
    }
}

/// Calls `f` once per partition of `m`, parts nonincreasing.
pub fn for_each_partition<F: FnMut(&[u32])>(m: u32, mut f: F) {
    let mut parts = Vec::new();
    fn recurse<F: FnMut(&[u32])>(remaining: u32, max_part: u32, parts: &mut Vec<u32>, f: &mut F) {
        if remaining == 0 {
            f(parts);
            return;
        }
        let top = remaining.min(max_part);
        for next in (1..=top).rev() {
            parts.push(next);
            recurse(remaining - next, next, parts, f);
            parts.pop();
        }
    }
    recurse(m, m, &mut parts, &mut f);
}

/// Exhaustive classification of the partitions of `m` by subpartition
/// length `l`: `counts[l]` partitions each, and the weighted total
/// `a1 = sum l * counts[l]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RRProfile {
    pub m: u32,
    pub counts: BTreeMap<usize, u64>,
    pub a1: u64,
}

impl RRProfile {
    /// Total partitions classified; must equal p(m).
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn a1_bruteforce(m: u32) -> Result<RRProfile, PartitionError> {
    if m == 0 || m > BRUTE_FORCE_BOUND {
        return Err(PartitionError::BoundExceeded {
            m,
            bound: BRUTE_FORCE_BOUND,
        });
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for_each_partition(m, |parts| {
        *counts.entry(rr_subpartition_len(parts)).or_default() += 1;
    });
    let a1 = counts.iter().map(|(&l, &c)| l as u64 * c).sum();
    Ok(RRProfile { m, counts, a1 })
}

/// `p(0..=max)` by the pentagonal-number recurrence.
pub fn p_table(max: usize) -> Vec<BigInt> {
    let mut table = Vec::with_capacity(max + 1);
    table.push(BigInt::one());
    for m in 1..=max {
        let mut acc = BigInt::zero();
        for k in 1i64.. {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 as usize > m {
                break;
            }
            let sign = if k % 2 == 0 { -1 } else { 1 };
            acc += sign * &table[m - g1 as usize];
            if g2 as usize <= m {
                acc += sign * &table[m - g2 as usize];
            }
        }
        table.push(acc);
    }
    table
}

pub fn p_of(m: usize) -> BigInt {
    p_table(m).pop().expect("table is nonempty")
}

/// Generating function of `A_1`: `theta_onesided / (q;q)_inf`. The
/// coefficient of `q^m` is `A_1(m)`.
pub fn a1_series(prec: Precision) -> LaurentSeries {
    let inv_eta = euler_product(-1, 1, prec);
    inv_eta.mul(&theta_onesided(prec))
}

/// The companion series `(q^2;q^2)^5 / ((q;q)^3 (q^4;q^4)^2)`; its
/// coefficients `a(m)` satisfy `a(m) = p(m) + 2 A_1(m)`.
pub fn a_series(prec: Precision) -> LaurentSeries {
    let num = euler_product(5, 2, prec);
    let den = euler_product(3, 1, prec).mul(&euler_product(2, 4, prec));
    num.mul(&den.invert().expect("leading coefficient is 1"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongruenceTarget {
    A1,
    P,
}

impl fmt::Display for CongruenceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceTarget::A1 => write!(f, "a1"),
            CongruenceTarget::P => write!(f, "p"),
        }
    }
}

impl FromStr for CongruenceTarget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Ok(CongruenceTarget::A1),
            "p" => Ok(CongruenceTarget::P),
            other => Err(format!("unknown congruence target {other:?}; use a1 or p")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CongruenceCase {
    pub m: u64,
    pub value: BigInt,
    pub divisible: bool,
    /// `value / 5^n` when divisible.
    pub quotient: Option<BigInt>,
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub target: CongruenceTarget,
    pub n: u32,
    pub modulus: BigInt,
    pub progression_modulus: u64,
    pub first_m: u64,
    pub cases: Vec<CongruenceCase>,
}

impl CongruenceReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.divisible)
    }
}

/// Minimal positive solution of `24 x = 1 (mod modulus)`.
pub fn inverse_of_24(modulus: u64) -> u64 {
    assert_eq!(modulus.gcd(&24), 1, "24 must be invertible mod {modulus}");
    let m = modulus as i128;
    let (mut r0, mut r1) = (24i128, m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "24 must be invertible mod {modulus}");
    (s0.rem_euclid(m)) as u64
}

/// Checks the congruence family on its arithmetic progression.
///
/// For the `a1` target the progression is `24 m = 1 (mod 5^{2n})` and the
/// claim is `5^n | A_1(m)`; for `p` it is `24 m = 1 (mod 5^n)` with
/// `5^n | p(m)`. The first `count` values of `m` are tested and each case
/// reports the witness quotient.
pub fn check_congruence(
    target: CongruenceTarget,
    n: u32,
    count: usize,
    prec: Precision,
) -> Result<CongruenceReport, PartitionError> {
    assert!(n >= 1 && count >= 1);
    let progression_modulus = match target {
        CongruenceTarget::A1 => 5u64.pow(2 * n),
        CongruenceTarget::P => 5u64.pow(n),
    };
    let first_m = inverse_of_24(progression_modulus);
    let max_m = first_m + (count as u64 - 1) * progression_modulus;
    let modulus = BigInt::from(5).pow(n);

    let values: Vec<BigInt> = match target {
        CongruenceTarget::A1 => {
            if (prec.depth() as u64) <= max_m {
                return Err(PartitionError::InsufficientPrecision {
                    need: max_m + 1,
                    have: prec.depth() as u64,
                });
            }
            let series = a1_series(prec);
            (0..count)
                .map(|k| {
                    let m = first_m + k as u64 * progression_modulus;
                    series.coeff(m as i64).expect("within depth")
                })
                .collect()
        }
        CongruenceTarget::P => {
            let table = p_table(max_m as usize);
            (0..count)
                .map(|k| {
                    let m = first_m + k as u64 * progression_modulus;
                    table[m as usize].clone()
                })
                .collect()
        }
    };

    let cases = values
        .into_iter()
        .enumerate()
        .map(|(k, value)| {
            let m = first_m + k as u64 * progression_modulus;
            let (q, r) = value.div_rem(&modulus);
            let divisible = r.is_zero();
            CongruenceCase {
                m,
                value,
                divisible,
                quotient: divisible.then_some(q),
            }
        })
        .collect();

    Ok(CongruenceReport {
        target,
        n,
        modulus,
        progression_modulus,
        first_m,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rr_subpartition_worked_examples() {
        assert_eq!(rr_subpartition_len(&[8, 5, 3, 2, 2, 1, 1, 1]), 3);
        assert_eq!(rr_subpartition_len(&[8, 8, 2, 2, 1, 1, 1]), 0);
        assert_eq!(rr_subpartition_len(&[5]), 1);
        assert_eq!(rr_subpartition_len(&[2, 2, 1]), 0);
        assert_eq!(rr_subpartition_len(&[4, 1]), 2);
        assert_eq!(rr_subpartition_len(&[3, 2]), 1);
        assert_eq!(rr_subpartition_len(&[3, 1, 1]), 1);
        assert_eq!(rr_subpartition_len(&[2, 1, 1, 1]), 1);
        assert_eq!(rr_subpartition_len(&[1, 1, 1, 1, 1]), 0);
        // boundary backs off when the prefix ends on a tie
        assert_eq!(rr_subpartition_len(&[8, 5, 3, 3]), 2);
    }

    #[test]
    fn a1_bruteforce_small_values() {
        let five = a1_bruteforce(5).unwrap();
        assert_eq!(five.counts.get(&1), Some(&4));
        assert_eq!(five.counts.get(&2), Some(&1));
        assert_eq!(five.counts.get(&0), Some(&2));
        assert_eq!(five.a1, 6);
        assert_eq!(five.total(), 7);

        assert_eq!(a1_bruteforce(1).unwrap().a1, 1);
        assert_eq!(a1_bruteforce(4).unwrap().a1, 4);

        assert!(matches!(
            a1_bruteforce(61),
            Err(PartitionError::BoundExceeded { m: 61, bound: 60 })
        ));
    }

    #[test]
    fn partition_counts() {
        let table = p_table(30);
        assert_eq!(table[0], BigInt::one());
        assert_eq!(table[5], BigInt::from(7));
        assert_eq!(table[23], BigInt::from(1255));
        assert_eq!(p_of(0), BigInt::one());

        // Recurrence vs. direct enumeration.
        for m in 1..=30u32 {
            let mut count = 0u64;
            for_each_partition(m, |_| count += 1);
            assert_eq!(table[m as usize], BigInt::from(count), "p({m})");
        }
    }

    #[test]
    fn a1_series_matches_definition() {
        let series = a1_series(Precision::new(40));
        assert_eq!(series.coeff(1).unwrap(), BigInt::one());
        assert_eq!(series.coeff(4).unwrap(), BigInt::from(4));
        assert_eq!(series.coeff(5).unwrap(), BigInt::from(6));

        // A_1(m) = sum over r >= 1 of p(m - r^2)
        let table = p_table(40);
        for m in 1..40i64 {
            let mut want = BigInt::zero();
            let mut r = 1i64;
            while r * r <= m {
                want += &table[(m - r * r) as usize];
                r += 1;
            }
            assert_eq!(series.coeff(m).unwrap(), want, "A_1({m})");
        }
    }

    #[test]
    fn a_series_first_values() {
        let a = a_series(Precision::new(30));
        assert_eq!(a.coeff(0).unwrap(), BigInt::one());
        assert_eq!(a.coeff(4).unwrap(), BigInt::from(13));
        assert_eq!(a.coeff(5).unwrap(), BigInt::from(19));
    }

    #[test]
    fn congruence_first_cases() {
        let r = check_congruence(CongruenceTarget::A1, 1, 2, Precision::new(60)).unwrap();
        assert_eq!(r.first_m, 24);
        assert_eq!(r.cases[0].value, BigInt::from(2080));
        assert!(r.cases[0].divisible);
        assert_eq!(r.cases[0].quotient, Some(BigInt::from(416)));
        assert!(r.all_pass());

        let p = check_congruence(CongruenceTarget::P, 1, 3, Precision::new(16)).unwrap();
        assert_eq!(p.first_m, 4);
        assert_eq!(p.cases[0].value, BigInt::from(5));
        assert!(p.all_pass());

        assert!(matches!(
            check_congruence(CongruenceTarget::A1, 2, 1, Precision::new(100)),
            Err(PartitionError::InsufficientPrecision { need: 600, .. })
        ));
    }

    #[test]
    fn inverse_of_24_minimality() {
        assert_eq!(inverse_of_24(5), 4);
        assert_eq!(inverse_of_24(25), 24);
        assert_eq!(inverse_of_24(125), 99);
        assert_eq!(inverse_of_24(625), 599);
    }
}
