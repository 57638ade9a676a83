//! Numerical experiments: the vanishing-sum scan at the Wieferich primes,
//! the consistent-vanishing intersection, the three-term lower-bound audit,
//! and a Wieferich prime search.

use crate::hsums::{eval_naive, eval_sum, PrefixTables, SumSpec, SumVariant};
use crate::modmath::{is_prime, pow_mod, primes_in};
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// One vanishing sum found by a scan: the window value is 0 mod p by
/// membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VanishingRecord {
    pub variant: SumVariant,
    pub k: u32,
    pub n: u32,
    pub p: u64,
    pub term_count: u64,
    /// Always zero; carried so serialized records are self-describing.
    pub value: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanError {
    /// Consistency needs at least two primes to intersect.
    NeedTwoPrimes,
    NotPrime(u64),
}

impl fmt::Display for ScanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScanError::NeedTwoPrimes => write!(f, "consistency scan needs at least two primes"),
            ScanError::NotPrime(p) => write!(f, "{p} is not prime"),
        }
    }
}

/// The one family of windows that vanishes for every prime: the centered
/// plain window of an odd denominator, `s((N-1)/2, N)`. It is its own
/// mirror image, so its terms pair up as complements `j + (p - j) = p` and
/// the sum is identically zero. These are the only windows with fewer than
/// three terms that can vanish; every other window lies entirely on one
/// side of `p/2`, where complement pairs are impossible.
pub fn is_structural_zero(variant: SumVariant, k: u32, n: u32) -> bool {
    variant == SumVariant::Plain && n % 2 == 1 && 2 * k + 1 == n
}

/// All windows `(variant, k, N)` with `N <= n_max`, `k < N`, at least one
/// term, and value 0 mod p. One prefix-table build, O(1) per window.
/// Output is sorted by `(N, k)` with the variant order fixed.
///
/// Every record is asserted to have at least three terms unless it is a
/// structural zero; a violation would falsify the distinct-reciprocals
/// lower bound and aborts the scan.
pub fn scan_vanishing(p: u64, n_max: u32, variants: &[SumVariant]) -> Vec<VanishingRecord> {
    debug_assert!(is_prime(p) && p >= 3);
    let tables = PrefixTables::build(p);
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in 0..n {
            for &variant in variants {
                let spec = SumSpec::new(variant, k, n).expect("k < n by construction");
                let count = spec.term_count(p);
                if count == 0 {
                    continue;
                }
                if !eval_sum(&spec, &tables).is_zero() {
                    continue;
                }
                assert!(
                    count >= 3 || is_structural_zero(variant, k, n),
                    "three-term bound violated: {spec} vanishes at p={p} with {count} terms"
                );
                out.push(VanishingRecord {
                    variant,
                    k,
                    n,
                    p,
                    term_count: count,
                    value: 0,
                });
            }
        }
    }
    out
}

/// Windows that vanish at every one of the given primes. At least two
/// primes are required; each must be prime.
pub fn consistent_vanishing(
    primes: &[u64],
    n_max: u32,
    variants: &[SumVariant],
) -> Result<BTreeSet<(SumVariant, u32, u32)>, ScanError> {
    if primes.len() < 2 {
        return Err(ScanError::NeedTwoPrimes);
    }
    if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(ScanError::NotPrime(bad));
    }
    let mut common: Option<BTreeSet<(SumVariant, u32, u32)>> = None;
    for &p in primes {
        let found: BTreeSet<_> = scan_vanishing(p, n_max, variants)
            .into_iter()
            .map(|r| (r.variant, r.k, r.n))
            .collect();
        common = Some(match common {
            None => found,
            Some(acc) => acc.intersection(&found).copied().collect(),
        });
    }
    Ok(common.unwrap_or_default())
}

/// Wieferich test to base `b`: `b^(p-1) = 1 mod p^2`. Computing the power
/// mod p^2 directly is the cheapest sufficient test; no quotient division
/// is needed.
pub fn is_wieferich(p: u64, base: u64) -> bool {
    if base.is_multiple_of(p) {
        return false;
    }
    let p2 = match p.checked_mul(p) {
        Some(v) => v,
        None => return false,
    };
    pow_mod(base, p - 1, p2) == 1
}

/// All primes in `[lo, hi]` not dividing `base` with
/// `base^(p-1) = 1 mod p^2`, ascending.
pub fn wieferich_scan(lo: u64, hi: u64, base: u64) -> Vec<u64> {
    primes_in(lo, hi)
        .into_iter()
        .filter(|&p| !base.is_multiple_of(p) && is_wieferich(p, base))
        .collect()
}

/// Result of the three-term audit.
#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    /// Vanishing windows with fewer than three terms that are not
    /// structural zeros. Expected empty.
    pub counterexamples: Vec<VanishingRecord>,
    /// How many short structural zeros (centered plain windows with one or
    /// two terms) the audit saw and classified.
    pub structural_zeros: u64,
    pub primes_checked: u64,
    pub windows_checked: u64,
}

/// Exhaustively checks, for every odd prime `p <= p_max`, every variant and
/// every window with `N <= p`, that no sum with one or two terms vanishes
/// mod p — except the structural centered windows, which vanish for every
/// prime and are tallied separately. (`p = 2` only admits single-term
/// windows and is skipped.)
pub fn three_term_audit(p_max: u64) -> AuditReport {
    let mut report = AuditReport::default();
    for p in primes_in(3, p_max) {
        report.primes_checked += 1;
        let tables = PrefixTables::build(p);
        for n in 1..=(p as u32) {
            for k in 0..n {
                for variant in SumVariant::ALL {
                    let spec = SumSpec::new(variant, k, n).expect("k < n");
                    let count = spec.term_count(p);
                    report.windows_checked += 1;
                    if count == 0 || count >= 3 {
                        continue;
                    }
                    if !eval_sum(&spec, &tables).is_zero() {
                        continue;
                    }
                    if is_structural_zero(variant, k, n) {
                        report.structural_zeros += 1;
                    } else {
                        report.counterexamples.push(VanishingRecord {
                            variant,
                            k,
                            n,
                            p,
                            term_count: count,
                            value: 0,
                        });
                    }
                }
            }
        }
    }
    report
}

/// Re-evaluates a scan's records naively; any disagreement with the prefix
/// tables is an implementation bug.
pub fn recheck_naive(records: &[VanishingRecord]) -> bool {
    records.iter().all(|r| {
        let spec = SumSpec::new(r.variant, r.k, r.n).expect("record spec");
        eval_naive(&spec, r.p).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const STAR: [SumVariant; 1] = [SumVariant::Alternating];

    #[test]
    fn wieferich_known_range() {
        assert_eq!(wieferich_scan(2, 4000, 2), [1093, 3511]);
        assert!(wieferich_scan(2, 1000, 2).is_empty());
    }

    #[test]
    fn wieferich_skips_divisible_base() {
        assert!(!is_wieferich(2, 2));
        // 1093 in a range starting below 2
        assert_eq!(wieferich_scan(1000, 1200, 2), [1093]);
    }

    #[test]
    fn scan_at_1093_contains_the_q2_table() {
        let records = scan_vanishing(1093, 46, &STAR);
        let pairs: BTreeSet<(u32, u32)> = records.iter().map(|r| (r.k, r.n)).collect();
        for (k, n) in [(0, 1), (0, 2), (0, 3), (1, 3), (1, 5), (2, 6)] {
            assert!(pairs.contains(&(k, n)), "missing ({k},{n})");
        }
        assert!(records
            .windows(2)
            .all(|w| (w[0].n, w[0].k) <= (w[1].n, w[1].k)));
        assert!(recheck_naive(&records));
    }

    #[test]
    fn scan_plain_variant_sees_half_window() {
        // s(1,2) = 2 q_2 vanishes at a Wieferich prime
        let records = scan_vanishing(1093, 46, &[SumVariant::Plain]);
        assert!(records.iter().any(|r| (r.k, r.n) == (1, 2)));
    }

    #[test]
    fn scan_small_prime_no_short_records() {
        // p = 7, N <= 2: every vanishing record has at least three terms
        let records = scan_vanishing(7, 2, &SumVariant::ALL);
        assert!(records.iter().all(|r| r.term_count >= 3));
    }

    #[test]
    fn scan_reports_structural_zeros_with_counts() {
        // at p = 5 the centered third-window has two terms and vanishes
        let records = scan_vanishing(5, 3, &[SumVariant::Plain]);
        assert!(records
            .iter()
            .any(|r| (r.k, r.n, r.term_count) == (1, 3, 2)));
    }

    #[test]
    fn consistent_requires_two_primes() {
        assert_eq!(
            consistent_vanishing(&[1093], 46, &STAR),
            Err(ScanError::NeedTwoPrimes)
        );
        assert_eq!(
            consistent_vanishing(&[1093, 1094], 46, &STAR),
            Err(ScanError::NotPrime(1094))
        );
    }

    #[test]
    fn consistent_star_zeros_are_the_table_closure() {
        let got = consistent_vanishing(&[1093, 3511], 46, &STAR).unwrap();
        let want: BTreeSet<(SumVariant, u32, u32)> = vec![
            (0u32, 1u32),
            (0, 2),
            (1, 2),
            (0, 3),
            (1, 3),
            (2, 3),
            (1, 5),
            (3, 5),
            (2, 6),
            (3, 6),
        ]
        .into_iter()
        .map(|(k, n)| (SumVariant::Alternating, k, n))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn audit_small_range_clean() {
        let report = three_term_audit(50);
        assert!(
            report.counterexamples.is_empty(),
            "{:?}",
            report.counterexamples
        );
        assert!(report.structural_zeros > 0);
        assert_eq!(report.primes_checked, 14); // odd primes 3..=47
    }

    #[test]
    fn structural_zero_predicate() {
        assert!(is_structural_zero(SumVariant::Plain, 0, 1));
        assert!(is_structural_zero(SumVariant::Plain, 2, 5));
        assert!(!is_structural_zero(SumVariant::Alternating, 2, 5));
        assert!(!is_structural_zero(SumVariant::Plain, 1, 4));
        assert!(!is_structural_zero(SumVariant::Plain, 1, 5));
    }
}
